"""Numerics and data types: grids, simulation, denoising, dictionaries, systems, regression, selection, metrics."""
