"""PDE identification from a single noisy spatiotemporal observation."""

__version__ = "0.1.0"
