"""End-to-end pipeline runs on small clean benchmarks."""

import json
from pathlib import Path

import numpy as np
import pytest

from src.config.schema import merge_config, validate_config
from src.data.writers.field_writer import write_field
from src.domain.errors import ConfigError, FieldError
from src.domain.models import PipelineOptions
from src.domain.selection import rr_select
from src.pipeline import identification
from src.pipeline.pipeline import IdentPipeline, run_pipeline, write_noisy_field
from src.pipeline.settings import noise_spec, simulate_benchmark

SMALL_MONOMIAL = {"style": "monomial", "max_alpha": 2, "max_beta": 2, "max_total_degree": 2}


@pytest.fixture
def small_config(config):
    """Clean transport on a coarse grid with a small monomial dictionary."""
    return validate_config(merge_config(config, {
        "pipeline": "ident",
        "data": {"benchmark": "transport"},
        "benchmarks": {"transport": {"nx": 64, "nt": 41, "final_time": 0.2, "refine": 5}},
        "dictionary": SMALL_MONOMIAL,
        "denoise": {"kind": "none"},
        "regression": {"lasso_lambdas": 8, "max_subset_size": 3, "max_sparsity": 4},
        "selection": {"criterion": "cee"},
        "varying": {"nb": 5, "patches": 4},
    }))


def run(config, tmp_path, **kwargs):
    options = PipelineOptions(pipeline=config["pipeline"], seed=int(config["seed"]),
                              output_dir=str(tmp_path / "run"), **kwargs)
    return IdentPipeline(config).run(options)


@pytest.mark.unit
class TestSettings:
    def test_percent_level_becomes_fraction(self, config):
        spec = noise_spec(merge_config(config, {"noise": {"kind": "percent", "level": 8.0}}))
        assert spec.level == pytest.approx(0.08)

    def test_nsr_level_is_a_ratio(self, config):
        spec = noise_spec(merge_config(config, {"noise": {"kind": "nsr", "level": 0.5}}), seed=4)
        assert spec.level == 0.5 and spec.seed == 4

    def test_simulated_grid_follows_config(self, small_config):
        field = simulate_benchmark(small_config)
        assert field.values.shape == (64, 41)
        assert field.grid.t[-1] == pytest.approx(0.2)


@pytest.mark.integration
class TestIdentPipeline:
    def test_unknown_pipeline(self, small_config, tmp_path):
        with pytest.raises(ConfigError, match="unknown pipeline"):
            IdentPipeline(small_config).run(PipelineOptions(pipeline="nope", output_dir=str(tmp_path)))

    def test_ident_recovers_transport(self, small_config, tmp_path):
        messages = []
        result = IdentPipeline(small_config).run(
            PipelineOptions(pipeline="ident", output_dir=str(tmp_path / "run")), messages.append)
        report = result.report
        assert "u_x" in report["chosen"]["support"]
        assert report["chosen"]["coefficients"]["u_x"] == pytest.approx(-1.0, rel=0.05)
        assert report["data"]["truth"] == "transport"
        assert report["metrics"]["tpr"] == 1.0
        assert report["metrics"]["e_c"] < 0.05
        assert any(m.startswith("Chosen model") for m in messages)

    def test_outputs_written(self, small_config, tmp_path):
        result = run(small_config, tmp_path)
        out = tmp_path / "run"
        for name in ("report.json", "config_used.json", "tee_candidates.csv", "field_grid.csv"):
            assert (out / name).exists(), name
        assert str(out / "report.json") in result.output_paths
        saved = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert saved["pipeline"] == "ident"
        assert saved["dictionary"][:3] == ["1", "u", "u_x"]

    def test_no_outputs_when_disabled(self, small_config, tmp_path):
        result = run(small_config, tmp_path, write_outputs=False)
        assert result.output_paths == []
        assert not (tmp_path / "run").exists()

    def test_report_is_deterministic_in_seed(self, small_config, tmp_path):
        noisy = merge_config(small_config, {"noise": {"kind": "percent", "level": 1.0}})
        first = run_pipeline(noisy, write_outputs=False)
        second = run_pipeline(noisy, write_outputs=False)
        assert first["chosen"] == second["chosen"]
        assert first["data"]["noise"]["sigma"] > 0

    def test_field_file_with_truth(self, small_config, tmp_path):
        path, _ = write_noisy_field(small_config, str(tmp_path / "field.csv"))
        cfg = merge_config(small_config, {"data": {"path": path, "truth": "transport"}})
        report = run(cfg, tmp_path, write_outputs=False).report
        assert report["data"]["source"] == path
        assert "e_c" in report["metrics"]

    def test_field_file_without_truth_has_no_metrics(self, small_config, tmp_path):
        path = write_field(simulate_benchmark(small_config), tmp_path / "field.csv")
        cfg = merge_config(small_config, {"data": {"path": path}})
        report = run(cfg, tmp_path, write_outputs=False).report
        assert report["data"]["truth"] is None
        assert report["metrics"] == {}

    def test_missing_field_file(self, small_config, tmp_path):
        cfg = merge_config(small_config, {"data": {"path": str(tmp_path / "missing.csv")}})
        with pytest.raises(FieldError, match="missing.csv"):
            run(cfg, tmp_path)


@pytest.mark.slow
@pytest.mark.integration
class TestOtherPipelines:
    def test_robust_ident(self, small_config, tmp_path):
        report = run(merge_config(small_config, {"pipeline": "robust_ident"}), tmp_path).report
        assert "u_x" in report["chosen"]["support"]
        assert report["candidates"] and all(c["criterion"] == "cee" for c in report["candidates"])

    def test_weak_ident(self, config, tmp_path):
        cfg = validate_config(merge_config(config, {
            "pipeline": "weak_ident",
            "data": {"benchmark": "transport"},
            "dictionary": {"style": "weak", "max_alpha": 2, "max_beta": 2},
        }))
        report = run(cfg, tmp_path).report
        assert "u_x" in report["chosen"]["support"]
        assert report["chosen"]["coefficients"]["u_x"] == pytest.approx(-1.0, rel=0.1)
        assert set(report["details"]["test_function"]) == {"mx", "mt", "px", "pt"}

    def test_gp_ident_exports_coefficient_functions(self, small_config, tmp_path):
        report = run(merge_config(small_config, {"pipeline": "gp_ident"}), tmp_path).report
        functions = report["coefficient_functions"]
        assert len(functions["x"]) == 64
        assert set(functions["values"]) == set(report["chosen"]["support"])
        assert (tmp_path / "run" / "coefficient_functions.csv").exists()
        assert report["system"]["form"] == "group"

    def test_caslr_reports_patch_coefficients(self, small_config, tmp_path):
        report = run(merge_config(small_config, {"pipeline": "caslr"}), tmp_path).report
        functions = report["coefficient_functions"]
        assert len(functions["x"]) == 4
        for values in functions["values"].values():
            assert len(values) == 4
        assert np.isfinite(report["chosen"]["residual"])
        assert all(c["criterion"] == "rrc" for c in report["candidates"])
        assert Path(tmp_path / "run" / "rr_curve.csv").exists()


@pytest.mark.unit
class TestResidualReductionInputs:
    def test_robust_feeds_squared_sweep_residuals(self, small_config, travelling_wave, monkeypatch):
        sweep, seen = [], []
        pursue = identification.subspace_pursuit

        def spy_sp(sys, k):
            model = pursue(sys, k)
            sweep.append(model)
            return model

        def spy_rr(residuals, n_rr, rho):
            seen.append(list(residuals))
            return rr_select(residuals, n_rr, rho)

        monkeypatch.setattr(identification, "subspace_pursuit", spy_sp)
        monkeypatch.setattr(identification, "rr_select", spy_rr)
        cfg = merge_config(small_config, {"selection": {"n_rr": 2}})
        result = identification.identify_robust(travelling_wave, cfg, lambda message: None)
        assert len(seen) == 1
        np.testing.assert_allclose(seen[0], [m.residual ** 2 for m in sweep])
        assert result.details["rr_k"] is not None
