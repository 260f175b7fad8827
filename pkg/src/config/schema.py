"""Configuration defaults, merging and validation.

Precedence: DEFAULTS < config file < command-line flags. Every key the
library reads has a default here, so a config file only lists what it
changes.
"""

import copy
import math
from typing import Dict

from src.domain.errors import ConfigError

PIPELINES = ("ident", "robust_ident", "weak_ident", "gp_ident", "caslr")
BENCHMARK_NAMES = ("burgers", "viscous_burgers", "transport", "transport_diffusion", "kdv", "ks")

_SMALL_MONOMIAL = {"style": "monomial", "max_alpha": 2, "max_beta": 2, "max_total_degree": 2}

# Bundled experiment settings for `replicate`; each run is merged over the
# active config, once per seed.
REPLICATE_TABLES: Dict = {
    "table1": {
        "seeds": [0, 1, 2, 3, 4],
        "runs": [
            {"name": "clean", "overrides": {
                "pipeline": "ident", "data": {"benchmark": "burgers"}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": 0.0}, "denoise": {"kind": "none"}}},
            {"name": "noise8_raw", "overrides": {
                "pipeline": "ident", "data": {"benchmark": "burgers"}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": 8.0}, "denoise": {"kind": "none"}}},
            {"name": "noise8_lsma", "overrides": {
                "pipeline": "ident", "data": {"benchmark": "burgers"}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": 8.0}, "denoise": {"kind": "lsma"}}},
        ],
    },
    "table2": {
        "seeds": [0],
        "runs": [
            {"name": f"burgers_{level:g}pct", "overrides": {
                "pipeline": "ident", "data": {"benchmark": "burgers"}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": level}, "denoise": {"kind": "lsma"}}}
            for level in (4.0, 8.0, 16.0, 32.0)
        ] + [
            {"name": "viscous_burgers_0.02pct", "overrides": {
                "pipeline": "ident", "data": {"benchmark": "viscous_burgers"}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": 0.02}, "denoise": {"kind": "lsma"}}},
        ],
    },
    "table3": {
        "seeds": [0, 1, 2],
        "runs": [
            {"name": "burgers_40pct_mtee", "overrides": {
                "pipeline": "robust_ident", "data": {"benchmark": "burgers"},
                "benchmarks": {"burgers": {"init": "sin4pi_cos2pi"}}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": 40.0}, "denoise": {"kind": "mls"},
                "selection": {"criterion": "mtee"}}},
            {"name": "transport_30pct", "overrides": {
                "pipeline": "robust_ident", "data": {"benchmark": "transport"}, "dictionary": _SMALL_MONOMIAL,
                "noise": {"kind": "percent", "level": 30.0}, "denoise": {"kind": "mls"},
                "selection": {"criterion": "mtee"}}},
        ],
    },
    "table4": {
        "seeds": [0, 1, 2],
        "runs": [
            {"name": "transport_diffusion_nsr0.5", "overrides": {
                "pipeline": "weak_ident", "data": {"benchmark": "transport_diffusion"},
                "noise": {"kind": "nsr", "level": 0.5}}},
            {"name": "kdv_clean", "overrides": {
                "pipeline": "weak_ident", "data": {"benchmark": "kdv"},
                "noise": {"kind": "nsr", "level": 0.0}}},
        ],
    },
}

DEFAULTS: Dict = {
    "pipeline": "weak_ident",
    "seed": 0,
    "data": {"path": "", "benchmark": "burgers", "truth": ""},
    "benchmarks": {
        "burgers": {
            "x_range": [0.0, 1.0], "nx": 256, "boundary": "dirichlet",
            "final_time": 0.05, "nt": 101, "init": "sin4pi", "refine": 10,
        },
        "viscous_burgers": {
            "x_range": [0.0, 1.0], "nx": 256, "boundary": "periodic",
            "final_time": 0.1, "nt": 101, "init": "sin2pi", "refine": 10,
        },
        "transport": {
            "x_range": [0.0, 1.0], "nx": 128, "boundary": "periodic",
            "final_time": 0.5, "nt": 101, "init": "sin2pi", "refine": 10,
        },
        "transport_diffusion": {
            "x_range": [0.0, 1.0], "nx": 128, "boundary": "periodic",
            "final_time": 0.5, "nt": 101, "init": "sin2pi", "refine": 10,
        },
        "kdv": {
            "x_range": [0.0, 6.283185307179586], "nx": 128, "boundary": "periodic",
            "final_time": 1.0, "nt": 101, "init": "cos", "refine": 20,
        },
        "ks": {
            "x_range": [0.0, 100.53096491487338], "nx": 256, "boundary": "periodic",
            "final_time": 40.0, "nt": 201, "init": "ks", "refine": 20,
        },
    },
    "noise": {"kind": "percent", "level": 0.0},
    "denoise": {"kind": "mls", "h": None, "degree": 2},
    "dictionary": {"style": "weak", "max_alpha": 3, "max_beta": 3, "max_total_degree": 3},
    "weak": {
        "mx": None, "mt": None, "px": None, "pt": 2,
        "stride": [1, 1], "max_rows": 10000,
        "score_feature": "(u^2)_x", "histogram_bins": 200, "narrow_fit": True,
    },
    "regression": {
        "lasso_lambdas": 20, "lasso_tol": 1e-8, "lasso_max_iter": 100000,
        "trim_rho": 0.05, "max_sparsity": None, "max_subset_size": 12,
    },
    "selection": {
        "criterion": "cee", "cee_alpha": 0.8, "mtee_window": None,
        "fine_dt_ratio": 10, "n_rr": 5, "rr_rho": 0.015, "bee_tol": 0.05,
    },
    "varying": {
        "basis": "bspline", "order": 3, "nb": 20, "nb_grid": [5, 10, 15, 20, 25],
        "in_time": False, "nb_time": 3, "form": "differential",
        "group_lasso_lambda": 0.01, "patches": 4, "overlap": 0.25, "mask": {},
    },
    "parallel": {"max_workers": 4},
    "output": {"dir": "out", "plots": True},
    "logging": {"level": "INFO", "dir": "logs"},
    "replicate": REPLICATE_TABLES,
}


def merge_config(base: Dict, override: Dict) -> Dict:
    """Recursive merge; values in override win, nested dicts are merged."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _positive(cfg: Dict, section: str, key: str, allow_none: bool = False):
    value = cfg[section].get(key)
    if value is None and allow_none:
        return
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"{section}.{key} must be positive, got {value!r}")


def validate_config(cfg: Dict) -> Dict:
    """Check value ranges; raises ConfigError naming the offending key."""
    if cfg.get("pipeline") not in PIPELINES:
        raise ConfigError(f"pipeline must be one of {PIPELINES}, got {cfg.get('pipeline')!r}")
    if not isinstance(cfg.get("seed"), int):
        raise ConfigError(f"seed must be an integer, got {cfg.get('seed')!r}")

    data = cfg["data"]
    if not data.get("path") and data.get("benchmark") not in BENCHMARK_NAMES:
        raise ConfigError(
            f"data.benchmark must be one of {BENCHMARK_NAMES} when data.path is empty, "
            f"got {data.get('benchmark')!r}"
        )
    if data.get("truth") and data["truth"] not in BENCHMARK_NAMES:
        raise ConfigError(f"data.truth must be empty or one of {BENCHMARK_NAMES}, got {data['truth']!r}")

    noise = cfg["noise"]
    if noise.get("kind") not in ("percent", "nsr"):
        raise ConfigError(f"noise.kind must be 'percent' or 'nsr', got {noise.get('kind')!r}")
    level = noise.get("level")
    if not isinstance(level, (int, float)) or level < 0 or not math.isfinite(level):
        raise ConfigError(f"noise.level must be a nonnegative number, got {level!r}")

    denoise = cfg["denoise"]
    if denoise.get("kind") not in ("lsma", "mls", "none"):
        raise ConfigError(f"denoise.kind must be lsma, mls or none, got {denoise.get('kind')!r}")
    _positive(cfg, "denoise", "h", allow_none=True)
    if denoise.get("degree") not in (2, 3, 4):
        raise ConfigError(f"denoise.degree must be 2, 3 or 4, got {denoise.get('degree')!r}")

    dictionary = cfg["dictionary"]
    if dictionary.get("style") not in ("weak", "monomial"):
        raise ConfigError(f"dictionary.style must be weak or monomial, got {dictionary.get('style')!r}")
    if not 0 <= int(dictionary.get("max_alpha", -1)) <= 4:
        raise ConfigError(f"dictionary.max_alpha must be in [0, 4], got {dictionary.get('max_alpha')!r}")
    if not 0 <= int(dictionary.get("max_beta", -1)) <= 6:
        raise ConfigError(f"dictionary.max_beta must be in [0, 6], got {dictionary.get('max_beta')!r}")

    weak = cfg["weak"]
    for key in ("mx", "mt", "px"):
        _positive(cfg, "weak", key, allow_none=True)
    _positive(cfg, "weak", "pt")
    _positive(cfg, "weak", "max_rows")
    _positive(cfg, "weak", "histogram_bins")
    stride = weak.get("stride")
    if not (isinstance(stride, (list, tuple)) and len(stride) == 2 and all(int(s) >= 1 for s in stride)):
        raise ConfigError(f"weak.stride must be two positive integers, got {stride!r}")

    _positive(cfg, "regression", "lasso_lambdas")
    _positive(cfg, "regression", "lasso_tol")
    _positive(cfg, "regression", "lasso_max_iter")
    _positive(cfg, "regression", "trim_rho")
    _positive(cfg, "regression", "max_sparsity", allow_none=True)
    _positive(cfg, "regression", "max_subset_size")

    selection = cfg["selection"]
    if selection.get("criterion") not in ("tee", "mtee", "cee"):
        raise ConfigError(f"selection.criterion must be tee, mtee or cee, got {selection.get('criterion')!r}")
    if not 0 < float(selection.get("cee_alpha", 0)) < 1:
        raise ConfigError(f"selection.cee_alpha must be in (0, 1), got {selection.get('cee_alpha')!r}")
    if float(selection.get("fine_dt_ratio", 0)) < 10:
        raise ConfigError("selection.fine_dt_ratio must be at least 10")
    _positive(cfg, "selection", "mtee_window", allow_none=True)
    _positive(cfg, "selection", "n_rr")
    _positive(cfg, "selection", "rr_rho")
    _positive(cfg, "selection", "bee_tol")

    varying = cfg["varying"]
    if varying.get("basis") not in ("hat", "bspline"):
        raise ConfigError(f"varying.basis must be hat or bspline, got {varying.get('basis')!r}")
    if varying.get("form") not in ("differential", "weak"):
        raise ConfigError(f"varying.form must be differential or weak, got {varying.get('form')!r}")
    if not isinstance(varying.get("nb"), int) or varying["nb"] < 2:
        if varying.get("nb") != "bee":
            raise ConfigError(f"varying.nb must be an integer >= 2 or 'bee', got {varying.get('nb')!r}")
    if not 0 <= float(varying.get("overlap", -1)) < 1:
        raise ConfigError(f"varying.overlap must be in [0, 1), got {varying.get('overlap')!r}")
    _positive(cfg, "varying", "patches")
    for label, role in (varying.get("mask") or {}).items():
        if role not in ("constant", "varying", "excluded"):
            raise ConfigError(f"varying.mask[{label!r}] must be constant, varying or excluded, got {role!r}")

    _positive(cfg, "parallel", "max_workers")
    return cfg
