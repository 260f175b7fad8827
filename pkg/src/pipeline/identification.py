"""The five identification routines: ident, robust_ident, weak_ident, gp_ident and caslr.

Each takes the (possibly noisy) field and the validated config and returns
an Identification: the system it worked on, the chosen model, the scored
candidates and any flags raised on the way.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from src.domain.assembly import (
    assemble_differential,
    assemble_weak,
    column_normalize,
    error_normalize,
    high_dynamic_region,
    narrow_system,
)
from src.domain.errors import SelectionError
from src.domain.models import (
    CandidateModel,
    DictionaryStyle,
    Field,
    GroupSystem,
    LinearSystem,
    SmootherConfig,
    SmootherKind,
)
from src.domain.regression import (
    group_subspace_pursuit,
    group_trim,
    lasso_path,
    least_squares_on_support,
    subspace_pursuit,
    trim,
)
from src.domain.selection import (
    cee,
    mtee,
    rr_select,
    rrc_select,
    tee_candidates_from_path,
    tee_many,
)
from src.domain.varying import (
    assemble_group_system,
    build_basis,
    caslr_path,
    coefficient_functions,
    normalize_group_columns,
    patch_systems,
    select_basis_size,
    tile_patches,
)

from .settings import (
    denoise_field,
    dictionary_for,
    fine_step,
    max_workers,
    smoother_config,
    test_function_for,
)

logger = logging.getLogger(__name__)

Progress = Callable[[str], None]


@dataclass
class Identification:
    system: Union[LinearSystem, GroupSystem]
    chosen: CandidateModel
    coefficients: Dict[str, float]
    candidates: List[Dict] = field(default_factory=list)
    rr_curve: Optional[List[float]] = None
    coefficient_functions: Optional[Dict] = None
    denoised: Optional[Field] = None
    flags: List[str] = field(default_factory=list)
    details: Dict = field(default_factory=dict)


def _record(model: CandidateModel, criterion: str, score: float) -> Dict:
    return {
        "support": model.labels,
        "coefficients": model.coefficient_map(),
        "criterion": criterion,
        "score": float(score),
        "residual": float(model.residual),
    }


def _pick(models: Sequence[CandidateModel], scores: Sequence[float], flags: List[str]) -> int:
    """Lowest score; ties go to the sparser candidate, then the earlier one."""
    if not models:
        raise SelectionError("no candidate models to choose from")
    if not np.isfinite(scores).any():
        logger.warning("Every candidate scored inf (diverged); picking the sparsest")
        flags.append("diverged")
    order = sorted(range(len(models)), key=lambda i: (scores[i], models[i].sparsity, i))
    return order[0]


def _sparsity_range(config: Dict, n_features: int) -> range:
    cap = config["regression"].get("max_sparsity") or n_features
    return range(1, min(int(cap), n_features) + 1)


def _unique(models: Sequence[CandidateModel]) -> List[CandidateModel]:
    seen, out = set(), []
    for m in models:
        if m.support and m.support not in seen:
            seen.add(m.support)
            out.append(m)
    return out


def _rr_curve(residuals: Sequence[float], config: Dict, flags: List[str]):
    sel = config["selection"]
    if len(residuals) <= int(sel["n_rr"]):
        return None, None
    rr = rr_select(residuals, int(sel["n_rr"]), float(sel["rr_rho"]))
    if rr.flagged:
        flags.append("rr_fallback")
    return rr, rr.scores


def identify_ident(U: Field, config: Dict, progress: Progress) -> Identification:
    """Pre-denoised data, plain finite differences, LASSO path, TEE over path subsets."""
    flags: List[str] = []
    dictionary = dictionary_for(config)
    denoised = denoise_field(U, smoother_config(config))
    progress("Assembling differential system (pre-denoised, plain differences)...")
    sys = column_normalize(assemble_differential(denoised, dictionary, SmootherConfig(SmootherKind.NONE)))
    flags.extend(sys.warnings)

    reg = config["regression"]
    progress(f"LASSO path over {reg['lasso_lambdas']} lambdas...")
    path = lasso_path(sys, int(reg["lasso_lambdas"]), float(reg["lasso_tol"]), int(reg["lasso_max_iter"]))
    supports = tee_candidates_from_path(path, int(reg["max_subset_size"]))
    if not supports:
        raise SelectionError("LASSO path produced no candidate support")
    models = [least_squares_on_support(sys, s) for s in supports]
    for m in models:
        flags.extend(m.flags)

    progress(f"Time-evolution error for {len(models)} candidates...")
    scores = tee_many(models, denoised, fine_step(config, U.grid), max_workers=max_workers(config))
    best = _pick(models, scores, flags)
    chosen = models[best]
    return Identification(
        system=sys,
        chosen=chosen,
        coefficients=chosen.coefficient_map(),
        candidates=[_record(m, "tee", s) for m, s in zip(models, scores)],
        denoised=denoised,
        flags=flags,
        details={"lasso_path": [{"lambda": lam, "active": [sys.terms[i].label for i in a]} for lam, a in path]},
    )


def _criterion_scores(models: Sequence[CandidateModel], sys: LinearSystem, data: Field,
                      config: Dict, flags: List[str]) -> List[float]:
    sel = config["selection"]
    criterion = sel["criterion"]
    if criterion == "cee":
        return [cee(sys, m.support, float(sel["cee_alpha"]), flags) for m in models]
    fine = fine_step(config, data.grid)
    if criterion == "mtee":
        return [mtee(m, data, fine, sel.get("mtee_window"), max_workers(config)) for m in models]
    return tee_many(models, data, fine, max_workers=max_workers(config))


def identify_robust(U: Field, config: Dict, progress: Progress) -> Identification:
    """SDD system, subspace pursuit per sparsity, TEE/MTEE/CEE selection."""
    flags: List[str] = []
    smoother = smoother_config(config)
    dictionary = dictionary_for(config)
    progress(f"Assembling differential system with SDD ({smoother.kind.value})...")
    sys = column_normalize(assemble_differential(U, dictionary, smoother))
    flags.extend(sys.warnings)
    denoised = denoise_field(U, smoother)

    sweep = [subspace_pursuit(sys, k) for k in _sparsity_range(config, sys.n_features)]
    rr, rr_curve = _rr_curve([m.residual ** 2 for m in sweep], config, flags)
    models = _unique(sweep)
    for m in models:
        flags.extend(m.flags)

    criterion = config["selection"]["criterion"]
    progress(f"Scoring {len(models)} candidates by {criterion.upper()}...")
    scores = _criterion_scores(models, sys, denoised, config, flags)
    best = _pick(models, scores, flags)
    chosen = models[best]
    return Identification(
        system=sys,
        chosen=chosen,
        coefficients=chosen.coefficient_map(),
        candidates=[_record(m, criterion, s) for m, s in zip(models, scores)],
        rr_curve=rr_curve,
        denoised=denoised,
        flags=flags,
        details={"rr_k": rr.k if rr else None},
    )


def identify_weak(U: Field, config: Dict, progress: Progress) -> Identification:
    """Weak system, error + column normalization, SP sweep, narrow fit, trimming, CEE."""
    flags: List[str] = []
    weak = config["weak"]
    dictionary = dictionary_for(config, DictionaryStyle.WEAK)
    phi = test_function_for(config, U, dictionary)
    progress(f"Assembling weak system (mx={phi.mx} mt={phi.mt} px={phi.px} pt={phi.pt})...")
    raw = assemble_weak(U, dictionary, phi, tuple(weak["stride"]), int(weak["max_rows"]))
    sys = column_normalize(error_normalize(raw))
    flags.extend(sys.warnings)

    narrow = sys
    if weak.get("narrow_fit", True):
        feature = weak["score_feature"]
        if feature in sys.labels:
            rows = high_dynamic_region(sys, feature, int(weak["histogram_bins"]))
            narrow = narrow_system(sys, rows)
        else:
            logger.warning("Score feature %s not in the system; narrow fit uses every row", feature)
            flags.append("narrow_fit_skipped")

    sweep = [subspace_pursuit(sys, k) for k in _sparsity_range(config, sys.n_features)]
    _, rr_curve = _rr_curve([m.residual ** 2 for m in sweep], config, flags)
    rho = float(config["regression"]["trim_rho"])
    models = _unique([trim(narrow, least_squares_on_support(narrow, m.support), rho) for m in sweep])
    for m in models:
        flags.extend(m.flags)

    alpha = float(config["selection"]["cee_alpha"])
    progress(f"Scoring {len(models)} trimmed candidates by CEE...")
    scores = [cee(sys, m.support, alpha, flags) for m in models]
    best = _pick(models, scores, flags)
    chosen = models[best]
    return Identification(
        system=sys,
        chosen=chosen,
        coefficients=chosen.coefficient_map(),
        candidates=[_record(m, "cee", s) for m, s in zip(models, scores)],
        rr_curve=rr_curve,
        flags=flags,
        details={"test_function": {"mx": phi.mx, "mt": phi.mt, "px": phi.px, "pt": phi.pt},
                 "narrow_rows": narrow.n_rows},
    )


def _function_summary(functions: Dict[str, np.ndarray]) -> Dict[str, float]:
    return {label: float(np.mean(values)) for label, values in functions.items()}


def identify_gp(U: Field, config: Dict, progress: Progress) -> Identification:
    """Group system over a basis, GPSP per group sparsity, RR selection, group trimming."""
    flags: List[str] = []
    vary, weak = config["varying"], config["weak"]
    form = vary["form"]
    smoother = smoother_config(config)
    dictionary = dictionary_for(config, DictionaryStyle.WEAK if form == "weak" else None)
    phi = test_function_for(config, U, dictionary) if form == "weak" else None
    stride, max_rows = tuple(weak["stride"]), int(weak["max_rows"])
    mask = vary.get("mask") or None
    details: Dict = {}

    nb = vary["nb"]
    if nb == "bee":
        progress(f"Choosing the basis size by BEE over {vary['nb_grid']}...")
        selection, magnitudes = select_basis_size(
            U, dictionary, vary["nb_grid"], vary["basis"], int(vary["order"]),
            float(vary["group_lasso_lambda"]), form, smoother, phi, stride, max_rows, mask,
            float(config["selection"]["bee_tol"]))
        if selection.flagged:
            flags.append("no_plateau")
        nb = selection.nb
        details["bee"] = {"nb": nb, "changes": selection.changes,
                          "magnitudes": {str(k): v.tolist() for k, v in magnitudes.items()}}

    basis = build_basis(vary["basis"], int(nb), U.grid, bool(vary["in_time"]), int(vary["order"]),
                        int(vary["nb_time"]))
    progress(f"Assembling {form} group system (nb={basis.nb}, size {basis.size})...")
    gsys = normalize_group_columns(assemble_group_system(
        U, dictionary, basis, form, smoother=smoother, phi=phi, stride=stride, max_rows=max_rows, mask=mask))
    flags.extend(gsys.warnings)

    models = [group_subspace_pursuit(gsys, k) for k in _sparsity_range(config, gsys.n_groups)]
    residuals = [m.residual for m in models]
    rr, rr_curve = _rr_curve([r ** 2 for r in residuals], config, flags)
    if rr is not None:
        k = rr.k
    else:
        logger.warning("Too few group sparsities for RR; using RRC on %d fits", len(models))
        flags.append("rr_fallback")
        k = rrc_select([float(np.linalg.norm(gsys.rhs))] + residuals).l
    chosen = group_trim(gsys, models[k - 1], float(config["regression"]["trim_rho"]))
    flags.extend(chosen.flags)

    functions = coefficient_functions(gsys, chosen.coeffs, list(chosen.support))
    candidates = []
    for m in models:
        summary = _function_summary(coefficient_functions(gsys, m.coeffs, list(m.support)))
        candidates.append({"support": m.labels, "coefficients": summary, "criterion": "rr",
                           "score": float(m.residual), "residual": float(m.residual)})
    grid = U.grid
    exported = {"x": grid.x.tolist(), "values": {k_: v.tolist() for k_, v in functions.items()}}
    if basis.in_time:
        exported["t"] = grid.t.tolist()
    details.update({"nb": basis.nb, "rr_k": k})
    return Identification(
        system=gsys,
        chosen=chosen,
        coefficients=_function_summary(functions),
        candidates=candidates,
        rr_curve=rr_curve,
        coefficient_functions=exported,
        flags=flags,
        details=details,
    )


def identify_caslr(U: Field, config: Dict, progress: Progress) -> Identification:
    """Per-patch differential systems sharing one support, l chosen by RRC."""
    flags: List[str] = []
    vary = config["varying"]
    smoother = smoother_config(config)
    dictionary = dictionary_for(config)
    progress(f"Assembling differential system with SDD ({smoother.kind.value})...")
    sys = column_normalize(assemble_differential(U, dictionary, smoother))
    flags.extend(sys.warnings)

    n_patches, overlap = int(vary["patches"]), float(vary["overlap"])
    patches = patch_systems(sys, n_patches, overlap)
    max_l = max(1, min(sys.n_features - 1, config["regression"].get("max_sparsity") or sys.n_features))
    progress(f"CaSLR over {n_patches} patches, l = 1..{max_l}...")
    path = caslr_path(patches, max_l)
    result = path.chosen
    flags.extend(result.flags)

    coeffs = np.zeros(sys.n_features)
    support = list(result.support)
    coeffs[support] = result.coefficients[:, support].mean(axis=0)
    chosen = CandidateModel(tuple(support), coeffs, result.error, tuple(sys.terms), flags=list(result.flags))

    grid = U.grid
    centres = [grid.x[(lo + hi - 1) // 2] for lo, hi in tile_patches(grid.nx, n_patches, overlap)]
    exported = {"x": [float(c) for c in centres],
                "values": {sys.terms[k].label: result.coefficients[:, k].tolist() for k in support}}
    candidates = [{"support": r.labels,
                   "coefficients": {sys.terms[k].label: float(r.coefficients[:, k].mean()) for k in r.support},
                   "criterion": "rrc", "score": float(path.selection.scores[i + 1]), "residual": r.error}
                  for i, r in enumerate(path.results)]
    return Identification(
        system=sys,
        chosen=chosen,
        coefficients=chosen.coefficient_map(),
        candidates=candidates,
        rr_curve=path.selection.scores,
        coefficient_functions=exported,
        flags=flags,
        details={"l": path.selection.l, "rho": path.selection.rho, "local_errors": result.local_errors},
    )


IDENTIFIERS: Dict[str, Callable[[Field, Dict, Progress], Identification]] = {
    "ident": identify_ident,
    "robust_ident": identify_robust,
    "weak_ident": identify_weak,
    "gp_ident": identify_gp,
    "caslr": identify_caslr,
}
