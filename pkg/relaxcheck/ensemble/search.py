"""Hill-climbing search for generators with a large tightness ratio.

Parameters are the Hamiltonian H and the Gaussian factor G of C = s G G^dagger/(d²-1),
so every candidate is a valid GKLS generator. Only improvements are accepted;
the step shrinks by 0.99 after every 100 consecutive rejections and the walk
restarts from a fresh draw after `stall_limit` rejections. The best generator
found over all restarts is reported.
"""

from typing import Optional, Tuple

import numpy as np
from tqdm import tqdm

from relaxcheck import errors
from relaxcheck.analysis import analyze_generator
from relaxcheck.constraints import RateSet, tightness_ratio
from relaxcheck.ensemble import sample
from relaxcheck.ensemble.datamodel import EnsembleConfig, SearchResult
from relaxcheck.generator import GKLSGenerator, to_superoperator
from relaxcheck.logger import SAMPLE_LEVEL_NAME, logger
from relaxcheck.spectrum import compute_spectrum, relaxation_profile
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

# keeps the search stream disjoint from the per-sample streams
SEARCH_STREAM = 2**64 - 1


def _ratio(g: GKLSGenerator, tolerances: Tolerances) -> Optional[float]:
    try:
        spec = compute_spectrum(to_superoperator(g), tolerances)
    except errors.RelaxcheckError:
        return None
    if spec.defective:
        return None
    return tightness_ratio(RateSet.from_profile(relaxation_profile(spec)))


def _factor_of(g: GKLSGenerator, scale: float) -> np.ndarray:
    """G with C = scale G G^dagger / (d²-1), from the eigendecomposition of C."""
    n = g.d * g.d - 1
    p, V = np.linalg.eigh(g.kossakowski)
    keep = p > 0
    if not np.any(keep):
        return np.zeros((n, 1), dtype=np.complex128)
    return V[:, keep] * np.sqrt(p[keep] * n / scale)


def _perturb(H, G, step, rng) -> Tuple[np.ndarray, np.ndarray]:
    dH = sample.random_hamiltonian(H.shape[0], 1.0, rng)
    dG = sample.crandn(G.shape, rng)
    h_scale = max(np.linalg.norm(H), 1.0) / H.shape[0]
    g_scale = max(np.linalg.norm(G), 1.0) / np.sqrt(G.size)
    return H + step * h_scale * dH, G + step * g_scale * dG


def saturation_search(
    cfg: EnsembleConfig,
    iterations: int,
    seed_family: Optional[str] = None,
    step: float = 0.1,
    stall_limit: int = 2000,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    show_progress: bool = True,
) -> SearchResult:
    """Maximizes the tightness ratio starting from sample 0 of `cfg` or a named family.

    Reports the best generator found; the supremum is never asserted.
    """
    if iterations < 0:
        raise errors.SchemaError(f"iterations must be >= 0, got {iterations}")
    scale = cfg.kossakowski_scale
    if seed_family is not None:
        start = sample.special_generator(cfg, seed_family)
        H, G = np.asarray(start.hamiltonian), _factor_of(start, scale)
    else:
        H, G = sample.sample_parameters(cfg, 0)
        start = GKLSGenerator.create(cfg.d, H, sample.kossakowski_from_factor(G, scale), tolerances)
    current = _ratio(start, tolerances) or 0.0
    best_ratio, best = current, start
    rng = sample.sample_rng(cfg.seed, SEARCH_STREAM)
    accepted, restarts, rejected = 0, 0, 0
    current_step = step

    for _ in tqdm(range(iterations), desc=f"Search d={cfg.d}", disable=not show_progress):
        H_new, G_new = _perturb(H, G, current_step, rng)
        candidate = GKLSGenerator.create(
            cfg.d, H_new, sample.kossakowski_from_factor(G_new, scale), tolerances
        )
        ratio = _ratio(candidate, tolerances)
        if ratio is not None and ratio > current:
            H, G, current = H_new, G_new, ratio
            accepted += 1
            rejected = 0
            if ratio > best_ratio:
                best_ratio, best = ratio, candidate
            continue
        rejected += 1
        if rejected % 100 == 0:
            current_step *= 0.99
        if rejected >= stall_limit:
            restarts += 1
            rejected = 0
            current_step = step
            H = sample.random_hamiltonian(cfg.d, cfg.hamiltonian_scale, rng)
            G = sample.crandn(G.shape, rng)
            restart = GKLSGenerator.create(
                cfg.d, H, sample.kossakowski_from_factor(G, scale), tolerances
            )
            current = _ratio(restart, tolerances) or 0.0

    logger.log(
        SAMPLE_LEVEL_NAME,
        f"Search finished: {accepted} accepted, {restarts} restarts",
        sample={"index": "best", "ratio": best_ratio, "sum_rates": cfg.d * best.trace_kossakowski},
    )
    return SearchResult(
        d=cfg.d,
        iterations=iterations,
        accepted=accepted,
        restarts=restarts,
        best_ratio=best_ratio,
        best_generator=best.to_dict(),
        report=analyze_generator(best, tolerances).to_dict(),
    )
