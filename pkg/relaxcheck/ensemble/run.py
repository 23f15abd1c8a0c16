import os.path as osp
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from relaxcheck import utils
from relaxcheck.analysis import analyze_generator
from relaxcheck.ensemble import sample
from relaxcheck.ensemble.datamodel import (
    EnsembleConfig,
    EnsembleStats,
    Histogram,
    SampleRecord,
)
from relaxcheck.generator import GKLSGenerator
from relaxcheck.logger import SAMPLE_LEVEL_NAME, logger
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

_CHUNK = 250


def sample_labels(cfg: EnsembleConfig) -> List[Tuple[int, str]]:
    """(index, label) for every sample: random draws first, then the named families."""
    labels = [(i, "random") for i in range(cfg.n_samples)]
    labels += [(cfg.n_samples + j, name) for j, name in enumerate(cfg.special_samples)]
    return labels


def build_sample(cfg: EnsembleConfig, index: int, label: str) -> GKLSGenerator:
    if label == "random":
        return sample.sample_generator(cfg, index)
    return sample.special_generator(cfg, label)


def analyze_sample(
    cfg: EnsembleConfig,
    index: int,
    label: str,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Tuple[SampleRecord, Optional[dict]]:
    """Record for one sample, plus the generator dump if the main bound fails."""
    g = build_sample(cfg, index, label)
    analysis = analyze_generator(g, tolerances, witness_tolerance=cfg.witness_tolerance)
    profile = analysis.profile
    record = SampleRecord(
        index=index,
        label=label,
        ratio=analysis.constraints.tightness_ratio,
        rate_sum=profile.rate_sum,
        rate_max=float(profile.rates.max()),
        trace_c=g.trace_kossakowski,
        trace_identity_residual=analysis.trace_identity_residual,
        pairing_residual=analysis.structure.max_pairing_residual,
        zero_mode_count=analysis.structure.zero_mode_count,
        structure_ok=analysis.structure.passed,
        passed=analysis.constraints.passed,
    )
    dump = None
    if not record.passed:
        dump = {"index": index, "label": label, "generator": g.to_dict()}
    return record, dump


def _run_chunk(cfg: EnsembleConfig, items: List[Tuple[int, str]], tolerances: Tolerances):
    return [analyze_sample(cfg, index, label, tolerances) for index, label in items]


def _chunks(items, size):
    return [items[i : i + size] for i in range(0, len(items), size)]


def _argmax(records: List[SampleRecord]) -> Optional[SampleRecord]:
    scored = [r for r in records if r.ratio is not None]
    if not scored:
        return None
    # largest R, ties to the lowest index
    return min(scored, key=lambda r: (-r.ratio, r.index))


def histogram(ratios: List[float], bins: int) -> Histogram:
    upper = max([1.0, *ratios])
    counts, edges = np.histogram(np.asarray(ratios, dtype=float), bins=bins, range=(0.0, upper))
    return Histogram(edges=edges.tolist(), counts=counts.tolist())


def run_ensemble(
    cfg: EnsembleConfig,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    show_progress: bool = True,
) -> EnsembleStats:
    """Analyzes every sample of `cfg` and aggregates tightness ratios.

    The result does not depend on `cfg.n_workers`: every sample has its own RNG
    stream and aggregation runs over records sorted by index.
    """
    items = sample_labels(cfg)
    logger.info(
        f"Running ensemble d={cfg.d}, n={len(items)}, seed={cfg.seed}, workers={cfg.n_workers}"
    )
    results = []
    pbar = tqdm(total=len(items), desc=f"Sampling d={cfg.d}", disable=not show_progress)
    if cfg.n_workers == 1:
        for index, label in items:
            results.append(analyze_sample(cfg, index, label, tolerances))
            pbar.update(1)
    else:
        with ProcessPoolExecutor(max_workers=cfg.n_workers) as pool:
            chunks = _chunks(items, _CHUNK)
            for chunk_results in pool.map(
                _run_chunk, [cfg] * len(chunks), chunks, [tolerances] * len(chunks)
            ):
                results.extend(chunk_results)
                pbar.update(len(chunk_results))
    pbar.close()

    results.sort(key=lambda item: item[0].index)
    records = [record for record, _ in results]
    violations = [dump for _, dump in results if dump is not None]
    for dump in violations:
        logger.error(f"Main bound violated on sample {dump['index']}: {dump['generator']}")

    best = _argmax(records)
    argmax_generator = None
    if best is not None:
        argmax_generator = build_sample(cfg, best.index, best.label).to_dict()
        logger.log(
            SAMPLE_LEVEL_NAME,
            f"Largest tightness ratio at sample {best.index} ({best.label})",
            sample={"index": best.index, "ratio": best.ratio, "sum_rates": best.rate_sum},
        )
    ratios = [r.ratio for r in records if r.ratio is not None]
    structure_failures = sum(not r.structure_ok for r in records)
    if structure_failures:
        logger.warning(f"{structure_failures} samples failed the spectral structure check")

    return EnsembleStats(
        config=cfg,
        count=len(records),
        samples=records,
        max_ratio=best.ratio if best else None,
        argmax_index=best.index if best else None,
        argmax_generator=argmax_generator,
        histogram=histogram(ratios, cfg.histogram_bins),
        violation_count=len(violations),
        violations=violations,
        structure_failures=structure_failures,
        max_trace_identity_residual=max(r.trace_identity_residual for r in records),
        rng=sample.rng_metadata(),
    )


def save_ensemble(stats: EnsembleStats, json_path: str, csv_path: Optional[str] = None):
    """Writes the stats JSON and optionally the per-sample CSV, both atomically."""
    utils.write_json(utils.jsonable(stats.to_dict()), json_path, indent=True)
    if csv_path is not None:
        utils.write_csv(stats.to_dataframe(), csv_path)
    logger.info(f"Saved ensemble stats for d={stats.config.d} to {osp.dirname(osp.abspath(json_path))}")
