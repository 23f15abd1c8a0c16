"""Universal inequalities on the relaxation rates of a GKLS generator.

For any d-level GKLS generator with rates Gamma_1..Gamma_{d²-1}:

    sum_beta Gamma_beta >= (d / sqrt(2)) Gamma_alpha      (main bound)
    Gamma_alpha <= sum_beta Gamma_beta / 2                (half-sum bound)

and for d = 2 the pairwise form Gamma_k <= Gamma_i + Gamma_j. Every check is
relative: a margin passes when it is at least -tolerance * sum(Gamma).
"""

from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from relaxcheck import errors
from relaxcheck.constraints.datamodel import (
    ConstraintCheck,
    ConstraintReport,
    CorollaryReport,
    QubitReport,
    RateSet,
    TriangleMargin,
)
from relaxcheck.constraints.registry import register_constraint
from relaxcheck.logger import log_check
from relaxcheck.tolerances import DEFAULT_TOLERANCES


def _resolve_tolerance(tolerance: Optional[float]) -> float:
    if tolerance is None:
        return DEFAULT_TOLERANCES.witness
    if not np.isfinite(tolerance) or tolerance < 0:
        raise errors.SchemaError(f"Tolerance must be finite and >= 0, got {tolerance}")
    return float(tolerance)


def bound_constant(d: int) -> float:
    return d / np.sqrt(2)


def tightness_ratio(r: RateSet) -> Optional[float]:
    """R = max_alpha (d/sqrt(2)) Gamma_alpha / sum(Gamma); None for all-zero rates."""
    if r.is_zero:
        return None
    return float(bound_constant(r.d) * r.rates.max() / r.total)


def _main_margins(r: RateSet) -> np.ndarray:
    return r.total - bound_constant(r.d) * r.rates


def _half_sum_margins(r: RateSet) -> np.ndarray:
    return 0.5 * r.total - r.rates


def _triangle_margins(r: RateSet) -> List[Tuple[str, float]]:
    out = []
    for k in range(3):
        i, j = (m for m in range(3) if m != k)
        label = f"Gamma_{k + 1} <= Gamma_{i + 1} + Gamma_{j + 1}"
        out.append((label, float(r.rates[i] + r.rates[j] - r.rates[k])))
    return out


def _transverse_pair(r: RateSet, threshold: float) -> Optional[Tuple[int, int]]:
    best = None
    for i, j in combinations(range(3), 2):
        gap = abs(r.rates[i] - r.rates[j])
        if gap <= threshold and (best is None or gap < best[0]):
            best = (gap, (i, j))
    return best[1] if best else None


def _inverse(rate: float) -> float:
    return 1.0 / rate if rate > 0 else float("inf")


def check_qubit_relations(r: RateSet, tolerance: Optional[float] = None) -> QubitReport:
    """Pairwise qubit relations and, given a transverse pair, 2 T_L >= T_T.

    Raises:
        WrongDimensionError: if r.d != 2.
    """
    if r.d != 2:
        raise errors.WrongDimensionError(
            f"Qubit relations apply to d=2 only, got d={r.d}"
        )
    eps = _resolve_tolerance(tolerance)
    threshold = eps * r.total
    triangles = [
        TriangleMargin(permutation=label, margin=margin, passed=margin >= -threshold)
        for label, margin in _triangle_margins(r)
    ]
    report = QubitReport(
        triangles=triangles,
        passed=all(t.passed for t in triangles),
        indeterminate=r.is_zero,
    )
    pair = _transverse_pair(r, threshold)
    if pair is not None:
        longitudinal = next(k for k in range(3) if k not in pair)
        gamma_t = float(r.rates[pair[0]])
        gamma_l = float(r.rates[longitudinal])
        lt_margin = 2 * gamma_t - gamma_l
        report = report.model_copy(
            update=dict(
                transverse_pair=list(pair),
                longitudinal_index=longitudinal,
                longitudinal_time=_inverse(gamma_l),
                transverse_time=_inverse(gamma_t),
                lt_margin=lt_margin,
                lt_passed=lt_margin >= -threshold,
            )
        )
    return report


def check_corollary(r: RateSet, tolerance: Optional[float] = None) -> CorollaryReport:
    """Gamma_alpha <= sum(Gamma)/2 for every alpha; implied by the main bound once d >= 3."""
    eps = _resolve_tolerance(tolerance)
    margins = _half_sum_margins(r)
    return CorollaryReport(
        d=r.d,
        margins=margins.tolist(),
        passed=bool(np.all(margins >= -eps * r.total)),
        indeterminate=r.is_zero,
        implied_by_main_bound=bound_constant(r.d) >= 2,
        tolerance=eps,
    )


def check_main_theorem(r: RateSet, tolerance: Optional[float] = None) -> ConstraintReport:
    """Margins m_alpha = sum(Gamma) - (d/sqrt(2)) Gamma_alpha and the tightness ratio.

    All-zero rates give an indeterminate report that passes with R undefined.
    """
    eps = _resolve_tolerance(tolerance)
    margins = _main_margins(r)
    passed = bool(np.all(margins >= -eps * r.total))
    report = ConstraintReport(
        d=r.d,
        margins=margins.tolist(),
        passed=passed,
        indeterminate=r.is_zero,
        tightness_ratio=tightness_ratio(r),
        tolerance=eps,
        corollary_passed=check_corollary(r, eps).passed,
        qubit=check_qubit_relations(r, eps) if r.d == 2 else None,
    )
    log_check(
        "main_bound",
        "indeterminate" if r.is_zero else passed,
        {f"m_{alpha + 1}": m for alpha, m in enumerate(report.margins)},
    )
    return report


@register_constraint("main_bound")
def main_bound(r: RateSet, tolerance: float) -> ConstraintCheck:
    report = check_main_theorem(r, tolerance)
    return ConstraintCheck(
        name="main_bound",
        labels=[
            f"sum(Gamma) >= {bound_constant(r.d):.6g} * Gamma_{alpha + 1}"
            for alpha in range(len(report.margins))
        ],
        margins=report.margins,
        passed=report.passed,
        indeterminate=report.indeterminate,
        threshold=tolerance * r.total,
        details={"tightness_ratio": report.tightness_ratio},
    )


@register_constraint("half_sum_bound")
def half_sum_bound(r: RateSet, tolerance: float) -> ConstraintCheck:
    report = check_corollary(r, tolerance)
    return ConstraintCheck(
        name="half_sum_bound",
        labels=[f"Gamma_{alpha + 1} <= sum(Gamma) / 2" for alpha in range(len(report.margins))],
        margins=report.margins,
        passed=report.passed,
        indeterminate=report.indeterminate,
        threshold=tolerance * r.total,
        details={"implied_by_main_bound": report.implied_by_main_bound},
    )


@register_constraint("qubit_triangle", applies_to=lambda d: d == 2)
def qubit_triangle(r: RateSet, tolerance: float) -> ConstraintCheck:
    report = check_qubit_relations(r, tolerance)
    details = report.model_dump(exclude={"triangles", "passed", "indeterminate"})
    return ConstraintCheck(
        name="qubit_triangle",
        labels=[t.permutation for t in report.triangles],
        margins=[t.margin for t in report.triangles],
        passed=report.passed,
        indeterminate=report.indeterminate,
        threshold=tolerance * r.total,
        details=details,
    )
