"""GKLS-consistency witness for measured relaxation times.

The input is the multiset of all d²-1 relaxation times; no mode matching is
assumed. A violated inequality means no GKLS master equation generates the
observed dynamics.
"""

from typing import Any, List, Optional, Sequence

import numpy as np

from relaxcheck import errors, utils
from relaxcheck.constraints import checks  # noqa: F401  registers the built-in constraints
from relaxcheck.constraints.datamodel import RateSet, WitnessVerdict
from relaxcheck.constraints.registry import (
    constraints_for_dimension,
    get_registered_constraint,
)
from relaxcheck.logger import logger


def _expected_count(d: int, values: Sequence[Any], what: str) -> None:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise errors.InvalidDimensionError(f"Dimension must be >= 2, got {d}")
    if len(values) != d * d - 1:
        raise errors.InvalidTimeError(
            f"Need all {d * d - 1} {what} for d={d}, got {len(values)}; "
            "partial measurements cannot be checked against the rate sum"
        )


def times_to_rates(times: Sequence[Any], d: int) -> List[float]:
    _expected_count(d, times, "relaxation times")
    rates = []
    for i, raw in enumerate(times):
        try:
            t = utils.parse_time(raw)
        except (TypeError, ValueError) as e:
            raise errors.InvalidTimeError(f"times[{i}] is not a number: {raw!r}") from e
        if np.isnan(t) or t <= 0:
            raise errors.InvalidTimeError(f"times[{i}] must be > 0 or inf, got {raw!r}")
        rates.append(0.0 if np.isinf(t) else 1.0 / t)
    return rates


def witness_measured_rates(
    rates: Sequence[float],
    d: int,
    tolerance: Optional[float] = None,
    times: Optional[Sequence[float]] = None,
) -> WitnessVerdict:
    """Runs every registered constraint applicable to d on a measured rate set."""
    _expected_count(d, rates, "relaxation rates")
    eps = checks._resolve_tolerance(tolerance)
    r = RateSet(d=d, rates=list(rates), source="measured")
    results = {
        name: get_registered_constraint(name)(r, eps)
        for name in constraints_for_dimension(d)
    }
    violations = [v for result in results.values() for v in result.violations()]
    if r.is_zero:
        verdict = "INDETERMINATE"
    elif violations:
        verdict = "INCONSISTENT"
    else:
        verdict = "CONSISTENT"
    if times is None:
        times = [1.0 / g if g > 0 else float("inf") for g in r.rates.tolist()]
    logger.info(
        f"Witness on d={d}: {verdict}"
        + (f" ({len(violations)} violated inequalities)" if violations else "")
    )
    return WitnessVerdict(
        d=d,
        verdict=verdict,
        times=[float(t) for t in times],
        rates=r.rates.tolist(),
        tolerance=eps,
        reports={name: result.model_dump() for name, result in results.items()},
        violations=violations,
    )


def witness_measured_times(
    times: Sequence[Any], d: int, tolerance: Optional[float] = None
) -> WitnessVerdict:
    """Converts T to 1/T (inf to 0) and runs the witness.

    Raises:
        InvalidTimeError: on a wrong count or a nonpositive finite time.
    """
    rates = times_to_rates(times, d)
    parsed = [utils.parse_time(t) for t in times]
    return witness_measured_rates(rates, d, tolerance, times=parsed)
