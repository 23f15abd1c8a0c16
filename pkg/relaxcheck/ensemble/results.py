from typing import Any, Dict, Iterable, List, Tuple

import numpy as np
import pandas as pd

from relaxcheck.ensemble.datamodel import EnsembleStats


def round_floats(d: Any, decimals=6) -> Any:
    if isinstance(d, dict):
        return {k: round_floats(v, decimals) for k, v in d.items()}
    if isinstance(d, (float, np.floating)) and np.isfinite(d):
        return round(float(d), decimals)
    return d


def _group_stats(group: pd.DataFrame) -> Dict[str, Any]:
    ratios = group["ratio"].dropna()
    return {
        "count": len(group),
        "max_ratio": float(ratios.max()) if len(ratios) else float("nan"),
        "mean_ratio": float(ratios.mean()) if len(ratios) else float("nan"),
        "violations": int((~group["passed"]).sum()),
        "max_trace_identity_residual": float(group["trace_identity_residual"].max()),
    }


def summarize_ensembles(
    stats_list: List[EnsembleStats],
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Combines the sample tables of several runs and aggregates them by d and by label.

    Returns:
        A Tuple of (all samples with a `d` and `seed` column, summary indexed by
        (category, subgroup)).
    """
    frames = []
    for stats in stats_list:
        df = stats.to_dataframe()
        df["d"] = stats.config.d
        df["seed"] = stats.config.seed
        frames.append(df)
    df_combined = pd.concat(frames, ignore_index=True)

    def agg(grouped) -> Dict[str, Dict[str, Any]]:
        result = {}
        for key, group in grouped:
            if isinstance(key, Iterable) and not isinstance(key, (str, bytes)):
                key = "_".join(str(k) for k in key)
            result[str(key)] = _group_stats(group)
        return result

    results = {
        "overall": {"all": _group_stats(df_combined)},
        "by_d": agg(df_combined.groupby("d")),
        "by_label": agg(df_combined.groupby("label")),
    }
    return df_combined, flatten_results_to_df(round_floats(results))


def flatten_results_to_df(results: Dict[str, Dict[str, Dict[str, Any]]]) -> pd.DataFrame:
    records = [
        {"category": category, "subgroup": subgroup, **stats}
        for category, data in results.items()
        for subgroup, stats in sorted(data.items())
    ]
    df = pd.DataFrame(records)
    df.set_index(["category", "subgroup"], inplace=True)
    return df
