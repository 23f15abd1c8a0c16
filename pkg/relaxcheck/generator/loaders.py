"""Loads generators and matrices from their JSON forms."""

from typing import Any, Dict

import numpy as np
import pydantic

from relaxcheck import errors, utils
from relaxcheck.generator import families
from relaxcheck.generator.datamodel import GKLSGenerator, LindbladOperator
from relaxcheck.operators.datamodel import ComplexMatrix
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

GENERATOR_FORMS = ("C", "lindblad_ops", "family", "ensemble")


def parse_matrix(data: Any, name: str) -> np.ndarray:
    try:
        return ComplexMatrix.from_json(data).to_array()
    except pydantic.ValidationError as e:
        raise errors.SchemaError(f"Field {name!r} is not a valid matrix: {e}") from e


def parse_generator(
    data: Dict[str, Any], tolerances: Tolerances = DEFAULT_TOLERANCES
) -> GKLSGenerator:
    """Builds a generator from any of the accepted JSON forms.

    Forms:
        {"d", "H", "C"}
        {"d", "H", "lindblad_ops": [{"rate", "L"}, ...]}
        {"d", "family", "rate"?, "omega"?}
        {"d", "ensemble": {"seed", "index", ...EnsembleConfig fields}}
    """
    if not isinstance(data, dict):
        raise errors.SchemaError("Generator JSON must be an object")
    if "d" not in data or not isinstance(data["d"], int) or isinstance(data["d"], bool):
        raise errors.SchemaError("Generator JSON needs an integer field 'd'")
    d = data["d"]
    if d < 2:
        raise errors.InvalidDimensionError(f"Dimension must be >= 2, got {d}")
    present = [form for form in GENERATOR_FORMS if form in data]
    if len(present) != 1:
        raise errors.SchemaError(
            f"Generator JSON needs exactly one of {GENERATOR_FORMS}, found {present or 'none'}"
        )
    form = present[0]
    H = parse_matrix(data["H"], "H") if "H" in data else np.zeros((d, d))

    if form == "C":
        return GKLSGenerator.create(d, H, parse_matrix(data["C"], "C"), tolerances)
    if form == "lindblad_ops":
        if not isinstance(data["lindblad_ops"], list):
            raise errors.SchemaError("'lindblad_ops' must be a list")
        ops = []
        for i, item in enumerate(data["lindblad_ops"]):
            if not isinstance(item, dict) or "rate" not in item or "L" not in item:
                raise errors.SchemaError(f"lindblad_ops[{i}] needs 'rate' and 'L'")
            ops.append(
                LindbladOperator(
                    rate=float(item["rate"]),
                    operator=parse_matrix(item["L"], f"lindblad_ops[{i}].L"),
                )
            )
        return GKLSGenerator.from_lindblad(d, H, ops, tolerances)
    if form == "family":
        try:
            family = families.get_registered_family(data["family"])
        except KeyError as e:
            raise errors.SchemaError(
                f"Unknown family {data['family']!r}; known: {families.list_families()}"
            ) from e
        kwargs = {k: float(data[k]) for k in ("rate", "omega") if k in data}
        return family(d, **kwargs)

    from relaxcheck.ensemble import datamodel as ensemble_datamodel
    from relaxcheck.ensemble import sample

    spec = dict(data["ensemble"])
    index = spec.pop("index", 0)
    try:
        cfg = ensemble_datamodel.EnsembleConfig(d=d, **spec)
    except pydantic.ValidationError as e:
        raise errors.SchemaError(f"Invalid ensemble reference: {e}") from e
    return sample.sample_generator(cfg, index)


def load_generator(path: str, tolerances: Tolerances = DEFAULT_TOLERANCES) -> GKLSGenerator:
    try:
        data = utils.read_json(path)
    except (OSError, ValueError) as e:
        raise errors.SchemaError(f"Cannot read generator JSON {path}: {e}") from e
    return parse_generator(data, tolerances)


def load_matrix(path: str, name: str = "matrix") -> np.ndarray:
    try:
        data = utils.read_json(path)
    except (OSError, ValueError) as e:
        raise errors.SchemaError(f"Cannot read {name} JSON {path}: {e}") from e
    return parse_matrix(data, name)
