import hashlib
import os
import os.path as osp
import tempfile
from contextlib import contextmanager
from typing import Any, Iterator

import numpy as np
import orjson
import pandas as pd
import yaml


def get_docs_dir():
    return osp.join(osp.dirname(osp.dirname(osp.abspath(__file__))), "docs")


@contextmanager
def atomic_writer(path: str, mode: str = "wb") -> Iterator[Any]:
    """Yields a file handle on a temporary sibling of `path`, renamed over `path` on success.

    Nothing is left at `path` if the body raises.
    """
    directory = osp.dirname(osp.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(
        prefix=f".{osp.basename(path)}.", suffix=".tmp", dir=directory
    )
    try:
        with os.fdopen(fd, mode) as f:
            yield f
        os.replace(tmp_path, path)
    except BaseException:
        if osp.exists(tmp_path):
            os.remove(tmp_path)
        raise


def dumps_json(data: Any, indent: bool = False) -> bytes:
    option = orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_SORT_KEYS
    if indent:
        option |= orjson.OPT_INDENT_2
    return orjson.dumps(data, option=option)


def read_json(path: str):
    with open(path, "rb") as f:
        return orjson.loads(f.read())


def write_json(data: Any, path: str, indent: bool = False):
    with atomic_writer(path, "wb") as f:
        f.write(dumps_json(data, indent=indent))


def write_csv(df: pd.DataFrame, path: str):
    with atomic_writer(path, "w") as f:
        df.to_csv(f, index=False)


def read_yaml(path: str):
    with open(path, "r") as f:
        return yaml.safe_load(f)


def file_digest(path: str) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            sha.update(chunk)
    return sha.hexdigest()


def jsonable(obj: Any) -> Any:
    """Recursively encodes non-finite floats as "inf", "-inf" or "nan" strings."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (float, np.floating)) and not np.isfinite(obj):
        return "nan" if np.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def parse_time(value: Any) -> float:
    """Inverse of `jsonable` for times: accepts numbers and "inf"."""
    if isinstance(value, str):
        value = value.strip().lower()
        if value in ("inf", "+inf", "infinity"):
            return float("inf")
    return float(value)
