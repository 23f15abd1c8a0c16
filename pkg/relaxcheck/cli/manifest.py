"""Run manifests, output writing and the exception-to-exit-code contract."""

import os
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional

import pandas as pd
import pydantic
import typer
from pydantic import BaseModel

import relaxcheck
from relaxcheck import errors, utils
from relaxcheck.errors import ExitCode
from relaxcheck.logger import logger
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"


class RunManifest(BaseModel):
    command: str
    config: Dict[str, Any]
    inputs: Dict[str, str]
    version: str
    rng: Optional[Dict[str, str]] = None
    timestamp: str


def run_timestamp() -> str:
    """UTC time of the run, pinned by SOURCE_DATE_EPOCH when set."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (
        datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        if epoch
        else datetime.now(tz=timezone.utc)
    )
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def build_manifest(
    command: str,
    config: Dict[str, Any],
    inputs: Optional[List[str]] = None,
    rng: Optional[Dict[str, str]] = None,
) -> RunManifest:
    return RunManifest(
        command=command,
        config=config,
        inputs={path: utils.file_digest(path) for path in inputs or [] if path},
        version=relaxcheck.__version__,
        rng=rng,
        timestamp=run_timestamp(),
    )


def resolve_tolerances(config: Optional[str], overrides: Optional[List[str]]) -> Tolerances:
    base = Tolerances.from_yaml(config) if config else DEFAULT_TOLERANCES
    return base.with_overrides(overrides)


def emit(
    result: Dict[str, Any],
    manifest: RunManifest,
    output: OutputFormat = OutputFormat.json,
    out_file: Optional[str] = None,
    table: Optional[pd.DataFrame] = None,
) -> None:
    """Writes the result with its manifest to `out_file` (atomically) or stdout.

    CSV output carries the manifest in a `<out_file>.manifest.json` sidecar, or
    as a leading `# manifest: {...}` comment line on stdout.
    """
    if output == OutputFormat.csv:
        if table is None:
            raise errors.SchemaError(f"Command {manifest.command!r} has no tabular output")
        if out_file:
            utils.write_csv(table, out_file)
            utils.write_json(manifest.model_dump(), f"{out_file}.manifest.json", indent=True)
        else:
            header = utils.dumps_json(utils.jsonable(manifest.model_dump())).decode()
            sys.stdout.write(f"# manifest: {header}\n")
            sys.stdout.write(table.to_csv(index=False))
        return
    payload = utils.jsonable({"manifest": manifest.model_dump(), "result": result})
    if out_file:
        utils.write_json(payload, out_file, indent=True)
        logger.info(f"Wrote {manifest.command} output to {out_file}")
    else:
        typer.echo(utils.dumps_json(payload, indent=True).decode())


@contextmanager
def exit_codes(command: str) -> Iterator[None]:
    """Maps library exceptions to the documented exit codes."""
    try:
        yield
    except errors.RelaxcheckError as e:
        code = e.exit_code
        if command == "build" and e.build_exit_code is not None:
            code = e.build_exit_code
        logger.error(f"{command}: {type(e).__name__}: {e}")
        raise typer.Exit(code=int(code))
    except pydantic.ValidationError as e:
        logger.error(f"{command}: invalid input: {e}")
        raise typer.Exit(code=int(ExitCode.INPUT_ERROR))
    except OSError as e:
        logger.error(f"{command}: {e}")
        raise typer.Exit(code=int(ExitCode.INPUT_ERROR))


def finish(passed: bool) -> None:
    if not passed:
        raise typer.Exit(code=int(ExitCode.VIOLATION))
