import json
import os
import sys
from collections import OrderedDict
from typing import Any, Dict

from loguru import logger

CHECK_LEVEL_NAME = "CHECK"
SAMPLE_LEVEL_NAME = "SAMPLE"

DEFAULT_LEVEL = os.environ.get("RELAXCHECK_LOG_LEVEL", "INFO")


class Formatter:
    def __init__(self):
        self.padding = 0
        self.fmt = "[<green><b>{time:YYYY-MM-DD hh:mm:ss.SS}</b></green>][<cyan><b>{file}:{line}</b></cyan> - <cyan>{name:}:{function}</cyan>][<level>{level}</level>] {message}\n"

    def format(self, record):
        length = len("{file}:{line} - {name:}:{function}".format(**record))
        self.padding = max(self.padding, length)
        record["extra"]["padding"] = " " * (self.padding - length)
        fmt = ""
        if record["level"].name == CHECK_LEVEL_NAME and "margins" in record["extra"]:
            fmt = "<LC>===================[[<b>{extra[check_name]}  passed={extra[passed]}</b>]]===================</LC>\n{extra[margins_text]}\n"
        elif record["level"].name == SAMPLE_LEVEL_NAME and "sample" in record["extra"]:
            fmt = "<LY>    sample={extra[sample][index]}  R={extra[sample][ratio]:.6f}  sum_rates={extra[sample][sum_rates]:.6g}</LY>\n"
        return self.fmt + fmt


def render_margins(margins: Dict[str, float]) -> str:
    width = max((len(k) for k in margins), default=0)
    return "\n".join(f"  {k:<{width}}  {v: .6e}" for k, v in margins.items())


def serialize(record):
    subset = OrderedDict()
    subset["level"] = record["level"].name
    subset["message"] = record["message"]
    subset["time"] = record["time"].strftime("%Y-%m-%d %H:%M:%S.%f")[:-3]
    subset["file"] = {
        "name": record["file"].name,
        "path": record["file"].path,
        "function": record["function"],
        "line": record["line"],
    }
    subset["extra"] = {
        k: v for k, v in record["extra"].items() if k not in ("serialized", "padding")
    }
    return json.dumps(subset, default=str)


def patching(record):
    if record["level"].name == CHECK_LEVEL_NAME and "margins" in record["extra"]:
        record["extra"].setdefault("check_name", record["message"])
        record["extra"].setdefault("passed", "n/a")
        record["extra"]["margins_text"] = render_margins(record["extra"]["margins"])
    record["extra"]["serialized"] = serialize(record)


def json_sink(message):
    sys.stderr.write(message.record["extra"]["serialized"] + "\n")


def stderr_sink(message):
    # sys.stderr is looked up per write
    sys.stderr.write(message)


def configure_logger(level: str = DEFAULT_LEVEL, json_logs: bool = False) -> None:
    """Replaces the active sink. Logs always go to stderr so stdout stays parseable."""
    logger.remove()
    if json_logs:
        logger.add(json_sink, level=level)
    else:
        logger.add(
            stderr_sink,
            format=formatter.format,
            level=level,
            colorize=sys.stderr.isatty(),
        )


def log_check(name: str, passed: Any, margins: Dict[str, float]) -> None:
    logger.log(
        CHECK_LEVEL_NAME,
        name,
        check_name=name,
        passed=passed,
        margins={k: float(v) for k, v in margins.items()},
    )


logger.remove()
logger = logger.patch(patching)
logger.level(CHECK_LEVEL_NAME, no=15, color="<white><bold>", icon="✅")
logger.level(SAMPLE_LEVEL_NAME, no=15, color="<yellow><bold>", icon="🎲")


formatter = Formatter()
configure_logger()
