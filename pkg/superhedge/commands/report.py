"""
Deterministic report formatting.
"""
import math
from typing import Iterable, Optional, Sequence

from ..config import config


def fmt_float(value: Optional[float]) -> str:
    """17 significant digits; infinities as inf / -inf."""
    if value is None:
        return "n/a"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # no "-0"
    return format(value, f".{config.OUTPUT_DIGITS}g")


def fmt_point(point: Sequence[float]) -> str:
    return "[" + ", ".join(fmt_float(v) for v in point) + "]"


def fmt_points(points: Sequence[Sequence[float]]) -> str:
    """Scalars for one asset, tuples otherwise."""
    if all(len(p) == 1 for p in points):
        return "[" + ", ".join(fmt_float(p[0]) for p in points) + "]"
    return "[" + ", ".join("(" + ", ".join(fmt_float(v) for v in p) + ")" for p in points) + "]"


def fmt_ints(values: Iterable[int]) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def emit(*lines: str) -> None:
    for line in lines:
        print(line)
