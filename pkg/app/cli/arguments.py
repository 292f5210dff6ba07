"""
Parsing helpers shared by the subcommands.
"""

import math
from pathlib import Path
from typing import List, Optional, Tuple

from app.models.params import NetworkConfig
from app.utils.errors import ParameterError

VALUE_DIGITS = 10


def load_config(path: str) -> Tuple[NetworkConfig, bytes]:
    """Read and validate a JSON network config; OSError and ValidationError propagate."""
    return NetworkConfig.from_file(Path(path))


def parse_int_list(text: str, name: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ParameterError(f"{name} must be a comma separated list of integers (got {text!r})") from e


def parse_float_list(text: str, name: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ParameterError(f"{name} must be a comma separated list of numbers (got {text!r})") from e


def parse_values(text: str) -> List[float]:
    """
    Sweep values as "start:stop:step" (stop included) or "v1,v2,...".

    >>> parse_values("0:0.2:0.1")
    [0.0, 0.1, 0.2]
    """
    if ":" not in text:
        values = parse_float_list(text, "values")
        if not values:
            raise ParameterError("values must not be empty")
        return values
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"range must look like start:stop:step (got {text!r})")
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError as e:
        raise ParameterError(f"range bounds must be numbers (got {text!r})") from e
    if step == 0 or not all(math.isfinite(v) for v in (start, stop, step)):
        raise ParameterError(f"range step must be finite and non-zero (got {text!r})")
    count = math.floor((stop - start) / step + 1e-9) + 1
    if count < 1:
        raise ParameterError(f"range {text!r} is empty")
    return [round(start + i * step, VALUE_DIGITS) for i in range(count)]


def parse_pair(text: Optional[str], name: str) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    values = parse_int_list(text, name)
    if len(values) != 2:
        raise ParameterError(f"{name} takes two class indices i,j (got {text!r})")
    return values[0], values[1]
