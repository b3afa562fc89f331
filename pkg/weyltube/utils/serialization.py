"""JSON and CSV helpers for scenarios and reports."""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Union

import numpy as np
import orjson
import polars as pl
import structlog

from ..exceptions.client import WeylTubeDataError

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]


def format_fraction(value: Fraction) -> str:
    """Rationals as ``"num/den"`` (integers without a denominator)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise WeylTubeDataError(f"not a rational: {text!r}", data_type="fraction") from exc


def to_jsonable(value: Any) -> Any:
    """
    Convert a value into something ``orjson`` serializes deterministically.

    Fractions become ``"num/den"`` strings, numpy scalars and arrays become
    Python numbers and lists, enums their values. Non-finite floats become
    strings because JSON has no literal for them.
    """
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def dumps(payload: Any) -> bytes:
    return orjson.dumps(to_jsonable(payload), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def write_json(payload: Any, path: PathLike) -> Path:
    """Write ``payload`` as sorted, indented JSON."""
    target = Path(path)
    data = payload.to_json_bytes() if hasattr(payload, "to_json_bytes") else dumps(payload)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(data)
    logger.info("JSON written", path=str(target), bytes=len(data))
    return target


def read_json(path: PathLike) -> Dict[str, Any]:
    """
    Read a JSON object from ``path``.

    Raises:
        WeylTubeDataError: If the file is missing, unreadable or not a JSON object
    """
    source = Path(path)
    try:
        raw = source.read_bytes()
    except OSError as exc:
        raise WeylTubeDataError(f"cannot read {source}: {exc}", data_type="json", path=str(source)) from exc
    try:
        payload = orjson.loads(raw)
    except orjson.JSONDecodeError as exc:
        raise WeylTubeDataError(f"malformed JSON in {source}: {exc}", data_type="json", path=str(source)) from exc
    if not isinstance(payload, dict):
        raise WeylTubeDataError("scenario must be a JSON object", data_type="json", path=str(source))
    return payload


def write_csv(rows: Sequence[Mapping[str, Any]], path: PathLike, columns: List[str] | None = None) -> Path:
    """Write rows of scalars with ``polars``; missing values become empty cells."""
    target = Path(path)
    frame = pl.DataFrame([dict(row) for row in rows], infer_schema_length=None)
    if columns is not None:
        frame = frame.select([c for c in columns if c in frame.columns])
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.write_csv(target)
    logger.info("CSV written", path=str(target), rows=frame.height)
    return target
