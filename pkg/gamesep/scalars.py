"""Scalar modes and table helpers.

Every table in gamesep is a numpy array shaped like the strategy space. In
rational mode the array has ``dtype=object`` and holds ``fractions.Fraction``
values, so zero tests are exact; in float mode it is a plain ``float64`` array
and zero tests use a tolerance.
"""

from __future__ import annotations

import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import FormatError

Scalar = Union[Fraction, float]

_RATIONAL_LITERAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class ScalarMode(str, Enum):
    RATIONAL = "rational"
    FLOAT = "float"


def parse_scalar(value: object, mode: ScalarMode) -> Scalar:
    """Parse a JSON or command-line literal into a scalar of ``mode``.

    Rational mode accepts integers and ``"p/q"`` strings and rejects floats.
    """

    if isinstance(value, bool):
        raise FormatError(f"boolean is not a scalar literal: {value!r}")
    if mode is ScalarMode.RATIONAL:
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str) and _RATIONAL_LITERAL.match(value):
            try:
                return Fraction(value.replace(" ", ""))
            except ZeroDivisionError as exc:
                raise FormatError(f"zero denominator in {value!r}") from exc
        raise FormatError(f"expected an integer or 'p/q' literal in rational mode, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.replace(" ", "")))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a numeric literal: {value!r}") from exc
    raise FormatError(f"not a numeric literal: {value!r}")


def format_scalar(value: Scalar, mode: ScalarMode) -> Union[str, float]:
    if mode is ScalarMode.RATIONAL:
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def mode_of(table: np.ndarray) -> ScalarMode:
    return ScalarMode.RATIONAL if table.dtype == object else ScalarMode.FLOAT


def zeros(shape: Sequence[int], mode: ScalarMode) -> np.ndarray:
    if mode is ScalarMode.RATIONAL:
        return np.full(tuple(shape), Fraction(0), dtype=object)
    return np.zeros(tuple(shape), dtype=float)


def to_table(values: Iterable[object], shape: Sequence[int], mode: ScalarMode) -> np.ndarray:
    """Build a table of ``shape`` from already-parsed or parseable values."""

    items = list(values)
    size = int(np.prod(shape, dtype=np.int64)) if len(shape) else 1
    if len(items) != size:
        raise FormatError(f"table has {len(items)} entries, expected {size}")
    if mode is ScalarMode.RATIONAL:
        parsed = [v if isinstance(v, Fraction) else parse_scalar(v, mode) for v in items]
        return np.array(parsed, dtype=object).reshape(tuple(shape))
    parsed = [float(v) if isinstance(v, (Fraction, int, float)) else parse_scalar(v, mode) for v in items]
    return np.array(parsed, dtype=float).reshape(tuple(shape))


def convert(table: np.ndarray, mode: ScalarMode) -> np.ndarray:
    """Return ``table`` in ``mode``; float to rational conversion is exact in binary."""

    if mode_of(table) is mode:
        return table
    if mode is ScalarMode.FLOAT:
        return table.astype(float)
    flat = [Fraction(float(v)) for v in table.ravel()]
    return np.array(flat, dtype=object).reshape(table.shape)


def max_abs(table: np.ndarray) -> Scalar:
    if table.size == 0:
        return Fraction(0) if table.dtype == object else 0.0
    return np.abs(table).max()


def is_zero(table: np.ndarray, tolerance: float = 0.0, scale: Scalar = 0) -> bool:
    """Exact zero test in rational mode; ``max|t| <= tolerance * (1 + scale)`` in float mode."""

    if table.dtype == object:
        return bool(np.all(table == 0))
    return bool(max_abs(table) <= tolerance * (1.0 + float(scale)))


def tables_equal(left: np.ndarray, right: np.ndarray, tolerance: float = 0.0) -> bool:
    if left.shape != right.shape:
        return False
    if left.dtype == object and right.dtype == object:
        return bool(np.all(left == right))
    return bool(np.all(np.abs(left.astype(float) - right.astype(float)) <= tolerance))
