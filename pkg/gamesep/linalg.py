"""Rank and column-span tests over exact rationals and over floats.

Rational matrices are numpy object arrays of ``Fraction``. Each row is
scaled to integers first and the rank comes from fraction-free (Bareiss)
elimination, so intermediate entries stay integers bounded by minors of
the input.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import List

import numpy as np

logger = logging.getLogger(__name__)


def _integer_rows(matrix: np.ndarray) -> List[List[int]]:
    rows = []
    for row in np.asarray(matrix).reshape(np.shape(matrix)[0], -1):
        values = [Fraction(v) for v in row]
        common = math.lcm(*(v.denominator for v in values)) if values else 1
        rows.append([int(v * common) for v in values])
    return rows


def rational_rank(matrix: np.ndarray) -> int:
    if np.size(matrix) == 0:
        return 0
    rows = _integer_rows(matrix)
    height, width = len(rows), len(rows[0])
    rank = 0
    previous = 1
    for c in range(width):
        if rank == height:
            break
        pivot = next((k for k in range(rank, height) if rows[k][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        head = rows[rank]
        p = head[c]
        for k in range(rank + 1, height):
            row = rows[k]
            factor = row[c]
            # Sylvester's identity makes every division exact
            rows[k] = row[:c] + [(p * row[j] - factor * head[j]) // previous for j in range(c, width)]
        previous = p
        rank += 1
    logger.debug("Rank %d for %dx%d rational matrix", rank, height, width)
    return rank


def in_column_span(matrix: np.ndarray, vector: np.ndarray, exact: bool, tolerance: float = 0.0) -> bool:
    """Whether ``vector`` is a linear combination of the columns of ``matrix``."""

    if matrix.shape[1] == 0:
        if exact:
            return all(v == 0 for v in vector)
        return float(np.max(np.abs(np.asarray(vector, dtype=float)), initial=0.0)) <= tolerance
    if exact:
        augmented = np.concatenate(
            [np.asarray(matrix, dtype=object), np.asarray(vector, dtype=object).reshape(-1, 1)], axis=1
        )
        return rational_rank(augmented) == rational_rank(matrix)
    a = np.asarray(matrix, dtype=float)
    b = np.asarray(vector, dtype=float)
    solution, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.max(np.abs(a @ solution - b), initial=0.0))
    return residual <= tolerance * (1.0 + float(np.max(np.abs(b), initial=0.0)))
