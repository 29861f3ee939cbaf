"""Exact integer arithmetic on binary/bipolar vectors and weight matrices.

Conventions used everywhere in this package:
    - binary vectors hold {0, 1}, bipolar vectors hold {-1, +1}
    - matrices are dense signed-integer arrays, shape (m, n)
    - all arithmetic is int64; no floating point touches pattern data

Operations:
    binary_to_bipolar / bipolar_to_binary   the 0/1 <-> -1/+1 maps
    outer_product(x, y)                     correlation matrix x_i * y_j
    row_times_matrix(a, M)                  integer field vector a . M
    transpose(M)                            index swap
    hamming_distance(a, b)                  count of differing positions
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

IntVector = NDArray[np.int64]
IntMatrix = NDArray[np.int64]


class DimensionMismatchError(ValueError):
    """Operand shapes disagree; raised instead of silently truncating."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def as_binary(v) -> IntVector:
    """Validate and return a {0,1} int64 vector (copy, read-only)."""
    arr = np.array(v, dtype=np.int64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"binary vector must be 1-D and non-empty, got shape {arr.shape}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("binary vector elements must be exactly 0 or 1")
    return _freeze(arr)


def as_bipolar(v) -> IntVector:
    """Validate and return a {-1,+1} int64 vector (copy, read-only)."""
    arr = np.array(v, dtype=np.int64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"bipolar vector must be 1-D and non-empty, got shape {arr.shape}")
    if not np.all((arr == -1) | (arr == 1)):
        raise ValueError("bipolar vector elements must be exactly -1 or +1")
    return _freeze(arr)


def as_int_matrix(m) -> IntMatrix:
    """Validate and return a dense 2-D int64 matrix (copy, read-only)."""
    arr = np.array(m, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"matrix must be 2-D and non-empty, got shape {arr.shape}")
    return _freeze(arr)


def binary_to_bipolar(v) -> IntVector:
    """Map 0 -> -1 and 1 -> +1, preserving order and length."""
    arr = as_binary(v)
    return _freeze(arr * 2 - 1)


def bipolar_to_binary(v) -> IntVector:
    """Map -1 -> 0 and +1 -> 1; inverse of binary_to_bipolar."""
    arr = as_bipolar(v)
    return _freeze((arr + 1) // 2)


def outer_product(x, y) -> IntMatrix:
    """Correlation matrix of two bipolar vectors: cell(i,j) = x_i * y_j."""
    xa = as_bipolar(x)
    ya = as_bipolar(y)
    return _freeze(np.outer(xa, ya))


def row_times_matrix(a, m) -> IntVector:
    """Integer field vector f_j = sum_i a_i * M(i,j).

    Raises DimensionMismatchError when len(a) != rows(M).
    """
    aa = as_bipolar(a)
    ma = as_int_matrix(m)
    if aa.size != ma.shape[0]:
        raise DimensionMismatchError(
            f"row vector has length {aa.size} but matrix has {ma.shape[0]} rows"
        )
    return _freeze(aa @ ma)


def transpose(m) -> IntMatrix:
    """Index-swapped copy: result(j,i) = input(i,j)."""
    return _freeze(as_int_matrix(m).T.copy())


def hamming_distance(a, b) -> int:
    """Number of positions where two equal-length bipolar vectors differ."""
    aa = as_bipolar(a)
    ba = as_bipolar(b)
    if aa.size != ba.size:
        raise DimensionMismatchError(f"lengths differ: {aa.size} vs {ba.size}")
    return int(np.count_nonzero(aa != ba))


def format_pm1(v) -> str:
    """Render a bipolar vector as '+1 -1 ...' tokens (the on-disk/CLI form)."""
    return " ".join("+1" if x == 1 else "-1" for x in np.asarray(v))


def parse_pm1(text: str) -> IntVector:
    """Parse '+1 -1 ...' tokens back into a bipolar vector."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty bipolar vector text")
    values = []
    for tok in tokens:
        if tok in ("+1", "1"):
            values.append(1)
        elif tok == "-1":
            values.append(-1)
        else:
            raise ValueError(f"bad bipolar token {tok!r} (expected +1 or -1)")
    return as_bipolar(values)
