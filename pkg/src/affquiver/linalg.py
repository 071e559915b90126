"""Exact rational row reduction for sparse integer vectors."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

Sparse = Mapping[int, int]


def rref_basis(vectors: Iterable[Sparse]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon basis of the rational span of ``vectors``.

    Vectors are sparse maps ``column -> value``.  Returns the basis rows
    and their pivot columns; row ``j`` has a 1 at ``pivots[j]`` and every
    other row has 0 there.
    """
    rows: dict[int, dict[int, Fraction]] = {}      # pivot -> row
    for vec in vectors:
        v = {c: Fraction(x) for c, x in vec.items() if x}
        for piv in sorted(set(v) & set(rows)):
            coef = v.get(piv)
            if coef:
                _axpy(v, -coef, rows[piv])
        if not v:
            continue
        piv = min(v)
        inv = 1 / v[piv]
        v = {c: x * inv for c, x in v.items()}
        # clear the new pivot from the existing rows
        for other in rows.values():
            coef = other.get(piv)
            if coef:
                _axpy(other, -coef, v)
        rows[piv] = v
    pivots = sorted(rows)
    return [rows[p] for p in pivots], pivots


def _axpy(y: dict, a: Fraction, x: Mapping) -> None:
    for c, val in x.items():
        nv = y.get(c, 0) + a * val
        if nv:
            y[c] = nv
        else:
            y.pop(c, None)


def integer_scaled(rows: list[dict[int, Fraction]], ncols: int) -> tuple[np.ndarray, int]:
    """Dense integer matrix ``D * rows`` with ``D`` the common denominator."""
    D = reduce(math.lcm, (x.denominator for r in rows for x in r.values()), 1)
    out = np.zeros((len(rows), ncols), dtype=object if D > 2 ** 40 else np.int64)
    for j, r in enumerate(rows):
        for c, x in r.items():
            out[j, c] = int(x * D)
    return out, D


def in_span(rows_int: np.ndarray, pivots: list[int], D: int, vec: np.ndarray) -> bool:
    """Whether integer vector ``vec`` lies in the span of ``rows_int / D`` (RREF rows)."""
    if not pivots:
        return not np.any(vec)
    coeffs = vec[pivots]
    return np.array_equal(coeffs @ rows_int, D * vec)


def rows_in_span(rows_int: np.ndarray, pivots: list[int], D: int, vecs: np.ndarray) -> bool:
    """Whether every row of integer matrix ``vecs`` lies in the span of ``rows_int / D``.

    Uses a float64 product when every partial sum is below 2**53 (so the
    result is exact), integer arithmetic otherwise.
    """
    if not pivots:
        return not np.any(vecs)
    coeffs = vecs[:, pivots]
    expect = D * vecs
    if rows_int.dtype != object and vecs.dtype != object:
        bound = (int(np.abs(coeffs).max(initial=0)) * int(np.abs(rows_int).max(initial=0))
                 * len(pivots))
        if bound < 2 ** 53 and int(np.abs(expect).max(initial=0)) < 2 ** 53:
            got = coeffs.astype(np.float64) @ rows_int.astype(np.float64)
            return np.array_equal(got, expect.astype(np.float64))
    return np.array_equal(coeffs.astype(object) @ rows_int.astype(object), expect.astype(object))
