"""Sparse exact linear algebra over the rationals.

Rows are ``{column: Fraction}`` dicts.  Column indices double as pivot
priority: the smallest index present in a row is its leading column.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

Row = Dict[int, Fraction]


def _axpy(row: Row, f: Fraction, other: Row) -> None:
    """row -= f * other, in place, pruning zeros."""
    for k, v in other.items():
        nv = row.get(k, 0) - f * v
        if nv:
            row[k] = nv
        else:
            row.pop(k, None)


def echelon(rows: Sequence[Row]) -> Dict[int, Row]:
    """Row echelon form as ``{pivot column: normalized row}``."""
    pivots: Dict[int, Row] = {}
    for src in rows:
        row = {k: Fraction(v) for k, v in src.items() if v}
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                inv = 1 / row[c]
                pivots[c] = {k: v * inv for k, v in row.items()}
                break
            _axpy(row, row[c], p)
    return pivots


def reduce_echelon(pivots: Dict[int, Row]) -> Dict[int, Row]:
    """Back-substitute so each pivot column is zero in every other row."""
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for k in [k for k in row if k != c and k in pivots]:
            f = row.get(k)
            if f:
                _axpy(row, f, pivots[k])
    return pivots


def rref(rows: Sequence[Row]) -> Dict[int, Row]:
    return reduce_echelon(echelon(rows))


def rank(rows: Sequence[Row]) -> int:
    return len(echelon(rows))


def nullspace(rows: Sequence[Row], ncols: int) -> List[Row]:
    """Basis of ``{v : A v = 0}``, one vector per free column.

    Vector ``f`` has a 1 at free column ``f``, zeros at the other free
    columns, and support otherwise only on pivot columns smaller than ``f``.
    With columns in ascending order of importance this is the reduced
    echelon basis keyed on the largest column.
    """
    piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    # column -> [(pivot col, entry)] for fast assembly
    by_col: Dict[int, List[Tuple[int, Fraction]]] = {}
    for pc, row in piv.items():
        for k, v in row.items():
            if k != pc:
                by_col.setdefault(k, []).append((pc, v))
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for pc, a in by_col.get(f, ()):
            v[pc] = -a
        basis.append(v)
    return basis


def dense_rank(matrix: Sequence[Sequence]) -> int:
    rows = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix]
    return rank(rows)


def left_inverse(rows: Sequence[Row], ncols: int):
    """Solve ``A y = c`` for many right-hand sides.

    Returns ``(L, K)``: ``y_j = sum_i L[j][i] c_i`` for every column ``j``
    and, for each ``k`` in ``K``, ``sum_i k[i] c_i`` must vanish for the
    system to be consistent.  Raises ``ValueError`` when ``A`` has a
    non-trivial kernel (the solution would not be unique).
    """
    aug = []
    for i, r in enumerate(rows):
        row = {k: Fraction(v) for k, v in r.items() if v}
        row[ncols + i] = Fraction(1)
        aug.append(row)
    piv = rref(aug)
    missing = [j for j in range(ncols) if j not in piv]
    if missing:
        raise ValueError(f"columns {missing} are not determined by the system")
    L = [{k - ncols: v for k, v in piv[j].items() if k >= ncols} for j in range(ncols)]
    K = [{k - ncols: v for k, v in row.items()} for c, row in piv.items() if c >= ncols]
    return L, K
