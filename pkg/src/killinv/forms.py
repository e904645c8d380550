"""Binary forms ``Q(x, y) = sum_i C(n, i) a_i x^(n-i) y^i``."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence, Tuple

from .ratpoly import Poly, VarTable

FORM_VARS = ("x", "y")


def form_labels(n: int) -> Tuple[str, ...]:
    return tuple(f"a{i}" for i in range(n + 1))


def form_table(n: int, group: Sequence[str] = ()) -> VarTable:
    return VarTable.build(FORM_VARS, form_labels(n), group)


@dataclass(frozen=True)
class BinaryForm:
    """Degree-``n`` binary form given by its ``n + 1`` (binomially weighted) coefficients."""

    coefficients: Tuple[Poly, ...]

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if len(coeffs) < 2:
            raise ValueError("a binary form of degree n >= 1 needs n + 1 coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def table(self) -> VarTable:
        return self.coefficients[0].table

    def polynomial(self) -> Poly:
        n = self.degree
        x, y = Poly.var(self.table, "x"), Poly.var(self.table, "y")
        total = Poly.zero(self.table)
        for i, a in enumerate(self.coefficients):
            total = total + a * x ** (n - i) * y ** i * comb(n, i)
        return total

    @classmethod
    def from_polynomial(cls, Q: Poly, n: int) -> "BinaryForm":
        groups = Q.group_by(FORM_VARS)
        allowed = {(n - i, i) for i in range(n + 1)}
        if set(groups) - allowed:
            raise ValueError(f"polynomial is not a binary form of degree {n}")
        zero = Poly.zero(Q.table)
        return cls(tuple(groups.get((n - i, i), zero) / comb(n, i) for i in range(n + 1)))


def general_form(n: int) -> BinaryForm:
    """The form with symbolic coefficients ``a0 .. an``."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    table = form_table(n)
    return BinaryForm(tuple(Poly.var(table, a) for a in form_labels(n)))
