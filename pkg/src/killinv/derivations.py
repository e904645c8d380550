"""First-order derivations of polynomial rings and the infinitesimal actions.

The isometry generators are obtained by the MST procedure: take the Lie
derivative of the general Killing tensor along T, X, H and read off, via
the coefficient-extraction system, the parameter-linear increments
``a'_i(a)``; the generator is ``sum_i a'_i d/da_i``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Tuple

from .forms import form_labels
from .killing_space import (GEOMETRIC_VARS, ParamScheme, SymTensor, VectorFieldM,
                            extract_parameters, general_element, killing_vectors)
from .ratpoly import Poly, VarTable, render


class Derivation:
    """``sum_v c_v * d/dv`` over a fixed variable table.

    Parameters
    ----------
    table : VarTable
        Domain of the derivation.
    coeffs : mapping of str to Poly
        Coefficient of ``d/dv`` for each variable ``v``; zero entries are dropped.
    name : str, optional
        Display name.
    """

    __slots__ = ("table", "_coeffs", "name")

    def __init__(self, table: VarTable, coeffs: Mapping[str, Poly] = None, name: str = ""):
        self.table = table
        clean = {}
        for v, c in (coeffs or {}).items():
            table.index(v)
            if c.table != table:
                c = c.embed(table)
            if not c.is_zero():
                clean[v] = c
        self._coeffs = clean
        self.name = name

    @property
    def coeffs(self) -> Dict[str, Poly]:
        return dict(self._coeffs)

    def coeff(self, v: str) -> Poly:
        return self._coeffs.get(v, Poly.zero(self.table))

    def __call__(self, F: Poly) -> Poly:
        if F.table != self.table:
            F = F.embed(self.table)
        total = Poly.zero(self.table)
        for v, c in self._coeffs.items():
            d = F.diff(v)
            if d:
                total = total + c * d
        return total

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.table == other.table and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.table, frozenset(self._coeffs.items())))

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return Derivation(self.table, {v: self.coeff(v) + other.coeff(v) for v in keys})

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Derivation":
        return Derivation(self.table, {v: p * c for v, p in self._coeffs.items()}, self.name)

    def embed(self, table: VarTable) -> "Derivation":
        return Derivation(table, {v: c.embed(table) for v, c in self._coeffs.items()}, self.name)

    def _check(self, other):
        if other.table != self.table:
            raise ValueError("derivations live on different tables")

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_degree_preserving(self) -> bool:
        """True when every coefficient is a homogeneous linear form."""
        return all(c.is_homogeneous() and c.degree() == 1 for c in self._coeffs.values())

    def terms(self) -> List[Tuple[str, Poly]]:
        return [(v, self._coeffs[v]) for v in self.table.names if v in self._coeffs]

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for v, c in self.terms():
            if c == 1:
                parts.append(f"D[{v}]")
                continue
            if c == -1:
                parts.append(f"-D[{v}]")
                continue
            text = render(c)
            if len(c) > 1:
                text = f"({text})"
            parts.append(f"{text}*D[{v}]")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Derivation({self.name or str(self)!r})"

    def to_json(self) -> dict:
        return {v: c.to_json() for v, c in self.terms()}


def commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """``[D1, D2]``: the ``d/dv`` coefficient is ``D1(c2_v) - D2(c1_v)``."""
    D1._check(D2)
    keys = [v for v in D1.table.names if v in D1._coeffs or v in D2._coeffs]
    return Derivation(D1.table, {v: D1(D2.coeff(v)) - D2(D1.coeff(v)) for v in keys})


def lie_derivative(X: VectorFieldM, K: SymTensor) -> SymTensor:
    """Lie derivative of a contravariant symmetric tensor along ``X``.

    ``(L_X K)^{i..} = X^k d_k K^{i..} - sum_a K^{i..k..} d_k X^{i_a}``.
    """
    n = K.valence
    if n < 1:
        raise ValueError("valence must be >= 1")
    table = K.table
    Xt, Xx = X.t_part.embed(table), X.x_part.embed(table)
    dXt_t, dXt_x = Xt.diff("t"), Xt.diff("x")
    dXx_t, dXx_x = Xx.diff("t"), Xx.diff("x")
    C = K.components
    zero = Poly.zero(table)
    out = []
    for q in range(n + 1):
        up = C[q + 1] if q < n else zero
        down = C[q - 1] if q > 0 else zero
        e = Xt * C[q].diff("t") + Xx * C[q].diff("x")
        e = e - (C[q] * dXt_t + up * dXt_x) * (n - q)
        e = e - (down * dXx_t + C[q] * dXx_x) * q
        out.append(e)
    return SymTensor(tuple(out))


def parameter_table(scheme: ParamScheme) -> VarTable:
    return VarTable.build((), scheme.labels)


def mst_project(LK: SymTensor, scheme: ParamScheme, name: str = "") -> Derivation:
    """Read a parameter-linear Killing tensor back as ``sum a'_i d/da_i``.

    Raises ``ValueError`` if ``LK`` is not in the span of the general element.
    """
    if LK.valence != scheme.n:
        raise ValueError("valence does not match the scheme")
    values = extract_parameters(LK, legacy=scheme.legacy)
    ptable = parameter_table(scheme)
    return Derivation(ptable, {l: p.embed(ptable) for l, p in values.items()}, name)


@lru_cache(maxsize=None)
def isometry_generators(n: int, legacy: bool = True) -> Tuple[Derivation, Derivation, Derivation]:
    """``(V1, V2, V3)`` for T, X, H acting on the valence-``n`` parameters."""
    K, scheme = general_element(n, legacy=legacy)
    fields = killing_vectors(K.table)
    return tuple(mst_project(lie_derivative(X, K), scheme, name=f"V{i}")
                 for i, X in enumerate(fields, start=1))


def cayley_generators(n: int, convention: str = "lemma") -> Tuple[Derivation, Derivation, Derivation]:
    """``(V-, V0, V+)`` for SL(2) acting on degree-``n`` binary forms.

    ``convention="lemma"`` gives ``V- = sum (n-i) a_{i+1} D[a_i]``,
    ``V0 = sum (2i-n) a_i D[a_i]``, ``V+ = sum i a_{i-1} D[a_i]``.
    ``convention="example"`` is the triple used in the worked quadratic
    example, which is the lemma triple with ``V-`` and ``V+`` swapped and
    ``V0`` negated.  Both satisfy the same commutator table.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if convention not in ("lemma", "example"):
        raise ValueError(f"unknown convention {convention!r}")
    labels = form_labels(n)
    table = VarTable.build((), labels)
    a = [Poly.var(table, l) for l in labels]
    minus = Derivation(table, {labels[i]: a[i + 1] * (n - i) for i in range(n)}, "V-")
    zero = Derivation(table, {labels[i]: a[i] * (2 * i - n) for i in range(n + 1)}, "V0")
    plus = Derivation(table, {labels[i]: a[i - 1] * i for i in range(1, n + 1)}, "V+")
    if convention == "example":
        return (Derivation(table, plus.coeffs, "V-"), Derivation(table, (-zero).coeffs, "V0"),
                Derivation(table, minus.coeffs, "V+"))
    return minus, zero, plus


def extended_generators(n: int, convention: str = "equivariant",
                        legacy: bool = True) -> Tuple[Derivation, Derivation, Derivation]:
    """Generators on the parameters extended by the base point ``(t, x)``.

    ``convention="printed"`` returns ``V1 + D[t]``, ``V2 + D[x]`` and
    ``V3 + x D[t] + t D[x]``.  ``convention="equivariant"`` (default)
    subtracts the Killing vectors instead.  Only the latter closes under
    the commutator table of ``-V1, -V2, -V3`` and annihilates pairings such
    as ``g(K, K)`` evaluated at the base point.
    """
    if convention not in ("equivariant", "printed"):
        raise ValueError(f"unknown convention {convention!r}")
    sign = 1 if convention == "printed" else -1
    V = isometry_generators(n, legacy)
    table = VarTable.build(GEOMETRIC_VARS, V[0].table.names)
    fields = killing_vectors(table)
    out = []
    for i, (Vi, X) in enumerate(zip(V, fields), start=1):
        geo = Derivation(table, {"t": X.t_part, "x": X.x_part})
        out.append(Derivation(table, (Vi.embed(table) + geo.scale(sign)).coeffs, f"V{i}~"))
    return tuple(out)


def structure_check(gens: Iterable[Derivation], table: Mapping[Tuple[int, int], Tuple[int, int]]) -> List[str]:
    """Check ``[g_i, g_j] = c * g_k`` for entries ``(i, j) -> (c, k)`` (``k = -1`` for zero).

    Returns a list of human-readable failures (empty when all hold).
    """
    gens = list(gens)
    failures = []
    for (i, j), (c, k) in table.items():
        got = commutator(gens[i], gens[j])
        want = Derivation(gens[i].table) if k < 0 else gens[k].scale(c)
        if got != want:
            failures.append(f"[{i},{j}] = {got}, expected {want}")
    return failures


# [V1,V2]=0, [V1,V3]=-V2, [V2,V3]=-V1 (equivalently COMM for -V1,-V2,-V3)
ISOMETRY_TABLE = {(0, 1): (0, -1), (0, 2): (-1, 1), (1, 2): (-1, 0)}
# [T,X]=0, [T,H]=X, [X,H]=T
COMM_TABLE = {(0, 1): (0, -1), (0, 2): (1, 1), (1, 2): (1, 0)}
# [V-,V0]=-2V-, [V+,V0]=2V+, [V-,V+]=V0
CAYLEY_TABLE = {(0, 1): (-2, 0), (2, 1): (2, 2), (0, 2): (1, 1)}


def negated(gens: Iterable[Derivation]) -> List[Derivation]:
    return [g.scale(-1) for g in gens]
