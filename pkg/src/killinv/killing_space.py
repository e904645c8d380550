"""Killing tensors of arbitrary valence on the Minkowski plane.

Components are stored by the number ``q`` of ``x``-indices: ``components[q]``
is ``K^{1..1 2..2}`` with ``n - q`` ones (t) and ``q`` twos (x).  For a
Killing tensor, component ``q`` has degree at most ``q`` in ``t`` and at
most ``n - q`` in ``x``.

With the binomial weights factored out, the Killing equation forces the
coefficient of ``t^i x^j`` in component ``q`` to depend only on the pair
``(u, s) = (q - i, i + j)``; the slots ``u + s <= n`` carry the free
parameters.  The labelled scheme assigns them ring by ring: ring ``k``
takes row ``u = k - 1`` (labels ``a^k_s``) and then the diagonal
``u + s = n - k + 1`` (labels ``b^k_i``) for slots not yet taken.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Mapping, Sequence, Tuple

from . import linalg
from .ratpoly import Poly, VarTable, linear_combination

GEOMETRIC_VARS = ("t", "x")

# n = 2 labels used by the classical matrix form of K^{ij}
LEGACY_N2 = {"a0": "a1_0", "a1": "a2_0", "a2": "b1_0", "a3": "a1_1", "a4": "b1_1", "a5": "a1_2"}


def index_string(n: int, q: int) -> str:
    return "1" * (n - q) + "2" * q


@dataclass(frozen=True)
class SymTensor:
    """Symmetric contravariant tensor on the plane, ``n + 1`` distinct components."""

    components: Tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a tensor needs at least one component")
        table = comps[0].table
        if any(c.table != table for c in comps):
            raise ValueError("components live on different variable tables")
        object.__setattr__(self, "components", comps)

    @property
    def valence(self) -> int:
        return len(self.components) - 1

    @property
    def table(self) -> VarTable:
        return self.components[0].table

    def component(self, indices: Sequence[int]) -> Poly:
        """Full-index access; indices are 1 (t) or 2 (x) in any order."""
        if len(indices) != self.valence or any(i not in (1, 2) for i in indices):
            raise ValueError(f"bad index tuple {tuple(indices)} for valence {self.valence}")
        return self.components[sum(1 for i in indices if i == 2)]

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if other.valence != self.valence:
            raise ValueError("valence mismatch")
        return SymTensor(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "SymTensor":
        if isinstance(c, Poly):
            return SymTensor(tuple(c * p for p in self.components))
        return SymTensor(tuple(p.scale(c) for p in self.components))

    def subs(self, bindings) -> "SymTensor":
        return SymTensor(tuple(p.subs(bindings) for p in self.components))

    def embed(self, table: VarTable) -> "SymTensor":
        return SymTensor(tuple(p.embed(table) for p in self.components))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def lines(self) -> List[str]:
        n = self.valence
        return [f"K^{index_string(n, q)} = {p}" for q, p in enumerate(self.components)]

    def to_json(self) -> list:
        return [p.to_json() for p in self.components]


@dataclass(frozen=True)
class VectorFieldM:
    """Vector field ``t_part * d/dt + x_part * d/dx``."""

    t_part: Poly
    x_part: Poly

    def as_tensor(self) -> SymTensor:
        return SymTensor((self.t_part, self.x_part))


def killing_vectors(table: VarTable) -> Tuple[VectorFieldM, VectorFieldM, VectorFieldM]:
    """The translations T, X and the hyperbolic rotation H."""
    one, zero = Poly.const(table, 1), Poly.zero(table)
    t, x = Poly.var(table, "t"), Poly.var(table, "x")
    return VectorFieldM(one, zero), VectorFieldM(zero, one), VectorFieldM(x, t)


# -- parameter scheme ------------------------------------------------------------

def _ring_assignment(n: int) -> List[Tuple[str, Tuple[int, int]]]:
    taken: Dict[Tuple[int, int], str] = {}
    order: List[Tuple[str, Tuple[int, int]]] = []
    total = (n + 1) * (n + 2) // 2
    k = 1
    while len(taken) < total:
        u = k - 1
        for s in range(0, n - 2 * k + 3):
            if (u, s) not in taken and u + s <= n:
                label = f"a{k}_{s}"
                taken[(u, s)] = label
                order.append((label, (u, s)))
        i = 0
        while True:
            slot = (n - k + 1 - i, i)
            if slot[0] < 0 or slot in taken:
                break
            label = f"b{k}_{i}"
            taken[slot] = label
            order.append((label, slot))
            i += 1
        k += 1
        if k > n + 2:
            raise AssertionError("ring construction did not terminate")
    return order


@dataclass(frozen=True)
class ParamScheme:
    """Labels of the parameters of the general Killing tensor of valence ``n``.

    ``slots[k]`` is the triangle position ``(u, s)`` of ``labels[k]``; its
    canonical coefficient slot is component ``u``, monomial ``x^s``.
    """

    n: int
    labels: Tuple[str, ...]
    slots: Tuple[Tuple[int, int], ...]
    legacy: bool = False

    @classmethod
    def build(cls, n: int, legacy: bool = True) -> "ParamScheme":
        if n < 1:
            raise ValueError("valence must be >= 1")
        order = _ring_assignment(n)
        if legacy and n == 2:
            by_scheme = dict(order)
            labels = tuple(LEGACY_N2)
            slots = tuple(by_scheme[LEGACY_N2[a]] for a in labels)
            return cls(n, labels, slots, legacy=True)
        return cls(n, tuple(l for l, _ in order), tuple(s for _, s in order), legacy=False)

    def __len__(self):
        return len(self.labels)

    @property
    def slot_of(self) -> Dict[str, Tuple[int, int]]:
        return dict(zip(self.labels, self.slots))

    @property
    def label_at(self) -> Dict[Tuple[int, int], str]:
        return dict(zip(self.slots, self.labels))

    def coefficient_slot(self, label: str) -> Tuple[int, int, int]:
        """(component index q, t-exponent, x-exponent) carrying the label."""
        u, s = self.slot_of[label]
        return (u, 0, s)

    def scheme_label(self, label: str) -> str:
        return LEGACY_N2[label] if self.legacy else label

    def weights(self) -> Dict[str, int]:
        """Grading by ``s``: V1 and V2 raise it by one, V3 preserves it."""
        return {l: s for l, (_, s) in zip(self.labels, self.slots)}

    def table(self, group: Sequence[str] = ()) -> VarTable:
        return VarTable.build(GEOMETRIC_VARS, self.labels, group)

    def invariant_label(self) -> str:
        """Label of the slot (0, n), i.e. a^1_n."""
        return self.label_at[(0, self.n)]


# -- Killing equation --------------------------------------------------------------

def killing_equations(K: SymTensor) -> List[Poly]:
    """Left-hand sides that vanish identically iff K is a Killing tensor.

    Equation ``q`` (``q = 0..n+1``) is the coefficient of ``p_t^(n+1-q) p_x^q``
    in ``p_t dF/dt - p_x dF/dx`` where ``F`` pairs K with momenta.
    """
    n = K.valence
    C = K.components
    out = []
    for q in range(n + 2):
        e = Poly.zero(K.table)
        if q <= n:
            e = e + C[q].diff("t").scale(comb(n, q))
        if q >= 1:
            e = e - C[q - 1].diff("x").scale(comb(n, q - 1))
        out.append(e)
    return out


def killing_check(K: SymTensor) -> bool:
    if K.valence < 1:
        raise ValueError("valence must be >= 1")
    return all(e.is_zero() for e in killing_equations(K))


def _geom_table() -> VarTable:
    return VarTable.build(GEOMETRIC_VARS)


@lru_cache(maxsize=None)
def killing_basis(n: int) -> Tuple[SymTensor, ...]:
    """Basis of the Killing tensors of valence ``n`` by a direct linear solve.

    Each component is a generic polynomial within the degree bounds
    (degree <= q in t, <= n - q in x); the equations are the coefficients
    of :func:`killing_equations`.
    """
    if n < 1:
        raise ValueError("valence must be >= 1")
    unknowns = [(q, i, j) for q in range(n + 1) for i in range(q + 1) for j in range(n - q + 1)]
    col = {u: k for k, u in enumerate(unknowns)}
    eqs: Dict[Tuple[int, int, int], Dict[int, Fraction]] = {}

    def add(key, c, coef):
        row = eqs.setdefault(key, {})
        row[c] = row.get(c, 0) + coef

    for (q, i, j), c in col.items():
        # + C(n, q) d/dt of t^i x^j in equation q
        if i:
            add((q, i - 1, j), c, Fraction(comb(n, q) * i))
        # - C(n, q) d/dx of t^i x^j in equation q + 1
        if j:
            add((q + 1, i, j - 1), c, Fraction(-comb(n, q) * j))
    rows = [{k: v for k, v in r.items() if v} for r in eqs.values()]
    table = _geom_table()
    basis = []
    for vec in linalg.nullspace(rows, len(unknowns)):
        comps = [dict() for _ in range(n + 1)]
        for k, v in vec.items():
            q, i, j = unknowns[k]
            comps[q][(i, j)] = v
        basis.append(SymTensor(tuple(Poly(table, c) for c in comps)))
    return tuple(basis)


def general_element(n: int, legacy: bool = True) -> Tuple[SymTensor, ParamScheme]:
    """General Killing tensor with one symbol per parameter of the scheme."""
    scheme = ParamScheme.build(n, legacy=legacy)
    table = scheme.table()
    at = scheme.label_at
    comps = []
    for q in range(n + 1):
        terms = {}
        for i in range(q + 1):
            for j in range(n - q + 1):
                label = at[(q - i, i + j)]
                e = [0] * len(table)
                e[0], e[1] = i, j
                e[table.index(label)] = 1
                terms[tuple(e)] = comb(q, i) * comb(n - q, j)
        comps.append(Poly(table, terms))
    return SymTensor(tuple(comps)), scheme


# -- symmetrized products ---------------------------------------------------------

_MOMENTUM = ("pt", "px")


def _momentum_table(table: VarTable) -> VarTable:
    return VarTable.build(table.of_kind("geometric") + _MOMENTUM,
                          table.of_kind("parameter"), table.of_kind("group"))


def momentum_polynomial(K: SymTensor, mtable: VarTable) -> Poly:
    n = K.valence
    pt, px = Poly.var(mtable, "pt"), Poly.var(mtable, "px")
    total = Poly.zero(mtable)
    for q, c in enumerate(K.components):
        total = total + c.embed(mtable) * pt ** (n - q) * px ** q * comb(n, q)
    return total


def tensor_from_momentum(F: Poly, n: int, table: VarTable) -> SymTensor:
    groups = F.group_by(_MOMENTUM)
    comps = []
    for q in range(n + 1):
        c = groups.get((n - q, q), Poly.zero(F.table))
        comps.append(_restrict(c, table) / comb(n, q))
    extra = set(groups) - {(n - q, q) for q in range(n + 1)}
    if extra:
        raise ValueError("momentum polynomial is not homogeneous of degree n")
    return SymTensor(tuple(comps))


def _restrict(p: Poly, table: VarTable) -> Poly:
    return Poly(table, {tuple(m[p.table.index(nm)] for nm in table.names): c
                        for m, c in p.items()})


def sym_product(*fields: VectorFieldM, normalization: str = "distinct") -> SymTensor:
    """Symmetrized tensor product of Killing vectors.

    Parameters
    ----------
    *fields : VectorFieldM
        Factors, repeated as often as they occur.
    normalization : {"distinct", "full"}
        ``"distinct"`` sums the tensor products over the *distinct* orderings
        of the factors, so ``T⊙T = T⊗T`` and ``T⊙X = T⊗X + X⊗T``; the six
        valence-2 products then reproduce the matrix form with the same
        parameters.  ``"full"`` sums over all ``n!`` orderings (no ``1/n!``),
        so ``T⊙T = 2 T⊗T``.
    """
    if not fields:
        raise ValueError("need at least one factor")
    if normalization not in ("distinct", "full"):
        raise ValueError(f"unknown normalization {normalization!r}")
    table = fields[0].t_part.table
    mtable = _momentum_table(table)
    counts: List[Tuple[VectorFieldM, int]] = []
    for f in fields:
        for k, (g, c) in enumerate(counts):
            if g == f:
                counts[k] = (g, c + 1)
                break
        else:
            counts.append((f, 1))
    n = len(fields)
    weight = Fraction(1)
    for k in range(1, n + 1):
        weight *= k
    F = Poly.const(mtable, 1)
    for f, c in counts:
        if normalization == "distinct":
            for k in range(1, c + 1):
                weight /= k
        F = F * momentum_polynomial(f.as_tensor(), mtable) ** c
    return tensor_from_momentum(F.scale(weight), n, table)


def sym_product_basis(n: int, normalization: str = "distinct") -> Tuple[SymTensor, ...]:
    """All products T^p ⊙ X^q ⊙ H^r with p + q + r = n.

    Ordered by (r, q) ascending so that for n = 2 the order is
    TT, TX, XX, TH, XH, HH.
    """
    if n < 1:
        raise ValueError("valence must be >= 1")
    T, X, H = killing_vectors(_geom_table())
    out = []
    for r in range(n + 1):
        for q in range(n - r + 1):
            p = n - r - q
            out.append(sym_product(*([T] * p + [X] * q + [H] * r), normalization=normalization))
    return tuple(out)


def dtt_dimension(m: int, n: int) -> int:
    """Dimension of valence-n Killing tensors on an m-dimensional constant-curvature space."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    value = Fraction(comb(m + n, n + 1) * comb(m + n - 1, n), m)
    if value.denominator != 1:
        raise AssertionError("DTT formula produced a non-integer")
    return int(value)


# -- coefficient extraction ------------------------------------------------------

def coefficient_vector(K: SymTensor) -> Dict[Tuple[int, int, int], Fraction]:
    """Flatten a tensor with rational coefficients to ``{(q, i, j): value}``."""
    out = {}
    for q, p in enumerate(K.components):
        for key, c in p.group_by(GEOMETRIC_VARS).items():
            if not c.is_constant():
                raise ValueError("tensor has non-constant coefficients")
            v = c.constant_term()
            if v:
                out[(q,) + key] = v
    return out


def span_rank(tensors: Sequence[SymTensor]) -> int:
    keys: Dict[Tuple[int, int, int], int] = {}
    rows = []
    for K in tensors:
        vec = coefficient_vector(K)
        rows.append({keys.setdefault(k, len(keys)): v for k, v in vec.items()})
    return linalg.rank(rows)


@lru_cache(maxsize=None)
def _extraction(n: int, legacy: bool):
    general, scheme = general_element(n, legacy)
    table = general.table
    row_keys: List[Tuple[int, int, int]] = []
    rows = []
    col = {l: k for k, l in enumerate(scheme.labels)}
    for q, comp in enumerate(general.components):
        for key, c in sorted(comp.group_by(GEOMETRIC_VARS).items()):
            row = {}
            for m, v in c.items():
                label = [table.names[i] for i, e in enumerate(m) if e][0]
                row[col[label]] = v
            row_keys.append((q,) + key)
            rows.append(row)
    L, Kc = linalg.left_inverse(rows, len(scheme.labels))
    return scheme, row_keys, L, Kc


def extract_parameters(K: SymTensor, legacy: bool = True) -> Dict[str, Poly]:
    """Solve ``general_element(a') = K`` for the parameters ``a'``.

    Coefficients of ``K`` may be polynomials in non-geometric variables; the
    returned values live on ``K``'s table.  Raises ``ValueError`` when K is
    not in the span of the general element.
    """
    scheme, row_keys, L, Kc = _extraction(K.valence, legacy)
    index = {k: r for r, k in enumerate(row_keys)}
    rhs: Dict[int, Poly] = {}
    for q, p in enumerate(K.components):
        for key, c in p.group_by(GEOMETRIC_VARS).items():
            r = index.get((q,) + key)
            if r is None:
                raise ValueError(f"component {q} has monomial t^{key[0]} x^{key[1]} "
                                 "outside the Killing degree bounds")
            rhs[r] = c
    table = K.table
    for k in Kc:
        check = linear_combination(((v, rhs[r]) for r, v in k.items() if r in rhs), table)
        if not check.is_zero():
            raise ValueError("tensor is not a Killing tensor (inconsistent system)")
    return {label: linear_combination(((v, rhs[r]) for r, v in L[j].items() if r in rhs), table)
            for j, label in enumerate(scheme.labels)}
