"""Polynomial invariants and covariants as joint kernels of derivations.

The search is linear algebra degree by degree: a polynomial ``F`` with
unknown coefficients on a fixed monomial set is annihilated by every
generator iff a sparse homogeneous system holds.  When every generator is
homogeneous for a weight grading on the variables, the monomials split
into independent blocks and each block is solved separately.

Kernel bases are canonical: each basis polynomial has leading monomial
(graded-lex largest) with coefficient 1, and no basis polynomial contains
the leading monomial of another.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .derivations import Derivation, cayley_generators, extended_generators, isometry_generators
from .killing_space import ParamScheme
from .ratpoly import Monomial, Poly, VarTable, grlex_key, monomials_of_degree, render


class SolverError(ValueError):
    """Raised when the generators do not fit the requested graded solve."""


# -- gradings --------------------------------------------------------------------

def generator_shift(gen: Derivation, weights: Mapping[str, int]) -> Optional[int]:
    """Weight change caused by ``gen``, or ``None`` if it is not homogeneous."""
    names = gen.table.names
    w = [weights.get(v, 0) for v in names]
    shifts = set()
    for v, c in gen.terms():
        wv = weights.get(v, 0)
        for m, _ in c.items():
            shifts.add(sum(e * w[i] for i, e in enumerate(m)) - wv)
    if len(shifts) > 1:
        return None
    return shifts.pop() if shifts else 0


def family_weights(family: str, n: int, legacy: bool = True) -> Dict[str, int]:
    if family == "itkt":
        return ParamScheme.build(n, legacy=legacy).weights()
    if family == "cit":
        return {f"a{i}": i for i in range(n + 1)}
    raise ValueError(f"unknown family {family!r}")


def family_generators(family: str, n: int, legacy: bool = True) -> Tuple[Derivation, ...]:
    if family == "itkt":
        return isometry_generators(n, legacy)
    if family == "cit":
        return cayley_generators(n)
    raise ValueError(f"unknown family {family!r}")


# -- kernel on a monomial set --------------------------------------------------------

def _image(gen: Derivation, m: Monomial) -> Dict[Monomial, Fraction]:
    out: Dict[Monomial, Fraction] = {}
    table = gen.table
    for v, c in gen.terms():
        i = table.index(v)
        e = m[i]
        if not e:
            continue
        base = list(m)
        base[i] -= 1
        for cm, cv in c.items():
            new = tuple(a + b for a, b in zip(base, cm))
            val = out.get(new, 0) + e * cv
            if val:
                out[new] = val
            else:
                out.pop(new, None)
    return out


def _solve_block(gens: Sequence[Derivation], monos: List[Monomial]) -> List[Dict[Monomial, Fraction]]:
    # ascending grlex so the free column of each null vector is its largest monomial
    monos = sorted(monos, key=grlex_key)
    rows: Dict[Tuple[int, Monomial], Dict[int, Fraction]] = {}
    for col, m in enumerate(monos):
        for g, gen in enumerate(gens):
            for img, val in _image(gen, m).items():
                rows.setdefault((g, img), {})[col] = val
    null = linalg.nullspace(list(rows.values()), len(monos))
    return [{monos[k]: v for k, v in vec.items()} for vec in null]


def joint_kernel(gens: Sequence[Derivation], monomials: Sequence[Monomial],
                 weights: Optional[Mapping[str, int]] = None,
                 block_key=None) -> List[Poly]:
    """Kernel of all ``gens`` on the span of ``monomials``.

    Parameters
    ----------
    gens : sequence of Derivation
        Generators sharing one table.
    monomials : sequence of exponent tuples
        Search space.
    weights : mapping, optional
        Variable weights for which every generator is homogeneous; used to
        split the solve into blocks.
    block_key : callable, optional
        Extra block label computed from a monomial; it must be preserved by
        every generator.
    """
    if not gens:
        raise SolverError("need at least one generator")
    table = gens[0].table
    if any(g.table != table for g in gens):
        raise SolverError("generators live on different tables")
    wvec = None
    if weights is not None:
        if any(generator_shift(g, weights) is None for g in gens):
            raise SolverError("a generator is not homogeneous for the given weights")
        wvec = [weights.get(v, 0) for v in table.names]
    blocks: Dict[tuple, List[Monomial]] = {}
    for m in monomials:
        key = ()
        if wvec is not None:
            key += (sum(e * w for e, w in zip(m, wvec)),)
        if block_key is not None:
            key += (block_key(m),)
        blocks.setdefault(key, []).append(m)
    out = []
    for key in sorted(blocks):
        for vec in _solve_block(gens, blocks[key]):
            out.append(Poly(table, vec))
    out.sort(key=lambda p: grlex_key(p.sorted_terms()[0][0]), reverse=True)
    return out


def kernel_at_degree(gens: Sequence[Derivation], deg: int,
                     weights: Optional[Mapping[str, int]] = None) -> List[Poly]:
    """Canonical basis of homogeneous degree-``deg`` polynomials killed by all ``gens``.

    The generators must have homogeneous linear coefficients so that they
    preserve total degree; otherwise :class:`SolverError` is raised.
    """
    if deg < 1:
        raise SolverError("degree must be >= 1")
    if not gens:
        raise SolverError("need at least one generator")
    for g in gens:
        if not g.is_degree_preserving():
            raise SolverError(f"generator {g.name or g} does not preserve total degree")
    table = gens[0].table
    monos = monomials_of_degree(len(table), deg)
    return joint_kernel(gens, monos, weights)


# -- bookkeeping at points -----------------------------------------------------------

def random_point(table: VarTable, rng: random.Random, names: Optional[Sequence[str]] = None,
                 bound: int = 9) -> Dict[str, Fraction]:
    names = table.names if names is None else names
    point = {}
    for v in names:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        point[v] = Fraction(num, den)
    return point


def orbit_dimension(gens: Sequence[Derivation], point: Mapping[str, Fraction]) -> int:
    """Rank of the generators' coefficient vectors evaluated at ``point``."""
    table = gens[0].table
    rows = []
    for g in gens:
        row = {}
        for v, c in g.terms():
            val = c.evaluate(point)
            if val:
                row[table.index(v)] = val
        rows.append(row)
    return linalg.rank(rows)


def functional_independence(polys: Sequence[Poly], point: Mapping[str, Fraction]) -> int:
    """Exact rank of the Jacobian of ``polys`` at ``point``."""
    if not polys:
        return 0
    table = polys[0].table
    rows = []
    for p in polys:
        row = {}
        for j, v in enumerate(table.names):
            d = p.diff(v)
            if d:
                val = d.evaluate(point)
                if val:
                    row[j] = val
        rows.append(row)
    return linalg.rank(rows)


def generic_orbit_dimension(gens: Sequence[Derivation], seed: int = 0, samples: int = 5):
    """Maximum orbit dimension over ``samples`` random rational points.

    Returns ``(s, point)`` with the first point attaining the maximum.
    """
    rng = random.Random(f"{seed}/orbit")
    table = gens[0].table
    best, best_point = -1, None
    for _ in range(samples):
        point = random_point(table, rng)
        s = orbit_dimension(gens, point)
        if s > best:
            best, best_point = s, point
    return best, best_point


# -- span utilities ------------------------------------------------------------------

def _rows_for(polys: Sequence[Poly], index: Dict[Monomial, int]) -> List[Dict[int, Fraction]]:
    rows = []
    for p in polys:
        rows.append({index.setdefault(m, len(index)): c for m, c in p.items()})
    return rows


def in_span(target: Poly, basis: Sequence[Poly]) -> bool:
    """Exact linear-span membership."""
    index: Dict[Monomial, int] = {}
    rows = _rows_for(basis, index)
    r = linalg.rank(rows)
    return linalg.rank(rows + _rows_for([target], index)) == r


def products_of_degree(gens: Sequence[Poly], deg: int) -> List[Poly]:
    """All products of the homogeneous polynomials ``gens`` with total degree ``deg``."""
    degs = [g.degree() for g in gens]
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(acc)
            return
        for i in range(start, len(gens)):
            if degs[i] <= remaining:
                rec(i, remaining - degs[i], acc * gens[i])

    if gens:
        rec(0, deg, Poly.const(gens[0].table, 1))
    return out


def in_algebra_span(target: Poly, gens: Sequence[Poly]) -> bool:
    """Is the homogeneous ``target`` a linear combination of products of ``gens``?"""
    if not target.is_homogeneous():
        raise ValueError("target must be homogeneous")
    return in_span(target, products_of_degree(list(gens), target.degree()))


def _reduce_modulo(polys: Sequence[Poly], span: Sequence[Poly]) -> List[Poly]:
    """Canonical representatives of ``polys`` modulo ``span`` (graded-lex pivots)."""
    if not polys:
        return []
    table = polys[0].table
    monos = sorted({m for p in list(polys) + list(span) for m, _ in p.items()},
                   key=grlex_key, reverse=True)
    index = {m: k for k, m in enumerate(monos)}  # column 0 is the largest monomial
    base = linalg.rref(_rows_for(span, dict(index)))
    reps = []
    for row in _rows_for(polys, dict(index)):
        row = dict(row)
        for c in sorted(base):
            f = row.get(c)
            if f:
                for k, v in base[c].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if row:
            reps.append(row)
    reduced = linalg.rref(reps)
    # clear span pivots that reappeared during reduction of the remainders
    out = []
    for c in sorted(reduced):
        row = reduced[c]
        for bc in sorted(base):
            f = row.get(bc)
            if f:
                for k, v in base[bc].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        out.append(Poly(table, {monos[k]: v for k, v in row.items()}))
    return out


# -- report ------------------------------------------------------------------------

@dataclass
class InvariantReport:
    """Result of a degree-by-degree invariant search.

    Attributes
    ----------
    generators : str
        Identifier of the generator set.
    d, s : int
        Dimension of the parameter space and generic orbit dimension.
    per_degree : dict
        Kernel basis for each degree searched.
    fundamentals : list of Poly
        Kernel elements not in the span of products of earlier findings.
    jacobian_rank : int
        Rank of the fundamentals' Jacobian at ``point``.
    """

    generators: str
    max_degree: int
    d: int
    s: int
    per_degree: Dict[int, List[Poly]] = field(default_factory=dict)
    fundamentals: List[Poly] = field(default_factory=list)
    jacobian_rank: int = 0
    seed: int = 0
    point: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def expected(self) -> int:
        return self.d - self.s

    def to_json(self) -> dict:
        return {
            "generators": self.generators,
            "max_degree": self.max_degree,
            "horizon": f"up to degree {self.max_degree}",
            "d": self.d,
            "s": self.s,
            "expected": self.expected,
            "per_degree": [{"deg": k, "kernel": [render(p) for p in v]}
                           for k, v in sorted(self.per_degree.items())],
            "fundamentals": [render(p) for p in self.fundamentals],
            "jacobian_rank": self.jacobian_rank,
            "seed": self.seed,
            "point": {k: str(v) for k, v in self.point.items()},
        }


def fundamental_search(gens: Sequence[Derivation], max_deg: int = 4, seed: int = 0,
                       weights: Optional[Mapping[str, int]] = None,
                       name: str = "") -> InvariantReport:
    """Search invariants up to ``max_deg`` and filter fundamental candidates.

    At each degree the kernel is reduced modulo the span of products of the
    candidates already found; the non-zero remainders (in reduced echelon
    form) are the new candidates.  Completeness is only claimed up to the
    search degree.
    """
    if max_deg < 1:
        raise SolverError("max_deg must be >= 1")
    gens = list(gens)
    table = gens[0].table
    s, point = generic_orbit_dimension(gens, seed)
    report = InvariantReport(generators=name, max_degree=max_deg, d=len(table), s=s,
                             seed=seed, point=point)
    for k in range(1, max_deg + 1):
        basis = kernel_at_degree(gens, k, weights)
        report.per_degree[k] = basis
        products = products_of_degree(report.fundamentals, k)
        report.fundamentals.extend(_reduce_modulo(basis, products))
    report.jacobian_rank = functional_independence(report.fundamentals, point)
    return report


def covariant_kernel(n: int, deg: int, convention: str = "equivariant",
                     legacy: bool = True) -> List[Poly]:
    """Polynomials in the parameters and ``(t, x)`` killed by the extended generators.

    The search space is all non-constant polynomials of joint degree at most
    ``deg``; the extended generators lower the ``(t, x)``-degree, so no
    single homogeneous slice is invariant.  The solve is split by parameter
    degree and by the weight ``sum(s) - deg_tx`` which every extended
    generator shifts uniformly.
    """
    if deg < 1:
        raise SolverError("degree must be >= 1")
    gens = extended_generators(n, convention, legacy)
    table = gens[0].table
    weights = dict(family_weights("itkt", n, legacy))
    weights.update({"t": -1, "x": -1})
    geo = [table.index("t"), table.index("x")]
    monos = [m for k in range(1, deg + 1) for m in monomials_of_degree(len(table), k)]
    return joint_kernel(gens, monos, weights,
                        block_key=lambda m: sum(m) - sum(m[i] for i in geo))
