"""Exact finite group actions and randomized invariance checks.

Isometries act by ``y~ = R y + c`` with ``R = [[ch, sh], [sh, ch]]``; a
contravariant tensor transforms as ``K~(y~) = R..R K(R^-1 (y~ - c))``.
Hyperbolic rotations are kept rational through ``lambda = e^phi``:
``ch = (lambda + 1/lambda) / 2`` and ``sh = (lambda - 1/lambda) / 2``.

Binary forms are acted on by substitution
``Q~(x, y) = Q(alpha x + beta y, gamma x + delta y)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple, Union

from .forms import BinaryForm, form_labels, form_table
from .killing_space import (GEOMETRIC_VARS, ParamScheme, SymTensor, _momentum_table,
                            extract_parameters, general_element, momentum_polynomial,
                            tensor_from_momentum)
from .ratpoly import Poly, VarTable, render

ISOMETRY_VARS = ("ch", "sh", "a", "b")


@dataclass(frozen=True)
class IsometryElem:
    """Rational isometry: boost ``lam > 0`` followed by translation ``(a, b)``."""

    lam: Fraction = Fraction(1)
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("lam", "a", "b"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.lam <= 0:
            raise ValueError("lam must be a positive rational")

    @property
    def ch(self) -> Fraction:
        return (self.lam + 1 / self.lam) / 2

    @property
    def sh(self) -> Fraction:
        return (self.lam - 1 / self.lam) / 2

    def values(self) -> Dict[str, Fraction]:
        return {"ch": self.ch, "sh": self.sh, "a": self.a, "b": self.b}

    def to_json(self) -> dict:
        return {"lam": str(self.lam), "a": str(self.a), "b": str(self.b)}


@dataclass(frozen=True)
class UnimodularElem:
    """``(x, y) -> (alpha x + beta y, gamma x + delta y)`` with determinant 1."""

    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)
    delta: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.alpha * self.delta - self.beta * self.gamma != 1:
            raise ValueError("determinant must be exactly 1")

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("alpha", "beta", "gamma", "delta")}


GroupElem = Union[IsometryElem, UnimodularElem]


def compose(g2: GroupElem, g1: GroupElem) -> GroupElem:
    """Element acting as ``g1`` first and then ``g2``."""
    if isinstance(g1, IsometryElem) and isinstance(g2, IsometryElem):
        t = g2.ch * g1.a + g2.sh * g1.b + g2.a
        x = g2.sh * g1.a + g2.ch * g1.b + g2.b
        return IsometryElem(g1.lam * g2.lam, t, x)
    if isinstance(g1, UnimodularElem) and isinstance(g2, UnimodularElem):
        # substitution is a right action: apply(g2, apply(g1, Q)) = Q(M1 M2 v)
        return UnimodularElem(g1.alpha * g2.alpha + g1.beta * g2.gamma,
                              g1.alpha * g2.beta + g1.beta * g2.delta,
                              g1.gamma * g2.alpha + g1.delta * g2.gamma,
                              g1.gamma * g2.beta + g1.delta * g2.delta)
    raise TypeError("cannot compose elements of different groups")


# -- isometries on tensors ----------------------------------------------------------

def _transform_momentum(K: SymTensor, ch, sh, a, b) -> SymTensor:
    """Shared core; ``ch, sh, a, b`` are Polys on the momentum table."""
    mt = _momentum_table(K.table)
    F = momentum_polynomial(K, mt)
    t, x = Poly.var(mt, "t"), Poly.var(mt, "x")
    pt, px = Poly.var(mt, "pt"), Poly.var(mt, "px")
    dt, dx = t - a, x - b
    G = F.subs({"t": ch * dt - sh * dx, "x": ch * dx - sh * dt,
                "pt": ch * pt + sh * px, "px": sh * pt + ch * px})
    return tensor_from_momentum(G, K.valence, K.table)


def isometry_apply(g: IsometryElem, K: SymTensor) -> SymTensor:
    """Push ``K`` forward by the exact isometry ``g``."""
    if K.valence < 1:
        raise ValueError("valence must be >= 1")
    mt = _momentum_table(K.table)
    c = {k: Poly.const(mt, v) for k, v in g.values().items()}
    return _transform_momentum(K, c["ch"], c["sh"], c["a"], c["b"])


def reduce_hyperbolic(p: Poly, ch: str = "ch", sh: str = "sh") -> Poly:
    """Rewrite ``ch^2 -> 1 + sh^2`` until ``ch`` occurs at most linearly."""
    table = p.table
    ic = table.index(ch)
    one_plus = Poly.const(table, 1) + Poly.var(table, sh) ** 2
    out = Poly.zero(table)
    for m, c in p.items():
        e = m[ic]
        if e < 2:
            out = out + Poly(table, {m: c})
            continue
        base = list(m)
        base[ic] = e % 2
        out = out + Poly(table, {tuple(base): c}) * one_plus ** (e // 2)
    return out


def transform_table(n: int, legacy: bool = True) -> VarTable:
    scheme = ParamScheme.build(n, legacy)
    return VarTable.build((), scheme.labels, ISOMETRY_VARS)


@lru_cache(maxsize=None)
def param_transform(n: int, legacy: bool = True) -> Dict[str, Poly]:
    """Symbolic transformation law ``a~_i(a, ch, sh, a, b)``.

    The translation parameters are the group variables ``a`` (along t) and
    ``b`` (along x).  Results are reduced modulo ``ch^2 = 1 + sh^2``.
    """
    K, scheme = general_element(n, legacy)
    big = K.table.extend(group=ISOMETRY_VARS)
    Kb = K.embed(big)
    mt = _momentum_table(big)
    g = {v: Poly.var(mt, v) for v in ISOMETRY_VARS}
    Kt = _transform_momentum(Kb, g["ch"], g["sh"], g["a"], g["b"])
    values = extract_parameters(Kt, legacy=legacy)
    out_table = transform_table(n, legacy)
    return {label: reduce_hyperbolic(values[label]).embed(out_table) for label in scheme.labels}


def infinitesimal_action(n: int, direction: str, legacy: bool = True) -> Dict[str, Poly]:
    """First-order term of :func:`param_transform` at the identity.

    ``direction`` is ``"a"`` (t-translation), ``"b"`` (x-translation) or
    ``"sh"`` (boost; ``d ch / d sh = 0`` at the identity).  The result is
    the map ``label -> coefficient`` on the parameter-only table.
    """
    if direction not in ("a", "b", "sh"):
        raise ValueError("direction must be 'a', 'b' or 'sh'")
    law = param_transform(n, legacy)
    scheme = ParamScheme.build(n, legacy)
    ptable = VarTable.build((), scheme.labels)
    identity = {"ch": 1, "sh": 0, "a": 0, "b": 0}
    return {l: p.diff(direction).subs(identity).embed(ptable) for l, p in law.items()}


def _numeric_transform(n: int, g: IsometryElem, point: Mapping[str, Fraction],
                       legacy: bool = True) -> Dict[str, Fraction]:
    K, scheme = general_element(n, legacy)
    geo = VarTable.build(GEOMETRIC_VARS)
    Kn = SymTensor(tuple(c.subs(point).embed(geo) if c else Poly.zero(geo)
                         for c in _bind(K, point)))
    new = extract_parameters(isometry_apply(g, Kn), legacy=legacy)
    return {l: p.constant_term() for l, p in new.items()}


def _bind(K: SymTensor, point):
    # substitute numeric parameters; remaining polys only involve t, x
    return [c.subs({k: Fraction(v) for k, v in point.items()}) for c in K.components]


# -- binary forms --------------------------------------------------------------------

def sl2_apply(g: UnimodularElem, Q: BinaryForm) -> BinaryForm:
    """``Q~(x, y) = Q(alpha x + beta y, gamma x + delta y)``, coefficients re-read."""
    if g.alpha * g.delta - g.beta * g.gamma != 1:
        raise ValueError("determinant must be exactly 1")
    P = Q.polynomial()
    table = P.table
    x, y = Poly.var(table, "x"), Poly.var(table, "y")
    Pt = P.subs({"x": x * g.alpha + y * g.beta, "y": x * g.gamma + y * g.delta})
    return BinaryForm.from_polynomial(Pt, Q.degree)


def _numeric_form_transform(n: int, g: UnimodularElem,
                            point: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    table = form_table(n)
    Q = BinaryForm(tuple(Poly.const(table, point[a]) for a in form_labels(n)))
    out = sl2_apply(g, Q)
    return {a: c.constant_term() for a, c in zip(form_labels(n), out.coefficients)}


# -- randomness ----------------------------------------------------------------------

def _rand_fraction(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_group_element(seed, kind: str = "isometry") -> GroupElem:
    """Deterministic random element; ``seed`` may be an int, str or ``random.Random``."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if kind == "isometry":
        lam = Fraction(rng.randint(1, 7), rng.randint(1, 7))
        return IsometryElem(lam, _rand_fraction(rng), _rand_fraction(rng))
    if kind == "unimodular":
        g = UnimodularElem()
        for _ in range(rng.randint(1, 4)):
            k = rng.choice([-3, -2, -1, 1, 2, 3])
            shear = UnimodularElem(1, k, 0, 1) if rng.random() < 0.5 else UnimodularElem(1, 0, k, 1)
            g = compose(shear, g)
        return g
    raise ValueError(f"unknown group kind {kind!r}")


# -- verification --------------------------------------------------------------------

@dataclass
class Verdict:
    passed: bool
    trials: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"pass": self.passed, "trials": self.trials,
                "counterexample": self.counterexample}


def family_labels(family: str, n: int, legacy: bool = True):
    if family == "itkt":
        return ParamScheme.build(n, legacy).labels
    if family == "cit":
        return form_labels(n)
    raise ValueError(f"unknown family {family!r}")


def verify_invariance(F: Poly, family: str, n: int, trials: int = 100, seed=0,
                      legacy: bool = True) -> Verdict:
    """Check ``F(a~) == F(a)`` exactly on random group elements and points.

    Trial ``k`` draws from ``random.Random(f"{seed}/{k}")``, so trials are
    independent of order.  Stops at the first counterexample.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    labels = family_labels(family, n, legacy)
    unknown = set(F.variables()) - set(labels)
    if unknown:
        raise ValueError(f"polynomial uses variables outside the parameters: {sorted(unknown)}")
    for k in range(trials):
        rng = random.Random(f"{seed}/{k}")
        point = {l: _rand_fraction(rng, 9) for l in labels}
        if family == "itkt":
            g = random_group_element(rng, "isometry")
            new = _numeric_transform(n, g, point, legacy)
        else:
            g = random_group_element(rng, "unimodular")
            new = _numeric_form_transform(n, g, point)
        before, after = F.evaluate(point), F.evaluate(new)
        if before != after:
            return Verdict(False, k + 1, {
                "trial": k,
                "element": g.to_json(),
                "point": {l: str(v) for l, v in point.items()},
                "value": str(before),
                "transformed_value": str(after),
                "poly": render(F),
            })
    return Verdict(True, trials, None)
