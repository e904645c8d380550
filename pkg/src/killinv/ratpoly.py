"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` is an immutable mapping from exponent vectors to
:class:`fractions.Fraction` coefficients over a fixed :class:`VarTable`.
Canonical text uses graded-lex order (largest monomial first), ``*`` for
products and ``^`` for powers, e.g. ``x^2*a5 + 2*x*a3 + a0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Number = Union[int, Fraction]

GEOMETRIC = "geometric"
PARAMETER = "parameter"
GROUP = "group"
_KINDS = (GEOMETRIC, PARAMETER, GROUP)


class VarTableMismatch(ValueError):
    """Raised when two polynomials over different variable tables meet."""


@dataclass(frozen=True)
class VarTable:
    """Ordered, named variables with a kind tag each."""

    names: Tuple[str, ...]
    kinds: Tuple[str, ...]

    def __post_init__(self):
        if len(self.names) != len(self.kinds):
            raise ValueError("names and kinds differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for k in self.kinds:
            if k not in _KINDS:
                raise ValueError(f"unknown variable kind {k!r}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def build(cls, geometric=(), parameters=(), group=()) -> "VarTable":
        names = tuple(geometric) + tuple(parameters) + tuple(group)
        kinds = ((GEOMETRIC,) * len(geometric) + (PARAMETER,) * len(parameters)
                 + (GROUP,) * len(group))
        return cls(names, kinds)

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} is not registered") from None

    def of_kind(self, kind: str) -> Tuple[str, ...]:
        return tuple(n for n, k in zip(self.names, self.kinds) if k == kind)

    def extend(self, geometric=(), parameters=(), group=()) -> "VarTable":
        """Return a larger table keeping the geometric/parameter/group order."""
        return VarTable.build(
            self.of_kind(GEOMETRIC) + tuple(g for g in geometric if g not in self),
            self.of_kind(PARAMETER) + tuple(p for p in parameters if p not in self),
            self.of_kind(GROUP) + tuple(g for g in group if g not in self),
        )


def grlex_key(m: Monomial):
    """Sort key; larger key means larger monomial in graded-lex order."""
    return (sum(m), m)


def monomials_of_degree(nvars: int, deg: int, positions: Sequence[int] = None,
                        size: int = None) -> list:
    """All exponent vectors of total degree ``deg`` supported on ``positions``.

    ``size`` is the full vector length (defaults to ``nvars``).
    """
    if positions is None:
        positions = range(nvars)
    positions = list(positions)
    size = nvars if size is None else size
    out = []
    for combo in combinations_with_replacement(positions, deg):
        e = [0] * size
        for p in combo:
            e[p] += 1
        out.append(tuple(e))
    return out


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[Monomial, Number] = None):
        self.table = table
        clean = {}
        if terms:
            n = len(table)
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"exponent vector {m} does not match table of size {n}")
                c = _frac(c)
                if c:
                    clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table, terms):
        p = cls.__new__(cls)
        p.table = table
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, table):
        return cls._raw(table, {})

    @classmethod
    def const(cls, table, c):
        c = _frac(c)
        return cls._raw(table, {(0,) * len(table): c} if c else {})

    @classmethod
    def var(cls, table, name):
        e = [0] * len(table)
        e[table.index(name)] = 1
        return cls._raw(table, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, table, exps: Union[Monomial, Mapping[str, int]], coeff=1):
        return cls._raw(table, {_as_monomial(table, exps): _frac(coeff)} if coeff else {})

    # -- basic protocol ----------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or list(self._terms) == [(0,) * len(self.table)]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.table, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({render(self)!r})"

    def __str__(self):
        return render(self)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.table != self.table:
                raise VarTableMismatch(
                    f"variable tables differ: {self.table.names} vs {other.table.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.table, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly._raw(self.table, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _frac(c)
        if not c:
            return Poly.zero(self.table)
        return Poly._raw(self.table, {m: v * c for m, v in self._terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if not c.is_constant() or c.is_zero():
                raise ZeroDivisionError("division only by nonzero constants")
            c = c.constant_term()
        return self.scale(1 / _frac(c))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus and substitution -----------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self.table.index(name)
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Poly._raw(self.table, out)

    def subs(self, bindings: Mapping[str, Union["Poly", Number]]) -> "Poly":
        """Simultaneous substitution; unbound variables pass through."""
        if not bindings:
            return self
        idx = {}
        for name, val in bindings.items():
            i = self.table.index(name)
            idx[i] = val if isinstance(val, Poly) else Poly.const(self.table, val)
            if idx[i].table != self.table:
                raise VarTableMismatch(f"binding for {name!r} lives on another table")
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = idx[i] ** e
            return powers[key]

        result = Poly.zero(self.table)
        for m, c in self._terms.items():
            rest = list(m)
            term = None
            for i in idx:
                if m[i]:
                    f = power(i, m[i])
                    term = f if term is None else term * f
                    rest[i] = 0
            mono = Poly._raw(self.table, {tuple(rest): c})
            result = result + (mono if term is None else mono * term)
        return result

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        """Exact value; every variable occurring in the polynomial must be bound."""
        vals = {}
        for name, v in point.items():
            if name in self.table:
                vals[self.table.index(name)] = _frac(v)
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    if i not in vals:
                        raise KeyError(f"no value for {self.table.names[i]!r}")
                    t *= vals[i] ** e
            total += t
        return total

    # -- inspection ----------------------------------------------------------
    def coeff(self, m: Union[Monomial, Mapping[str, int]]) -> Fraction:
        return self._terms.get(_as_monomial(self.table, m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.table), Fraction(0))

    def group_by(self, names: Iterable[str]) -> Dict[Monomial, "Poly"]:
        """Split into ``{monomial over names: coefficient poly over the rest}``.

        Keys are exponent tuples in the order of ``names``.  Summing
        ``monomial * coefficient`` reproduces the polynomial exactly.
        """
        pos = [self.table.index(n) for n in names]
        groups: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            key = tuple(m[i] for i in pos)
            rest = list(m)
            for i in pos:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: Poly._raw(self.table, v) for k, v in groups.items()}

    def degree(self, name: str = None) -> int:
        """Degree in ``name`` (or total degree); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(m) for m in self._terms)
        i = self.table.index(name)
        return max(m[i] for m in self._terms)

    def degree_in(self, names: Iterable[str]) -> int:
        pos = [self.table.index(n) for n in names]
        if not self._terms:
            return -1
        return max(sum(m[i] for i in pos) for m in self._terms)

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(self.table.names[i] for i in sorted(used))

    def is_homogeneous(self, names: Iterable[str] = None):
        if names is None:
            degs = {sum(m) for m in self._terms}
        else:
            pos = [self.table.index(n) for n in names]
            degs = {sum(m[i] for i in pos) for m in self._terms}
        return len(degs) <= 1

    def embed(self, table: VarTable) -> "Poly":
        """Re-express over a table that contains every variable used here."""
        if table == self.table:
            return self
        mapping = []
        for i, name in enumerate(self.table.names):
            mapping.append((i, table.index(name) if name in table else None))
        out = {}
        for m, c in self._terms.items():
            e = [0] * len(table)
            for i, j in mapping:
                if m[i]:
                    if j is None:
                        raise VarTableMismatch(
                            f"variable {self.table.names[i]!r} missing from target table")
                    e[j] = m[i]
            out[tuple(e)] = c
        return Poly._raw(table, out)

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> list:
        return [{"exponents": list(m), "num": str(c.numerator), "den": str(c.denominator)}
                for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, table: VarTable, data: list) -> "Poly":
        return cls(table, {tuple(t["exponents"]): Fraction(int(t["num"]), int(t["den"]))
                           for t in data})


def _as_monomial(table, m) -> Monomial:
    if isinstance(m, Mapping):
        e = [0] * len(table)
        for name, k in m.items():
            e[table.index(name)] = k
        return tuple(e)
    m = tuple(m)
    if len(m) != len(table):
        raise ValueError("exponent vector does not match table size")
    return m


# -- canonical text ------------------------------------------------------------

def _render_monomial(names, m) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render(p: Poly) -> str:
    if p.is_zero():
        return "0"
    names = p.table.names
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        mono = _render_monomial(names, m)
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    pass


def parse(text: str, table: VarTable) -> Poly:
    """Parse the canonical rendering (and ordinary infix with parentheses)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        node = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term():
        node = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            if op == "*":
                node = node * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero constants")
                node = node / rhs.constant_term()
        return node

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer")
            return base ** val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Poly.const(table, val)
        if kind == "id":
            if val not in table:
                raise ParseError(f"unknown variable {val!r}")
            return Poly.var(table, val)
        if (kind, val) == ("op", "("):
            node = expr()
            if take() != ("op", ")"):
                raise ParseError("missing closing parenthesis")
            return node
        raise ParseError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ParseError(f"trailing input near token {peek()[1]!r}")
    return result


def linear_combination(pairs: Iterable[Tuple[Number, Poly]], table: VarTable) -> Poly:
    out: Dict[Monomial, Fraction] = {}
    for c, p in pairs:
        c = _frac(c)
        if not c:
            continue
        for m, v in p._terms.items():
            s = out.get(m, 0) + c * v
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return Poly._raw(table, out)
