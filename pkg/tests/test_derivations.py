from math import comb

import pytest
import sympy

from killinv.derivations import (CAYLEY_TABLE, COMM_TABLE, ISOMETRY_TABLE, Derivation,
                                 cayley_generators, commutator, extended_generators,
                                 isometry_generators, lie_derivative, mst_project, negated,
                                 structure_check)
from killinv.forms import BinaryForm, general_form
from killinv.killing_space import (ParamScheme, VectorFieldM, general_element, killing_check,
                                   killing_vectors)
from killinv.ratpoly import Poly, VarTable, parse

pt, px = sympy.symbols("pt px")


def to_sympy(p):
    syms = sympy.symbols(p.table.names)
    return sum(sympy.Rational(c.numerator, c.denominator)
               * sympy.Mul(*[s ** e for s, e in zip(syms, m)]) for m, c in p.items())


def symbol(components):
    n = len(components) - 1
    return sum(comb(n, q) * to_sympy(c) * pt ** (n - q) * px ** q
               for q, c in enumerate(components))


def canonical_bracket(A, B):
    t, x = sympy.symbols("t x")
    return sympy.expand(sum(sympy.diff(A, q) * sympy.diff(B, p) - sympy.diff(A, p) * sympy.diff(B, q)
                            for q, p in ((t, pt), (x, px))))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lie_derivative_matches_poisson_oracle(n):
    # L_X K corresponds to {F_K, F_X} on symbols, for any polynomial field X
    K, _ = general_element(n)
    table = K.table
    X = VectorFieldM(parse("t^2 + x*a0" if n == 2 else "t^2 + x", table),
                     parse("t*x - 3", table))
    for field in (X,) + killing_vectors(table):
        got = symbol(lie_derivative(field, K).components)
        want = canonical_bracket(symbol(K.components), symbol((field.t_part, field.x_part)))
        assert sympy.expand(got - want) == 0


@pytest.mark.parametrize("n", range(1, 6))
def test_lie_derivative_along_isometries_stays_killing(n):
    K, _ = general_element(n)
    for X in killing_vectors(K.table):
        assert killing_check(lie_derivative(X, K))


def test_vecM_golden(golden):
    V = isometry_generators(2)
    table = V[0].table
    want = {"V1": {}, "V2": {}, "V3": {}}
    for ln in golden("vecM_n2.txt"):
        g, v, c = [s.strip() for s in ln.split(":")]
        want[g][v] = parse(c, table)
    for gen in V:
        assert gen == Derivation(table, want[gen.name]), gen.name


def test_vecM_rendering():
    V1, V2, V3 = isometry_generators(2)
    assert str(V1) == "a3*D[a1] + 2*a4*D[a2] + a5*D[a4]"
    assert str(V2) == "2*a3*D[a0] + a4*D[a1] + a5*D[a3]"
    assert str(V3) == "-2*a1*D[a0] + (-a0 - a2)*D[a1] - 2*a1*D[a2] - a4*D[a3] - a3*D[a4]"


@pytest.mark.parametrize("n", range(1, 7))
def test_isometry_commutators(n):
    V = isometry_generators(n)
    assert structure_check(V, ISOMETRY_TABLE) == []
    assert structure_check(negated(V), COMM_TABLE) == []


@pytest.mark.parametrize("n", range(1, 7))
def test_mst_closed_form_on_slots(n):
    # coefficient of D[M(u,s)]: V1 u M(u-1,s+1), V2 (n-u-s) M(u,s+1),
    # V3 -[u M(u-1,s) + (n-u-s) M(u+1,s)]
    scheme = ParamScheme.build(n)
    V1, V2, V3 = isometry_generators(n)
    table = V1.table
    at = scheme.label_at

    def M(u, s):
        return Poly.var(table, at[(u, s)]) if (u, s) in at else Poly.zero(table)

    for (u, s), label in at.items():
        assert V1.coeff(label) == M(u - 1, s + 1) * u
        assert V2.coeff(label) == M(u, s + 1) * (n - u - s)
        assert V3.coeff(label) == -(M(u - 1, s) * u + M(u + 1, s) * (n - u - s))


def test_mst_project_is_linear():
    K, scheme = general_element(2)
    T, X, H = killing_vectors(K.table)
    a = mst_project(lie_derivative(T, K), scheme)
    b = mst_project(lie_derivative(H, K), scheme)
    both = mst_project(lie_derivative(T, K).scale(2) + lie_derivative(H, K), scheme)
    assert both == a.scale(2) + b


def test_commutator_is_antisymmetric_and_jacobi():
    V = isometry_generators(3)
    for A in V:
        for B in V:
            assert commutator(A, B) == -commutator(B, A)
    A, B, C = V
    total = (commutator(A, commutator(B, C)) + commutator(B, commutator(C, A))
             + commutator(C, commutator(A, B)))
    assert total.is_zero()


def test_cayley_lemma_rendering():
    Vm, V0, Vp = cayley_generators(3)
    assert str(Vm) == "3*a1*D[a0] + 2*a2*D[a1] + a3*D[a2]"
    assert str(V0) == "-3*a0*D[a0] - a1*D[a1] + a2*D[a2] + 3*a3*D[a3]"
    assert str(Vp) == "a0*D[a1] + 2*a1*D[a2] + 3*a2*D[a3]"


def test_cayley_quadratic_example():
    Vm, V0, Vp = cayley_generators(2, "example")
    assert str(Vm) == "a0*D[a1] + 2*a1*D[a2]"
    assert str(V0) == "2*a0*D[a0] - 2*a2*D[a2]"
    assert str(Vp) == "2*a1*D[a0] + a2*D[a1]"


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("convention", ["lemma", "example"])
def test_cayley_commutators(n, convention):
    assert structure_check(cayley_generators(n, convention), CAYLEY_TABLE) == []


@pytest.mark.parametrize("n", range(1, 6))
def test_cayley_matches_substitution_oracle(n):
    # differentiate Q(x + e*y, y), Q(x, y + e*x), Q((1+e) x, (1-e) y) at e = 0
    Q = general_form(n)
    P = Q.polynomial()
    T = P.table.extend(group=("e",))
    P = P.embed(T)
    x, y, e = (Poly.var(T, v) for v in "xye")
    labels = [f"a{i}" for i in range(n + 1)]

    def flow(b):
        d = P.subs(b).diff("e").subs({"e": 0})
        return dict(zip(labels, BinaryForm.from_polynomial(d, n).coefficients))

    Vm, V0, Vp = cayley_generators(n)
    ptable = Vm.table
    assert Vp == Derivation(ptable, flow({"x": x + e * y}))
    assert Vm == Derivation(ptable, flow({"y": y + e * x}))
    assert V0 == Derivation(ptable, flow({"x": x + e * x, "y": y - e * y})).scale(-1)


def test_cayley_rejects_bad_input():
    with pytest.raises(ValueError):
        cayley_generators(0)
    with pytest.raises(ValueError):
        cayley_generators(2, "other")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_extended_generators(n):
    eq = extended_generators(n)
    assert structure_check(negated(eq), COMM_TABLE) == []
    printed = extended_generators(n, "printed")
    assert structure_check(negated(printed), COMM_TABLE) != []


def test_extended_generators_kill_metric_trace():
    eq = extended_generators(2)
    table = eq[0].table
    F = parse("t^2*a5 - x^2*a5 + 2*t*a4 - 2*x*a3 - a0 + a2", table)
    assert all(g(F).is_zero() for g in eq)
    assert not all(g(F).is_zero() for g in extended_generators(2, "printed"))


def test_derivation_basics():
    table = VarTable.build((), ("a", "b"))
    a, b = Poly.var(table, "a"), Poly.var(table, "b")
    D = Derivation(table, {"a": b, "b": Poly.zero(table)})
    assert D.coeffs == {"a": b}
    assert D(a * a) == a * b * 2
    assert str(Derivation(table)) == "0"
    assert D.is_degree_preserving()
    assert not Derivation(table, {"a": a * a}).is_degree_preserving()
    with pytest.raises(KeyError):
        Derivation(table, {"zz": a})
