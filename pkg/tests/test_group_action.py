import random
from fractions import Fraction

import pytest

from killinv.derivations import isometry_generators
from killinv.forms import general_form
from killinv.group_action import (IsometryElem, UnimodularElem, compose, infinitesimal_action,
                                  isometry_apply, param_transform, random_group_element,
                                  reduce_hyperbolic, sl2_apply, transform_table,
                                  verify_invariance)
from killinv.invariant_solver import family_generators, family_weights, kernel_at_degree
from killinv.killing_space import (ParamScheme, extract_parameters, general_element,
                                   killing_check)
from killinv.ratpoly import Poly, VarTable, parse

DELTA3 = "(a3^2 + a4^2 - a5*(a0 + a2))^2 - 4*(a5*a1 - a3*a4)^2"


def numeric_tensor(n, seed):
    K, scheme = general_element(n)
    rng = random.Random(seed)
    point = {l: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for l in scheme.labels}
    return K.subs(point)


def test_transf_golden(golden):
    law = param_transform(2)
    table = transform_table(2)
    for ln in golden("transf_n2.txt"):
        label, text = ln.split(" = ", 1)
        assert law[label] == reduce_hyperbolic(parse(text, table)), label


def test_transf_spot_terms():
    law = param_transform(2)
    table = transform_table(2)
    assert law["a5"] == Poly.var(table, "a5")
    assert law["a3"] == parse("a3*ch + a4*sh - a5*b", table)


def test_param_transform_identity():
    for n in (1, 2, 3):
        law = param_transform(n)
        ident = {"ch": 1, "sh": 0, "a": 0, "b": 0}
        for label, p in law.items():
            assert p.subs(ident) == Poly.var(p.table, label)


def test_valence_one_rotation_parameter_invariant():
    law = param_transform(1)
    label = ParamScheme.build(1).invariant_label()
    assert law[label] == Poly.var(law[label].table, label)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_infinitesimal_matches_generators(n):
    V1, V2, V3 = isometry_generators(n)
    for direction, V in (("a", V1), ("b", V2), ("sh", V3)):
        first = infinitesimal_action(n, direction)
        for label in V.table.names:
            assert first[label] == -V.coeff(label), (direction, label)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_param_transform_specializes(n):
    law = param_transform(n)
    K, scheme = general_element(n)
    rng = random.Random(n)
    for _ in range(3):
        g = random_group_element(rng)
        point = {l: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for l in scheme.labels}
        out = isometry_apply(g, K.subs(point))
        numeric = {l: p.constant_term() for l, p in extract_parameters(out).items()}
        symbolic = {l: p.evaluate({**point, **g.values()}) for l, p in law.items()}
        assert numeric == symbolic


def test_identity_acts_trivially():
    K = numeric_tensor(3, 0)
    assert isometry_apply(IsometryElem(), K) == K
    Q = general_form(3)
    assert sl2_apply(UnimodularElem(), Q) == Q


@pytest.mark.parametrize("seed", range(5))
def test_isometry_group_law(seed):
    rng = random.Random(seed)
    g1, g2 = random_group_element(rng), random_group_element(rng)
    K = numeric_tensor(2 + seed % 2, seed)
    lhs = isometry_apply(g2, isometry_apply(g1, K))
    assert lhs == isometry_apply(compose(g2, g1), K)
    assert killing_check(lhs)


@pytest.mark.parametrize("seed", range(5))
def test_sl2_group_law(seed):
    rng = random.Random(seed)
    g1 = random_group_element(rng, "unimodular")
    g2 = random_group_element(rng, "unimodular")
    Q = general_form(3)
    assert sl2_apply(g2, sl2_apply(g1, Q)) == sl2_apply(compose(g2, g1), Q)


def test_shear_example():
    Q = general_form(2)
    out = sl2_apply(UnimodularElem(1, 1, 0, 1), Q)
    table = Q.table
    assert out.coefficients == (parse("a0", table), parse("a0 + a1", table),
                                parse("a0 + 2*a1 + a2", table))
    disc = lambda c: c[0] * c[2] - c[1] * c[1]
    assert disc(out.coefficients) == disc(Q.coefficients)


def test_determinant_enforced():
    with pytest.raises(ValueError):
        UnimodularElem(1, 1, 1, 1)
    with pytest.raises(ValueError):
        IsometryElem(lam=0)


def test_random_elements_are_exact_and_deterministic():
    for k in range(1000):
        g = random_group_element(k)
        assert g.ch ** 2 - g.sh ** 2 == 1
        u = random_group_element(k, "unimodular")
        assert u.alpha * u.delta - u.beta * u.gamma == 1
    assert random_group_element(42) == random_group_element(42)
    with pytest.raises(ValueError):
        random_group_element(0, "other")


@pytest.mark.parametrize("text", ["a5", "(a0 - a2)*a5 - a3^2 + a4^2", DELTA3])
def test_deltas_pass(text):
    F = parse(text, VarTable.build((), ParamScheme.build(2).labels))
    v = verify_invariance(F, "itkt", 2, trials=100, seed=7)
    assert v.passed and v.trials == 100 and v.counterexample is None


def test_a1_fails_with_counterexample():
    F = parse("a1", VarTable.build((), ParamScheme.build(2).labels))
    v = verify_invariance(F, "itkt", 2, trials=100, seed=7)
    assert not v.passed
    ce = v.counterexample
    assert ce["value"] != ce["transformed_value"]
    assert set(ce) >= {"element", "point", "value", "transformed_value"}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_corner_parameter_invariant(n):
    scheme = ParamScheme.build(n)
    F = Poly.var(VarTable.build((), scheme.labels), scheme.invariant_label())
    assert verify_invariance(F, "itkt", n, trials=100, seed=0).passed


def test_verify_rejects_foreign_variables():
    F = Poly.var(VarTable.build((), ("zz",)), "zz")
    with pytest.raises(ValueError):
        verify_invariance(F, "itkt", 2, trials=1)
    with pytest.raises(ValueError):
        verify_invariance(F, "itkt", 2, trials=-1)


@pytest.mark.parametrize("family,n,maxdeg", [("itkt", 1, 3), ("itkt", 2, 3), ("itkt", 3, 2),
                                             ("cit", 2, 4), ("cit", 3, 4), ("cit", 4, 3)])
def test_kernel_elements_pass_verification(family, n, maxdeg):
    gens = family_generators(family, n)
    for deg in range(1, maxdeg + 1):
        for F in kernel_at_degree(gens, deg, family_weights(family, n)):
            assert verify_invariance(F, family, n, trials=100, seed=deg).passed
