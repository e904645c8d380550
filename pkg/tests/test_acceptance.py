"""Acceptance criteria, one test each.

Each check records a PASS/FAIL line; the lines are printed in the pytest
terminal summary and when this file is run as a script.
"""
from __future__ import annotations

import time

import pytest

from conftest import golden_lines
from killinv.closed_form import closed_form_generators, diff_printed
from killinv.derivations import (CAYLEY_TABLE, COMM_TABLE, cayley_generators,
                                 isometry_generators, negated, structure_check)
from killinv.group_action import infinitesimal_action, param_transform, reduce_hyperbolic, \
    transform_table, verify_invariance
from killinv.invariant_solver import (family_generators, family_weights, fundamental_search,
                                      generic_orbit_dimension, in_algebra_span, kernel_at_degree)
from killinv.killing_space import (ParamScheme, dtt_dimension, general_element, killing_basis,
                                   span_rank)
from killinv.ratpoly import Poly, VarTable, parse, render

RESULTS: list = []


def _record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS.append(line)
    print(line)
    return ok


def check_dimensions():
    start = time.perf_counter()
    ok = all(span_rank(killing_basis(n)) == (n + 1) * (n + 2) // 2 == dtt_dimension(2, n)
             for n in range(1, 9))
    elapsed = time.perf_counter() - start
    return _record(1, "dimension counts n = 1..8", ok and elapsed < 10, f"{elapsed:.2f}s")


def check_goldens():
    ok = True
    for name, n in (("mkt_n2.txt", 2), ("k4_n4.txt", 4), ("k5_n5.txt", 5)):
        K, _ = general_element(n)
        want = []
        for ln in golden_lines(name):
            head, body = ln.split(" = ", 1)
            want.append(f"{head} = {render(parse(body, K.table))}")
        ok &= K.lines() == want
    return _record(2, "general-element goldens n = 2, 4, 5", ok)


def check_vecM():
    V = isometry_generators(2)
    table = V[0].table
    want = {"V1": {}, "V2": {}, "V3": {}}
    for ln in golden_lines("vecM_n2.txt"):
        g, v, c = [s.strip() for s in ln.split(":")]
        want[g][v] = parse(c, table)
    ok = all(g.coeffs == want[g.name] for g in V)
    ok &= structure_check(negated(V), COMM_TABLE) == []
    return _record(3, "MST generators n = 2 and their commutators", ok)


def check_commutators():
    start = time.perf_counter()
    ok = all(structure_check(negated(isometry_generators(n)), COMM_TABLE) == []
             for n in range(1, 7))
    ok &= all(structure_check(cayley_generators(n), CAYLEY_TABLE) == [] for n in range(1, 9))
    elapsed = time.perf_counter() - start
    return _record(4, "commutator suites", ok and elapsed < 60, f"{elapsed:.2f}s")


def check_itkt_n2():
    gens = family_generators("itkt", 2)
    rep = fundamental_search(gens, 4, seed=0, weights=family_weights("itkt", 2))
    table = gens[0].table
    deltas = ["a5", "(a0 - a2)*a5 - a3^2 + a4^2",
              "(a3^2 + a4^2 - a5*(a0 + a2))^2 - 4*(a5*a1 - a3*a4)^2"]
    ok = all(in_algebra_span(parse(d, table), rep.fundamentals) for d in deltas)
    ok &= rep.jacobian_rank == 3 and rep.s == 3 and rep.d - rep.s == 3
    return _record(5, "ITKT n = 2 invariant recovery", ok,
                   f"jacobian rank {rep.jacobian_rank}, orbit dim {rep.s}")


def check_cit_n2():
    gens = family_generators("cit", 2)
    basis = kernel_at_degree(gens, 2)
    s, _ = generic_orbit_dimension(gens, seed=0)
    ok = len(basis) == 1 and basis[0] == parse("a0*a2 - a1^2", basis[0].table) and s == 2
    return _record(6, "CIT n = 2 invariant recovery", ok)


def check_corollary():
    ok = True
    for n in range(1, 6):
        scheme = ParamScheme.build(n)
        F = Poly.var(VarTable.build((), scheme.labels), scheme.invariant_label())
        ok &= all(g(F).is_zero() for g in isometry_generators(n))
        ok &= verify_invariance(F, "itkt", n, trials=100, seed=0).passed
    return _record(7, "corner parameter invariant n = 1..5", ok)


def check_finite_infinitesimal():
    law = param_transform(2)
    table = transform_table(2)
    ok = True
    for ln in golden_lines("transf_n2.txt"):
        label, text = ln.split(" = ", 1)
        ok &= law[label] == reduce_hyperbolic(parse(text, table))
    for n in (1, 2, 3):
        V1, V2, _ = isometry_generators(n)
        for direction, V in (("a", V1), ("b", V2)):
            first = infinitesimal_action(n, direction)
            # the forward action moves parameters along -V
            ok &= all(first[l] == -V.coeff(l) for l in V.table.names)
    return _record(8, "finite and infinitesimal actions agree", ok)


def check_closed_forms():
    ok = diff_printed(2) == []
    ok &= all(e["explanation"] for n in (4, 5) for e in diff_printed(n))
    counts = []
    for n in range(2, 9):
        _, entries = closed_form_generators(n)
        counts.append(len(entries))
        ok &= all(e["explanation"] for e in entries)
    ok &= counts[0] == 0
    return _record(9, "closed-form cross-check n = 2..8", ok,
                   "diff sizes " + ",".join(map(str, counts)))


def check_soundness():
    total = 0
    ok = True
    for family in ("itkt", "cit"):
        for n in range(1, 5):
            gens = family_generators(family, n)
            for deg in range(1, 5):
                for F in kernel_at_degree(gens, deg, family_weights(family, n)):
                    total += 1
                    ok &= all(g(F).is_zero() for g in gens)
    return _record(10, "solver soundness", ok, f"{total} kernel polynomials")


CHECKS = [check_dimensions, check_goldens, check_vecM, check_commutators, check_itkt_n2,
          check_cit_n2, check_corollary, check_finite_infinitesimal, check_closed_forms,
          check_soundness]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CHECKS]
    print(f"{sum(results)}/{len(results)} criteria passed")
