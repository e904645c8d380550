import pytest

from killinv.closed_form import (DOCUMENTED_PRINTED, PRINTED_INSTANCES, closed_form_generators,
                                 diff_against_mst, diff_printed, instantiate, printed_derivations)
from killinv.derivations import isometry_generators


def test_n2_closed_form_agrees_after_relabeling():
    _, entries = diff_against_mst(2)
    assert entries == []


@pytest.mark.parametrize("n", range(3, 9))
def test_every_diff_entry_is_documented(n):
    _, entries = closed_form_generators(n)
    unexplained = [e for e in entries if not e["explanation"]]
    assert unexplained == []


@pytest.mark.parametrize("n", range(2, 9))
def test_agreeing_terms_are_exact(n):
    # wherever the closed form gives a single coefficient that is not flagged, it equals MST
    cf = instantiate(n)
    mst = isometry_generators(n, legacy=False)
    _, entries = diff_against_mst(n)
    flagged = {(e["generator"], e["term"]) for e in entries}
    checked = 0
    for C, M in zip(cf.generators, mst):
        for v, c in C.coeffs.items():
            if (C.name, v) not in flagged:
                assert c == M.coeff(v)
                checked += 1
    assert checked > 0


def test_closed_form_rejects_small_n():
    with pytest.raises(ValueError):
        instantiate(1)


def test_printed_n2_instance_matches():
    assert diff_printed(2) == []


@pytest.mark.parametrize("n", [4, 5])
def test_printed_instances_documented(n):
    entries = diff_printed(n)
    assert entries, "printed instance is expected to carry misprints"
    assert all(e["explanation"] for e in entries)
    assert {(n, e["generator"], e["term"]) for e in entries} == {
        k for k in DOCUMENTED_PRINTED if k[0] == n}


def test_printed_instances_cover_every_mst_term():
    for n in PRINTED_INSTANCES:
        printed = printed_derivations(n)
        mst = isometry_generators(n)
        for P, M in zip(printed, mst):
            assert set(M.coeffs) <= set(P.coeffs) | {e["term"] for e in diff_printed(n)}


def test_no_printed_instance():
    with pytest.raises(ValueError):
        diff_printed(3)
