from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from brauer_cgc import tensorspace as ts
from brauer_cgc.brauerdiag import all_diagrams, compose_diagrams
from brauer_cgc.exactnum import RatFunc, SignedSquare, ratfunc_interpolate
from brauer_cgc.induction import (
    ComponentConfig, InducedModule, check_idc_case, derive_coupled,
    load_idc_cases, norm_matrix, observed_multiplicities, tau_chains, uncoupled_basis,
    verify_intertwining,
)
from brauer_cgc.symcomb import newell_littlewood_product, parse_partition, partitions_of

n_ = RatFunc.n()
EQUAL = ComponentConfig.explicit(1, 1, (3, 3))     # i1 = i2
DISTINCT = ComponentConfig.explicit(1, 1, (3, 4))  # i1 != i2
P = parse_partition


def _gram(cfg, n):
    return norm_matrix(uncoupled_basis([1], [1], cfg, n)).entries


@pytest.mark.parametrize("n", range(5, 10))
def test_norm_matrix_equal_and_distinct_labels(n):
    assert _gram(EQUAL, n) == [[1, 1, 1], [1, 1, 1], [1, 1, n]]
    assert _gram(DISTINCT, n) == [[1, 0, 0], [0, 1, 0], [0, 0, 0]]


def test_norm_matrix_as_rational_functions():
    for cfg, delta in ((EQUAL, 1), (DISTINCT, 0)):
        samples = {n: _gram(cfg, n) for n in range(5, 10)}
        fitted = [[ratfunc_interpolate([(n, samples[n][i][j]) for n in samples], 1) for j in range(3)]
                  for i in range(3)]
        d = RatFunc.const(delta)
        assert fitted == [[1, d, d], [d, 1, d], [d, d, n_ * d]]


def _coupled(cfg, n):
    return {str(cv.lam): cv for cv in derive_coupled([1], [1], cfg, n)}


def test_example_normalizations_as_rational_functions():
    ns = list(range(5, 12))
    for cfg, delta in ((EQUAL, 1), (DISTINCT, 0)):
        a1 = ratfunc_interpolate([(n, _coupled(cfg, n)["[2]"].idc()[(0, 0, 0)].square) for n in ns], 2)
        assert a1 == n_ / (2 * (n_ + delta * (n_ - 2)))
    b1 = ratfunc_interpolate([(n, _coupled(DISTINCT, n)["[1,1]"].idc()[(0, 0, 0)].square) for n in ns], 2)
    c3 = ratfunc_interpolate([(n, _coupled(EQUAL, n)["[0]"].idc()[(2, 0, 0)].square) for n in ns], 2)
    assert b1 == Fraction(1, 2)
    assert c3 == 1 / n_


@pytest.mark.parametrize("n", [5, 6, 9])
def test_example_vectors_and_phases(n):
    vecs = _coupled(EQUAL, n)
    assert vecs["[2]"].coefficients == {(0, 0, 0): 1, (1, 0, 0): 1, (2, 0, 0): Fraction(-2, n)}
    assert vecs["[1,1]"].coefficients == {(0, 0, 0): 1, (1, 0, 0): -1}
    assert vecs["[0]"].coefficients == {(2, 0, 0): 1}
    # the first coefficient of every vector is positive
    for cv in vecs.values():
        if not cv.null:
            first = min(cv.idc().items(), key=lambda kv: (kv[0][1], kv[0][2], kv[0][0]))
            assert first[1].sign == 1
    assert vecs["[1,1]"].null and not _coupled(DISTINCT, n)["[1,1]"].null
    assert _coupled(DISTINCT, n)["[0]"].null


def test_coupled_vectors_are_orthogonal_under_the_norm_matrix():
    for cfg in (EQUAL, DISTINCT, ComponentConfig.generic(2, 1, 7)):
        l1 = [1] if cfg.f1 == 1 else [2]
        vecs = derive_coupled(l1, [1], cfg, 7)
        for i, u in enumerate(vecs):
            for v in vecs[i + 1:]:
                assert ts.inner(u.realized, v.realized) == 0


@pytest.mark.parametrize("case", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("n", [7, 9, 12])
def test_listed_vectors_match(case, n):
    checks = check_idc_case(case, n)
    assert [c.status for c in checks] == ["match"] * len(checks), checks


@pytest.mark.parametrize("case", [6, 7, 8, 9])
@pytest.mark.parametrize("n", [7, 10])
def test_listed_vectors_with_roots_match_or_are_flagged(case, n):
    expect = {v["label"]: v.get("expect", "match") for v in load_idc_cases()[case]["vectors"]}
    got = {c.label: c.status for c in check_idc_case(case, n)}
    assert got == expect


@pytest.mark.parametrize("case", [3, 4, 6, 7, 8, 9])
def test_printed_forms_of_corrected_entries_fail(case):
    vectors = load_idc_cases()[case]["vectors"]
    corrected = {v["label"] for v in vectors if "printed" in v}
    expect = {v["label"]: v.get("expect", "match") for v in vectors}
    assert corrected
    for c in check_idc_case(case, 9, printed=True):
        if c.label in corrected:
            assert c.status == "mismatch", c
        else:
            assert c.status == expect[c.label]


def test_flagged_entries_carry_a_note():
    for case in range(1, 10):
        for v in load_idc_cases()[case]["vectors"]:
            if "printed" in v or "expect" in v:
                assert v.get("note"), (case, v["label"])


def test_mixed_symmetry_blocks_kill_contracted_cosets():
    # a transposition fixing the coset acts by +1 on [2] and -1 on [1^2]
    mod = InducedModule([2], [1, 1], 9)
    dead = [k[0] + 1 for k in mod.keys if not mod.basis_vector(k)]
    assert dead == [19, 20, 21]
    assert P([0]) not in observed_multiplicities([2], [1, 1], 9)


def test_tau_chains_order():
    assert tau_chains([1], 2) == [(P([0]),)]
    assert tau_chains([1], 3) == [(P([0]), P([1])), (P([2]), P([1])), (P([1, 1]), P([1]))]
    assert list(dict.fromkeys(c[0] for c in tau_chains([2], 4))) == [P([1]), P([3]), P([2, 1])]


@pytest.mark.parametrize("f", [2, 3, 4])
def test_chain_counts_give_algebra_dimension(f):
    # sum of squared irreducible dimensions is (2f - 1)!!
    total = sum(len(tau_chains(lam, f)) ** 2
                for k in range(f % 2, f + 1, 2) for lam in partitions_of(k))
    assert total == len(all_diagrams(f))


@pytest.mark.parametrize("l1,l2", [([1], [1]), ([2], [1]), ([1, 1], [1]), ([2], [2])])
def test_eigenspaces_have_the_stable_multiplicities(l1, l2):
    for n in (7, 9):
        got = observed_multiplicities(l1, l2, n)
        assert got == newell_littlewood_product(l1, l2)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(all_diagrams(3)), st.sampled_from(all_diagrams(3)), st.data())
def test_module_action_is_a_representation(a, b, data):
    n = 7
    mod = InducedModule([2], [1], n)
    key = data.draw(st.sampled_from(mod.keys))
    v = mod.basis_vector(key)
    d, loops = compose_diagrams(a, b)
    lhs = mod.act(d, v)
    lhs = {k: c * n ** loops for k, c in lhs.items()}
    assert lhs == mod.act(a, mod.act(b, v))


def test_induced_module_dimension():
    for (l1, l2), dim in {((1,), (1,)): 3, ((2,), (1,)): 6, ((2, 1), (1,)): 20, ((2,), (2,)): 21}.items():
        mod = InducedModule(list(l1), list(l2), 9)
        assert len(mod.keys) == dim
    with pytest.raises(ValueError):
        InducedModule([2], [2], 2)


@pytest.mark.parametrize("l1,l2", [([2], [1]), ([1, 1], [1]), ([2], [1, 1])])
def test_intertwining_and_completeness(l1, l2):
    f1, f2 = sum(l1), sum(l2)
    cfg = ComponentConfig.generic(f1, f2, 9)
    vecs = derive_coupled(l1, l2, cfg, 9)
    rep = verify_intertwining(vecs)
    assert rep.ok and rep.max_violation == 0
    f = f1 + f2
    expected = sum(m * len(tau_chains(lam, f)) for lam, m in newell_littlewood_product(l1, l2).items())
    assert len(vecs) == expected
    live = [cv for cv in vecs if not cv.null]
    assert len(live) == norm_matrix(uncoupled_basis(l1, l2, cfg, 9)).rank()


def test_realized_vectors_follow_their_chain():
    vecs = derive_coupled([2], [1], ComponentConfig.generic(2, 1, 8), 8)
    for cv in vecs:
        if cv.null:
            continue
        labels = (cv.lam,) + tuple(cv.tau)
        for m, lab in zip(range(3, 0, -1), labels):
            slots = range(m)
            if m == 1:
                continue
            got = ts.chain_casimir(8, cv.realized, slots)
            assert got == cv.realized.scale(ts.casimir_eigenvalue(lab, 8))


def test_component_config_policies():
    g = ComponentConfig.from_policy("generic", 2, 1, 7)
    assert g == ComponentConfig.generic(2, 1, 7)
    assert ComponentConfig.from_policy("paired", 2, 1, 7) == g
    assert ComponentConfig.from_policy("explicit:3,4", 1, 1, 7) == DISTINCT
    with pytest.raises(ValueError):
        ComponentConfig.from_policy("bogus", 1, 1, 7)
    with pytest.raises(ValueError):
        ComponentConfig.explicit(1, 1, (3, 9)).check(7)


def test_to_json_shape():
    cv = _coupled(EQUAL, 6)["[2]"]
    js = cv.to_json()
    assert js["lambda"] == "[2]" and js["norm"] == "10/3" and not js["null"]
    assert [c["normalized"] for c in js["coefficients"]][0] == str(SignedSquare(1, Fraction(3, 10)))
