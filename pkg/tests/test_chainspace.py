from collections import defaultdict
from itertools import product

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from brauer_cgc import chainspace as cs
from brauer_cgc import tensorspace as ts
from brauer_cgc.symcomb import Partition


def to_full(space: cs.InvariantSpace, v):
    """Write a pairing-basis vector as an ordinary tensor."""
    pairs = ts.metric_pairs(space.m0)
    out = defaultdict(mpq)
    for k, c in v.items():
        links = [(s, -x - 1) for s, x in enumerate(k) if x < 0 and s < -x - 1]
        for choice in product(pairs, repeat=len(links)):
            nk, coeff = list(k), c
            for (a, b), (u, w, e) in zip(links, choice):
                nk[a], nk[b] = u, w
                coeff *= e
            out[tuple(nk)] += coeff
    return cs.clean(out)


def vectors(space, size=5):
    return st.lists(st.tuples(st.sampled_from(space.basis()), st.integers(-3, 3)),
                    min_size=1, max_size=size).map(lambda items: cs.clean({k: mpq(c) for k, c in items}))


SPACE = cs.InvariantSpace(3, 7, 4)
FULL = cs.FullSpace(3, 7)


def test_basis_shape():
    small = cs.InvariantSpace(2, 6, 4)
    # two free slots over labels 6, 5, or one pairing
    assert len(small.basis()) == 4 + 1
    assert (-2, -1) in small.basis()
    with pytest.raises(ValueError):
        cs.InvariantSpace(5, 9, 4)


@settings(max_examples=25, deadline=None)
@given(vectors(SPACE), st.sampled_from([4, 5, 6, 7]), st.sampled_from([None, (0, 1), (1, 2), (0, 2)]))
def test_casimir_agrees_with_full_space(v, m, slots):
    lhs = to_full(SPACE, SPACE.casimir(m, v, slots))
    rhs = FULL.casimir(m, to_full(SPACE, v), slots)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(vectors(SPACE), vectors(SPACE))
def test_inner_product_agrees_with_full_space(u, v):
    assert SPACE.inner(u, v) == FULL.inner(to_full(SPACE, u), to_full(SPACE, v))


@settings(max_examples=25, deadline=None)
@given(vectors(SPACE), st.permutations(range(3)))
def test_permutation_agrees_with_full_space(v, p):
    assert to_full(SPACE, SPACE.permute(tuple(p), v)) == FULL.permute(tuple(p), to_full(SPACE, v))


@settings(max_examples=20, deadline=None)
@given(vectors(cs.InvariantSpace(3, 8, 6)))
def test_embed_keeps_the_tensor(v):
    upper, lower = cs.InvariantSpace(3, 8, 6), cs.InvariantSpace(3, 8, 4)
    assert to_full(lower, upper.embed(v, lower)) == to_full(upper, v)


def test_expand_reads_true_coefficients():
    v = {(7, -3, -2): mpq(2)}
    full = to_full(SPACE, v)
    got = SPACE.expand(v)
    assert got and all(full[k] == c for k, c in got.items())


def test_decompose_and_project():
    v = {(7, 6, 5): mpq(1), (6, 7, 5): mpq(-2), (-2, -1, 6): mpq(1)}
    labels = [Partition(p) for p in [(3,), (2, 1), (1, 1, 1), (1,)]]
    parts = cs.decompose(SPACE, v, 7, labels)
    total = {}
    for lab, comp in parts.items():
        c = ts.casimir_eigenvalue(lab, 7)
        assert SPACE.casimir(7, comp) == {k: x * c for k, x in comp.items()}
        total = cs.lin(1, total, 1, comp)
    assert total == cs.clean(v)
    assert cs.project(SPACE, v, 7, [2, 1], labels) == parts.get(Partition((2, 1)), {})


def test_unitary_space_matches_content_sums():
    space = cs.UnitarySpace(2, 5)
    sym = {(5, 4): mpq(1), (4, 5): mpq(1)}
    anti = {(5, 4): mpq(1), (4, 5): mpq(-1)}
    c_sym = space.eigenvalue([2], 5)
    c_anti = space.eigenvalue([1, 1], 5)
    assert c_sym != c_anti
    assert space.casimir(5, sym) == {k: x * c_sym for k, x in sym.items()}
    assert space.casimir(5, anti) == {k: x * c_anti for k, x in anti.items()}


def test_between():
    assert cs.between([2, 1]) == [Partition(p) for p in [(1,), (1, 1), (2,), (2, 1)]]
    assert cs.between([0]) == [Partition(())]
