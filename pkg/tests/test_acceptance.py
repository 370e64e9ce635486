"""Acceptance criteria 1-11; each test records a PASS/FAIL line shown after the run."""

import time
from fractions import Fraction

import pytest

from brauer_cgc import soncgc as so
from brauer_cgc.brauerdiag import all_diagrams, enumerate_cosets, relation_count, relation_suite
from brauer_cgc.exactnum import RatFunc, SignedSquare, ratfunc_interpolate
from brauer_cgc.induction import (
    ComponentConfig, derive_coupled, norm_matrix, observed_multiplicities, uncoupled_basis,
    verify_intertwining,
)
from brauer_cgc.symcomb import newell_littlewood_product

n_ = RatFunc.n()
F = Fraction
S = SignedSquare
G = so.GelfandLabel

COUPLINGS = [([1], [1]), ([2], [1]), ([1, 1], [1]), ([3], [1]), ([1, 1, 1], [1]), ([2, 1], [1]),
             ([2], [2]), ([2], [1, 1]), ([1, 1], [1, 1])]


@pytest.fixture(scope="module")
def tables():
    out = {}
    for t in so.TABLES:
        start = time.perf_counter()
        fx = so.load_fixture(t)
        tab = so.anchor_signs(so.reconstruct_table(t, samples=12, workers=1), fx)
        out[t] = (fx, tab, time.perf_counter() - start)
    return out


def test_criterion_01_algebra_relations(acceptance):
    start = time.perf_counter()
    failures = {f: relation_suite(f) for f in (2, 3, 4, 5)}
    seconds = time.perf_counter() - start
    total = sum(relation_count(f) for f in failures)
    ok = not any(failures.values()) and seconds < 10
    acceptance(1, "defining relations and star, f <= 5, symbolic n", ok,
               f"{total} identities, {seconds:.1f}s")
    assert ok, failures


def test_criterion_02_dimension_counts(acceptance):
    diagrams = [len(all_diagrams(f)) for f in (2, 3, 4)]
    cosets = [len({r.diagram for r in enumerate_cosets(*b)}) for b in ((1, 1), (2, 1), (2, 2))]
    ok = diagrams == [3, 15, 105] and cosets == [3, 6, 21]
    acceptance(2, "diagram and coset counts", ok, f"diagrams {diagrams}, cosets {cosets}")
    assert ok


def test_criterion_03_norm_matrix(acceptance):
    ok = True
    for labels, delta in (((3, 3), 1), ((3, 4), 0)):
        cfg = ComponentConfig.explicit(1, 1, labels)
        grams = {n: norm_matrix(uncoupled_basis([1], [1], cfg, n)).entries for n in range(5, 10)}
        for n, g in grams.items():
            ok &= g == [[1, delta, delta], [delta, 1, delta], [delta, delta, n * delta]]
        fitted = [[ratfunc_interpolate([(n, grams[n][i][j]) for n in grams], 1) for j in range(3)] for i in range(3)]
        d = RatFunc.const(delta)
        ok &= fitted == [[1, d, d], [d, 1, d], [d, d, n_ * d]]
    acceptance(3, "norm matrix of [1]x[1] for equal and distinct labels, n = 5..9", ok)
    assert ok


def test_criterion_04_example_normalizations(acceptance):
    ns = range(5, 12)
    ok = True
    got = {}
    for labels, delta in (((3, 3), 1), ((3, 4), 0)):
        cfg = ComponentConfig.explicit(1, 1, labels)
        per_n = {n: {str(c.lam): c for c in derive_coupled([1], [1], cfg, n)} for n in ns}
        a1 = [per_n[n]["[2]"].idc()[(0, 0, 0)] for n in ns]
        ok &= all(s.sign == 1 for s in a1)
        got[("a1", delta)] = ratfunc_interpolate([(n, s.square) for n, s in zip(ns, a1)], 2)
        ok &= got[("a1", delta)] == n_ / (2 * (n_ + delta * (n_ - 2)))
        if delta == 0:
            b1 = [per_n[n]["[1,1]"].idc()[(0, 0, 0)] for n in ns]
            ok &= all(s.sign == 1 for s in b1)
            ok &= ratfunc_interpolate([(n, s.square) for n, s in zip(ns, b1)], 2) == F(1, 2)
        else:
            c3 = [per_n[n]["[0]"].idc()[(2, 0, 0)] for n in ns]
            ok &= all(s.sign == 1 for s in c3)
            ok &= ratfunc_interpolate([(n, s.square) for n, s in zip(ns, c3)], 2) == 1 / n_
    acceptance(4, "a1^2, b1^2, c3^2 of [1]x[1] as functions of n, positive phases", ok)
    assert ok


def test_criterion_05_tables(acceptance, tables):
    problems = []
    for t, (fx, tab, seconds) in tables.items():
        diffs, _ = so.compare_with_fixture(tab, fx)
        problems += [f"T{t} {d}" for d in diffs]
        if t <= 5:
            problems += [f"T{t} sign conflict {c}" for c in tab.sign_conflicts]
            problems += [f"T{t} sign diff {d}" for d in diffs if d.kind == "sign"]
        if seconds > 300:
            problems.append(f"T{t} took {seconds:.0f}s")
        if min(len(v) for v in tab.samples.values()) < 8:
            problems.append(f"T{t} sampled fewer than 8 ranks")
    total = sum(s for _, _, s in tables.values())
    acceptance(5, "Tables 1-9 reconstructed and matched", not problems,
               f"{len(problems)} problems, {total:.0f}s" if problems else f"{total:.0f}s")
    assert not problems, problems


def test_criterion_06_point_values(acceptance):
    a = G(4, ([1], [0]), 0)
    p, z, m = (G(4, ([1], [1]), w) for w in (1, 0, -1))
    checks = [
        (so.cgc([1], G(3, ([1],), 1), [1], G(3, ([1],), 0), G(3, ([2],), 1)), S(1, F(1, 2))),
        (so.cgc([1], a, [1], a, G(4, ([2], [0]), 0)), S(1, F(3, 4))),
        (so.cgc([1], p, [1], m, G(4, ([2], [0]), 0)), S(1, F(1, 12))),
        (so.cgc([1], z, [1], z, G(4, ([2], [0]), 0)), S(-1, F(1, 12))),
        (so.cgc([1], a, [1], a, G(4, ([0], [0]), 0)), S(1, F(1, 4))),
        (so.cgc([1], p, [1], m, G(4, ([0], [0]), 0)), S(-1, F(1, 4))),
        (so.cgc([1], z, [1], z, G(4, ([2], [2]), 0)), S(1, F(2, 3))),
        (so.cgc([1], p, [1], m, G(4, ([2], [2]), 0)), S(1, F(1, 6))),
        (so.cgc([1], G(3, ([1],), 0), [1], G(3, ([1],), 0), G(3, ([0],), 0)), S(1, F(1, 3))),
        (so.cgc([1], G(3, ([1],), 1), [1], G(3, ([1],), -1), G(3, ([0],), 0)), S(-1, F(1, 3))),
    ]
    for n in range(5, 10):
        checks.append((so.extract_isf(so.IsfKey.of([1], [1], [2], [0], [0], [0]), n), S(1, F(n - 1, n))))
        checks.append((so.extract_isf(so.IsfKey.of([1], [1], [2], [1], [1], [0]), n), S(-1, F(1, n))))
    bad = [f"{got} != {want}" for got, want in checks if got != want]
    acceptance(6, "SO(3), SO(4) point values and the [1]x[1] pair at n = 5..9", not bad,
               f"{len(checks)} values")
    assert not bad, bad


def test_criterion_07_orthogonality(acceptance, tables):
    bad = {t: so.orthogonality_failures(tab) for t, (_, tab, _) in tables.items()}
    bad = {t: v for t, v in bad.items() if v}
    acceptance(7, "rows and columns of every reconstructed table orthonormal", not bad)
    assert not bad, bad


def test_criterion_08_component_independence(acceptance):
    mismatches, count = [], 0
    for t in so.TABLES:
        fx = so.load_fixture(t)
        for r in fx.rows:
            a, b = so.transported_row(fx.l1, fx.l2, r.lam, r.nu, 10)
            for key in set(a) | set(b):
                count += 1
                if a.get(key, S.zero()) != b.get(key, S.zero()):
                    mismatches.append(f"T{t} {r.lam}/{r.nu} {key}")
    acceptance(8, "two Gel'fand states give identical entries", not mismatches, f"{count} entries at n=10")
    assert not mismatches, mismatches


def test_criterion_09_multiplicities(acceptance):
    bad = []
    for l1, l2 in COUPLINGS:
        expected = newell_littlewood_product(l1, l2)
        for n in (7, 9, 11):
            if observed_multiplicities(l1, l2, n) != expected:
                bad.append(f"{l1}x{l2} n={n}")
    acceptance(9, "isotypic multiplicities equal Newell-Littlewood, n = 7, 9, 11", not bad)
    assert not bad, bad


def test_criterion_10_intertwining(acceptance):
    bad = []
    for l1, l2 in COUPLINGS:
        cfg = ComponentConfig.generic(sum(l1), sum(l2), 9)
        rep = verify_intertwining(derive_coupled(l1, l2, cfg, 9))
        if not rep.ok:
            bad.append(f"{l1}x{l2}: {rep.violations[:3]}")
    acceptance(10, "coupled bases intertwine the generators at n = 9", not bad)
    assert not bad, bad


def test_criterion_11_type_one(acceptance, tables):
    bad, count = [], 0
    for t, (_, tab, _) in tables.items():
        rep = so.typeone_check(tab)
        count += len(rep.type_one)
        bad += [f"T{t} {x}" for x in rep.not_constant + rep.oracle_mismatch + rep.sign_conflicts]
    ok = not bad and count > 0
    acceptance(11, "contraction-free entries are n-free and match the induction oracle", ok,
               f"{count} entries")
    assert ok, bad
