import csv
import io
import json
from fractions import Fraction

import pytest

from brauer_cgc import soncgc as so
from brauer_cgc.exactnum import RatFunc, ReconstructionError, SignedSquare
from brauer_cgc.induction import ComponentConfig, derive_coupled
from brauer_cgc.symcomb import Partition

G = so.GelfandLabel
S = SignedSquare
F = Fraction
n_ = RatFunc.n()


def test_so3_point_value():
    for m in (1, -1):
        assert so.cgc([1], G(3, ([1],), m), [1], G(3, ([1],), 0), G(3, ([2],), m)) == S(1, F(1, 2))


def test_so4_point_values():
    L = G(4, ([2], [0]), 0)
    a = G(4, ([1], [0]), 0)
    p, z, m = G(4, ([1], [1]), 1), G(4, ([1], [1]), 0), G(4, ([1], [1]), -1)
    assert so.cgc([1], a, [1], a, L) == S(1, F(3, 4))
    assert so.cgc([1], p, [1], m, L) == S(1, F(1, 12))
    assert so.cgc([1], m, [1], p, L) == S(1, F(1, 12))
    assert so.cgc([1], z, [1], z, L) == S(-1, F(1, 12))
    L0 = G(4, ([0], [0]), 0)
    assert so.cgc([1], a, [1], a, L0) == S(1, F(1, 4))
    assert so.cgc([1], z, [1], z, L0) == S(1, F(1, 4))
    assert so.cgc([1], p, [1], m, L0) == S(-1, F(1, 4))
    L2 = G(4, ([2], [2]), 0)
    assert so.cgc([1], z, [1], z, L2) == S(1, F(2, 3))
    assert so.cgc([1], p, [1], m, L2) == S(1, F(1, 6))


def test_so3_scalar_coupling():
    L = G(3, ([0],), 0)
    assert so.cgc([1], G(3, ([1],), 0), [1], G(3, ([1],), 0), L) == S(1, F(1, 3))
    assert so.cgc([1], G(3, ([1],), 1), [1], G(3, ([1],), -1), L) == S(-1, F(1, 3))


@pytest.mark.parametrize("n", range(5, 10))
def test_vector_times_vector_isf(n):
    assert so.extract_isf(so.IsfKey.of([1], [1], [2], [0], [0], [0]), n) == S(1, F(n - 1, n))
    assert so.extract_isf(so.IsfKey.of([1], [1], [2], [1], [1], [0]), n) == S(-1, F(1, n))


def test_isf_does_not_depend_on_the_gelfand_state():
    key = so.IsfKey.of([2], [1], [2, 1], [1], [1], [1])
    assert so.extract_isf(key, 9, delay=0) == so.extract_isf(key, 9, delay=2)


def test_gelfand_labels():
    lab = G(5, ([2], [1], [1]), -1)
    assert lab.level(2) == Partition((1,))
    assert G.from_weyl_tableau(5, lab.weyl_tableau()) == lab
    with pytest.raises(ValueError):
        G(5, ([1], [2], [1]), 0)
    with pytest.raises(so.ModificationRuleError):
        G(4, ([1, 1, 1], [1], ), 0)


def test_modification_rule_is_reported():
    with pytest.raises(so.ModificationRuleError):
        so.extract_isf(so.IsfKey.of([1, 1], [1], [1, 1, 1], [1], [0], [1, 1]), 5)


def test_minimal_chain():
    assert so.minimal_chain([2, 1], 9) == [Partition((2, 1)), Partition((1,)), Partition(())]
    assert so.minimal_chain([1], 9, delay=1) == [Partition((1,)), Partition((1,)), Partition(())]


def test_parse_entry_and_coupling():
    assert so.parse_entry("-sqrt((n-1)/n)") == S(-1, (n_ - 1) / n_)
    assert so.parse_entry("-1/2") == S(-1, F(1, 4))
    assert so.parse_entry("0") == S.zero()
    assert so.parse_coupling("[1^2]x[1]") == (Partition((1, 1)), Partition((1,)))
    assert so.table_for([2], [2]) in so.TABLES


def test_reconstruct_entry():
    samples = [(n, S(-1, F(n - 1, n))) for n in range(5, 15)]
    assert so.reconstruct_entry(samples) == S(-1, (n_ - 1) / n_)
    flipped = samples[:5] + [(n, -s) for n, s in samples[5:]]
    with pytest.raises(ReconstructionError):
        so.reconstruct_entry(flipped)
    assert so.reconstruct_entry([(n, S.zero()) for n in range(5, 9)]) == S.zero()


def _printed(table):
    fx = so.load_fixture(table)
    tab = so.IsfTable(fx.l1, fx.l2, fx.columns, [(r.lam, r.nu) for r in fx.rows],
                      [[so.parse_entry(e) for e in r.entries] for r in fx.rows], fx.n_min, table)
    return fx, so.orthogonality_failures(tab)


@pytest.mark.parametrize("table", [1, 2, 3, 4, 5, 7])
def test_printed_tables_are_orthogonal(table):
    assert _printed(table)[1] == []


@pytest.mark.parametrize("table", [6, 8, 9])
def test_printed_orthogonality_breaks_only_at_flagged_rows(table):
    fx, failures = _printed(table)
    assert failures
    flagged = {i for i, r in enumerate(fx.rows) if r.unreliable or not r.normative}
    for msg in failures:
        if ": rows " in msg:
            a, b = (int(x) for x in msg.split(": rows ")[1].split()[0].split(","))
            assert {a, b} & flagged, msg


@pytest.fixture(scope="module")
def table1():
    tab = so.reconstruct_table(1, workers=1)
    return so.anchor_signs(tab, so.load_fixture(1))


def test_table1_reconstruction(table1):
    diffs, skipped = so.compare_with_fixture(table1, so.load_fixture(1))
    assert diffs == [] and skipped == [] and table1.sign_conflicts == []
    assert so.orthogonality_failures(table1) == []
    assert so.typeone_check(table1).ok


def test_emitters(table1):
    js = so.to_json(table1)
    assert json.loads(json.dumps(js)) == js
    rows = list(csv.reader(io.StringIO(so.to_csv(table1))))
    assert len(rows) == 1 + len(table1.rows)
    tex = so.to_latex(table1)
    assert "\\sqrt{\\frac{1}{n}}" in tex and tex.count("\\\\\n") == 1 + len(table1.rows)


def test_sign_flip_is_diagnosed(table1):
    fx = so.load_fixture(1)
    entries = [list(r) for r in table1.entries]
    i, j = next((i, j) for i, r in enumerate(entries) for j, e in enumerate(r)
                if e.sign and fx.sign_checked(i, j) and j != next(k for k, x in enumerate(r) if x.sign))
    entries[i][j] = -entries[i][j]
    bad = so.IsfTable(table1.l1, table1.l2, table1.columns, table1.rows, entries, table1.n_min, 1)
    anchored = so.anchor_signs(bad, fx)
    diffs, _ = so.compare_with_fixture(anchored, fx)
    assert diffs or anchored.sign_conflicts


@pytest.mark.parametrize("table", [1, 2])
def test_transported_rows_agree(table):
    fx = so.load_fixture(table)
    for r in fx.rows:
        a, b = so.transported_row(fx.l1, fx.l2, r.lam, r.nu, 9)
        for key in set(a) | set(b):
            assert a.get(key, S.zero()) == b.get(key, S.zero())


def test_type_one_classification():
    assert so.is_type_one([2], [1], [3], [2], [2], [0])
    assert not so.is_type_one([2], [1], [1], [1], [1], [0])


def test_assimilate_coupled_vector():
    cv = next(c for c in derive_coupled([1], [1], ComponentConfig.explicit(1, 1, (4, 4)), 4) if str(c.lam) == "[0]")
    parts = so.assimilate(cv)
    assert sum(p.weight for p in parts) == 1
    assert {p.label.chain[0] for p in parts} == {Partition(())}
