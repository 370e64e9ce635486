"""SO(n) coupled states, CGCs and SO(n) > SO(n-1) isoscalar factors.

A coupled state |l1 x l2; lam, chain> is carved out of a seed tensor by
commuting projections: symmetric-group matrix units fix the copy of l1 and
l2 on the two slot groups, group Casimirs make each group an SO(n) irrep,
the total Casimir selects lam, and the chain Casimirs select the Gel'fand
labels below it. The projections only need the chain down to a level m0
where the label is [0]; from there on the state is SO(m0)-invariant, so it
can live in :class:`~brauer_cgc.chainspace.InvariantSpace`.

The isoscalar factor for columns (nu1, nu2) is the length of the component
of the normalized state that lies in [nu1] x [nu2] of SO(n-1), with sign
given by the leading ordinary-tensor coefficients of state and component.
"""

from __future__ import annotations

import csv
import io
import json
import os
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product

from gmpy2 import mpq

from . import chainspace as cs
from . import tensorspace as ts
from .exactnum import (
    RatFunc,
    ReconstructionError,
    SignedSquare,
    parse_ratfunc,
    ratfunc_interpolate,
    signed_square_of,
    sqrt_sum_is_zero,
)
from .symcomb import Partition, matrix_unit, newell_littlewood_product, parse_partition, partitions_of


class ModificationRuleError(ValueError):
    """A label has more rows than SO(m) allows at some level m."""


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _check_rows(lab: Partition, m: int, what: str = "label"):
    if len(lab) > m // 2:
        raise ModificationRuleError(f"{what} {lab.compact()} has {len(lab)} rows at level {m}; needs a modification rule")


# ---------------------------------------------------------------------------
# coupled states


def minimal_chain(nu, n: int, delay: int = 0) -> list[Partition]:
    """Labels at levels n-1, n-2, ... ending with [0] at the invariant level.

    ``nu`` is kept for ``delay`` extra levels before rows are dropped one at a
    time, so different delays give different Gel'fand states with equal ISFs.
    """
    nu = parse_partition(nu)
    out = [nu] * (delay + 1)
    for j in range(1, len(nu) + 1):
        out.append(Partition(nu[j:]))
    return out


@dataclass
class CouplingSpec:
    l1: Partition
    l2: Partition
    lam: Partition
    chain: list  # labels at levels n-1, n-2, ..., last one is [0]
    n: int
    copy1: int = 0
    copy2: int = 0

    @property
    def f1(self):
        return self.l1.weight

    @property
    def f2(self):
        return self.l2.weight

    @property
    def m0(self):
        return self.n - len(self.chain)

    def check_rows(self):
        for lab in (self.l1, self.l2, self.lam):
            _check_rows(lab, self.n)
        for i, lab in enumerate(self.chain):
            _check_rows(lab, self.n - 1 - i)


def _block_perm(p, offset, f):
    out = list(range(f))
    for j, x in enumerate(p):
        out[offset + j] = offset + x
    return tuple(out)


def _apply_group_element(space, v, elem: dict, offset: int):
    out = {}
    for p, c in elem.items():
        if not c:
            continue
        w = space.permute(_block_perm(p, offset, space.f), v)
        out = cs.lin(1, out, mpq(c.numerator, c.denominator), w)
    return out


def _traceless_candidates(f: int) -> list[Partition]:
    return [p for k in range(f % 2, f + 1, 2) for p in partitions_of(k)]


def _random_vector(keys, rng: random.Random) -> dict:
    return {k: mpq(rng.randint(1, 997), rng.randint(1, 97)) for k in keys}


def _seed(space, spec: CouplingSpec, rng: random.Random) -> dict:
    if isinstance(space, cs.InvariantSpace):
        keys = space.basis()
    else:
        window = list(range(spec.n, spec.m0 - max(1, space.f // 2), -1))
        keys = space.seed_keys(window)
    return _random_vector(keys, rng)


def _fix_groups(space, v, spec: CouplingSpec):
    f1, f = spec.f1, spec.f1 + spec.f2
    for lab, off, copy in ((spec.l1, 0, spec.copy1), (spec.l2, f1, spec.copy2)):
        if lab.weight >= 2:
            v = _apply_group_element(space, v, matrix_unit(lab, copy, copy).rational_terms(), off)
    for lab, slots in ((spec.l1, range(0, f1)), (spec.l2, range(f1, f))):
        if lab.weight >= 2:
            v = cs.project(space, v, spec.n, lab, _valid(_traceless_candidates(lab.weight), spec.n), tuple(slots))
    return v


def _valid(labels, m: int) -> list[Partition]:
    return [p for p in labels if len(p) <= m // 2]


def _valid_between(lab: Partition, m: int) -> list[Partition]:
    return _valid(cs.between(lab), m)


def _clash(labels, m: int, target=None):
    seen = {}
    for p in labels:
        c = ts.casimir_eigenvalue(p, m)
        if c in seen and (target is None or target in (p, seen[c])):
            return f"{seen[c].compact()} and {p.compact()} at level {m}"
        seen.setdefault(c, p)
    return None


def spectrum_clash(spec: "CouplingSpec") -> str | None:
    """Describe the first pair of labels a projection could not separate."""
    n = spec.n
    checks = [(_valid(_traceless_candidates(l.weight), n), n, l) for l in (spec.l1, spec.l2) if l.weight >= 2]
    checks.append((_valid(newell_littlewood_product(spec.l1, spec.l2), n), n, spec.lam))
    prev = spec.lam
    for i, lab in enumerate(spec.chain):
        checks.append((_valid_between(prev, n - 1 - i), n - 1 - i, lab))
        prev = lab
    checks += [(_valid_between(l, n - 1), n - 1, None) for l in (spec.l1, spec.l2)]
    for labels, m, target in checks:
        hit = _clash(labels, m, target)
        if hit:
            return hit
    return None


def _project_chain(space, v, chain, top: Partition, start: int, stop: int = 0):
    """Project onto ``chain[i]`` at level ``start - i`` for levels above ``stop``."""
    prev = top
    for i, lab in enumerate(chain):
        m = start - i
        if m <= stop:
            break
        v = cs.project(space, v, m, lab, _valid_between(prev, m))
        prev = lab
    return v


def coupled_state(space, spec: CouplingSpec, seed: int = 0) -> dict:
    """Unnormalized coupled Gel'fand state; raises if it vanishes."""
    v = _fix_groups(space, _seed(space, spec, random.Random(seed)), spec)
    v = cs.project(space, v, spec.n, spec.lam, _valid(newell_littlewood_product(spec.l1, spec.l2), spec.n))
    stop = space.m0 if isinstance(space, cs.InvariantSpace) else 0
    v = _project_chain(space, v, spec.chain, spec.lam, spec.n - 1, stop)
    if not v:
        raise ArithmeticError(f"coupled state {spec} vanished; seed has no overlap")
    return v


def _columns(space, psi, spec: CouplingSpec) -> dict:
    """{(nu1, nu2): component of psi in [nu1] x [nu2] of SO(n-1)}."""
    f1, f = spec.f1, spec.f1 + spec.f2
    m = spec.n - 1
    out = {}
    for nu1, part1 in cs.decompose(space, psi, m, _valid_between(spec.l1, m), tuple(range(f1))).items():
        for nu2, comp in cs.decompose(space, part1, m, _valid_between(spec.l2, m), tuple(range(f1, f))).items():
            out[(nu1, nu2)] = comp
    return out


def isf_row(space, spec: CouplingSpec, seed: int = 0) -> dict:
    """{(nu1, nu2): SignedSquare} at the fixed rank of ``space``."""
    psi = coupled_state(space, spec, seed)
    norm = space.inner(psi, psi)
    s_psi = cs.leading_sign(space, psi)
    out = {}
    for key, comp in _columns(space, psi, spec).items():
        sq = space.inner(comp, comp) / norm
        out[key] = signed_square_of(_frac(sq), s_psi * cs.leading_sign(space, comp))
    return out


def invariant_space(spec: CouplingSpec) -> cs.InvariantSpace:
    return cs.InvariantSpace(spec.f1 + spec.f2, spec.n, spec.m0)


def space_for(spec: CouplingSpec):
    """The compressed space when the invariant level allows it, else the full one."""
    f = spec.f1 + spec.f2
    if spec.m0 >= max(4, f):
        return invariant_space(spec)
    return cs.FullSpace(f, spec.n)


def make_spec(l1, l2, lam, nu, n: int, delay: int = 0) -> CouplingSpec:
    l1, l2, lam = (parse_partition(x) for x in (l1, l2, lam))
    return CouplingSpec(l1, l2, lam, minimal_chain(nu, n, delay), n)


@dataclass(frozen=True)
class IsfKey:
    l1: Partition
    l2: Partition
    lam: Partition
    nu1: Partition
    nu2: Partition
    nu: Partition
    tau: int = 0  # multiplicity of lam in l1 x l2; every supported coupling has at most one

    @classmethod
    def of(cls, l1, l2, lam, nu1, nu2, nu) -> "IsfKey":
        return cls(*(parse_partition(x) for x in (l1, l2, lam, nu1, nu2, nu)))

    def __str__(self):
        c = lambda p: p.compact()
        return f"<{c(self.l1)}{c(self.nu1)},{c(self.l2)}{c(self.nu2)}|{c(self.lam)}{c(self.nu)}>"


def extract_isf(key: IsfKey, n: int, delay: int = 0) -> SignedSquare:
    """The isoscalar factor at rank n; zero if (nu1, nu2) does not reach nu."""
    spec = make_spec(key.l1, key.l2, key.lam, key.nu, n, delay)
    spec.check_rows()
    for nu_i, l_i in ((key.nu1, key.l1), (key.nu2, key.l2)):
        if nu_i not in cs.between(l_i):
            raise ValueError(f"{nu_i.compact()} does not branch from {l_i.compact()}")
    row = isf_row(space_for(spec), spec)
    return row.get((key.nu1, key.nu2), SignedSquare.zero())


# ---------------------------------------------------------------------------
# Gel'fand labels and Weyl tableaux


@dataclass(frozen=True)
class GelfandLabel:
    """Labels at levels n, n-1, ..., 3 plus the signed SO(2) weight."""

    n: int
    chain: tuple
    m12: int

    def __post_init__(self):
        chain = tuple(parse_partition(x) for x in self.chain)
        object.__setattr__(self, "chain", chain)
        if self.n < 3 or len(chain) != self.n - 2:
            raise ValueError(f"need labels for levels {self.n}..3, got {len(chain)}")
        for i, lab in enumerate(chain):
            _check_rows(lab, self.n - i)
        for big, small in zip(chain, chain[1:]):
            if small not in cs.between(big):
                raise ValueError(f"{small.compact()} does not interlace {big.compact()}")
        if abs(self.m12) > chain[-1].part(0):
            raise ValueError(f"SO(2) weight {self.m12} exceeds {chain[-1].compact()}")

    def level(self, m: int) -> Partition:
        if m == 2:
            return Partition((abs(self.m12),))
        return self.chain[self.n - m]

    def weyl_tableau(self) -> tuple:
        """Rows of the top shape; a box holds the level where it first appears.

        Boxes already present at SO(2) hold +2 or -2 following the weight.
        """
        top = self.chain[0]
        rows = []
        for i in range(len(top)):
            row = []
            prev = 0
            for m in range(2, self.n + 1):
                cur = self.level(m).part(i)
                entry = (2 if self.m12 >= 0 else -2) if m == 2 else m
                row += [entry] * (cur - prev)
                prev = cur
            rows.append(tuple(row))
        return tuple(rows)

    @classmethod
    def from_weyl_tableau(cls, n: int, rows) -> "GelfandLabel":
        chain = []
        for m in range(n, 2, -1):
            chain.append(Partition([sum(1 for e in row if abs(e) <= m) for row in rows]))
        first = rows[0] if rows else ()
        m12 = sum(1 if e > 0 else -1 for e in first if abs(e) == 2)
        return cls(n, tuple(chain), m12)

    def __str__(self):
        return "".join(p.compact() for p in self.chain) + f"{self.m12:+d}"


def gelfand_candidates(m: int, f: int) -> list[Partition]:
    """SO(m) labels realizable on at most f slots without modification rules."""
    return [p for p in _traceless_candidates(f) if len(p) <= m // 2]


def _positive(space, v: dict) -> dict:
    """Phase convention: the first coefficient in canonical key order is positive."""
    return v if cs.leading_sign(space, v) > 0 else cs.scale(-1, v)


def _weight_filter(v: dict, m12: int) -> dict:
    return {k: c for k, c in v.items() if ts.weight_m12(k) == m12}


def gelfand_state(lam, label: GelfandLabel, seed: int = 0) -> dict:
    """Normalizable single-irrep Gel'fand state on |lam| slots (full space)."""
    lam = parse_partition(lam)
    n, f = label.n, lam.weight
    if label.chain[0] != lam:
        raise ValueError("label does not start with lam")
    space = cs.FullSpace(f, n)
    v = _random_vector(space.seed_keys(ts.labels(n)), random.Random(seed))
    if f >= 2:
        v = _apply_group_element(space, v, matrix_unit(lam, 0, 0).rational_terms(), 0)
        v = cs.project(space, v, n, lam, _traceless_candidates(f))
    v = _weight_filter(_project_chain(space, v, label.chain[1:], lam, n - 1, 2), label.m12)
    if not v:
        raise ArithmeticError(f"Gel'fand state {label} vanished")
    return _positive(space, v)


def coupled_gelfand_state(l1, l2, label: GelfandLabel, seed: int = 0) -> dict:
    """Full-chain coupled state of [l1] x [l2] with Gel'fand label ``label``."""
    l1, l2 = parse_partition(l1), parse_partition(l2)
    n = label.n
    spec = CouplingSpec(l1, l2, label.chain[0], list(label.chain[1:]), n)
    space = cs.FullSpace(spec.f1 + spec.f2, n)
    v = _random_vector(space.seed_keys(ts.labels(n)), random.Random(seed))
    v = _fix_groups(space, v, spec)
    v = cs.project(space, v, n, spec.lam, newell_littlewood_product(l1, l2))
    v = _weight_filter(_project_chain(space, v, spec.chain, spec.lam, n - 1, 2), label.m12)
    if not v:
        raise ArithmeticError(f"coupled state {label} vanished")
    return _positive(space, v)


def _tensor_product(u: dict, v: dict) -> dict:
    return {a + b: x * y for a, x in u.items() for b, y in v.items()}


def extract_cgc(state: dict, bra_components) -> SignedSquare:
    """Coefficient of the normalized product of ``bra_components`` in ``state``."""
    bra = {(): mpq(1)}
    norm = mpq(1)
    for part in bra_components:
        bra = _tensor_product(bra, part)
        norm *= sum(c * c for c in part.values())
    ip = sum((c * state.get(k, 0) for k, c in bra.items()), mpq(0))
    sq = ip * ip / (norm * sum(c * c for c in state.values()))
    return signed_square_of(_frac(sq), _frac(ip))


def cgc(l1, label1: GelfandLabel, l2, label2: GelfandLabel, l1l2_label: GelfandLabel) -> SignedSquare:
    """<l1 label1, l2 label2 | lam label> in the canonical chain basis."""
    state = coupled_gelfand_state(l1, l2, l1l2_label)
    return extract_cgc(state, (gelfand_state(l1, label1), gelfand_state(l2, label2)))


@dataclass
class AssimilatedState:
    label: GelfandLabel
    weight: Fraction  # squared length of this component relative to the whole
    sign: int  # leading-coefficient sign of the component
    state: dict


def assimilate(v, n: int | None = None) -> list[AssimilatedState]:
    """Read a realized tensor as SO(n) coupled states labeled by the chain.

    ``v`` is a :class:`~brauer_cgc.tensorspace.SparseTensor` or anything with
    a ``realized`` tensor (and optionally a Brauer label ``lam``). Components
    along each distinct Gel'fand label are returned with their weights.
    """
    lam = getattr(v, "lam", None)
    tensor = getattr(v, "realized", v)
    n = tensor.n if n is None else n
    f = tensor.f
    if lam is not None:
        _check_rows(parse_partition(lam), n, "coupled label")
    space = cs.FullSpace(f, n)
    total = space.inner(tensor.terms, tensor.terms)
    if not total:
        return []

    out = []

    def walk(vec, m, cands, chain):
        if m == 2:
            by_weight = defaultdict(dict)
            for k, c in vec.items():
                by_weight[ts.weight_m12(k)][k] = c
            for w in sorted(by_weight, reverse=True):
                comp = by_weight[w]
                label = GelfandLabel(n, tuple(chain), w)
                sq = _frac(space.inner(comp, comp) / total)
                out.append(AssimilatedState(label, sq, cs.leading_sign(space, comp), comp))
            return
        for lab, comp in cs.decompose(space, vec, m, [c for c in cands if len(c) <= m // 2]).items():
            walk(comp, m - 1, cs.between(lab), chain + [lab])

    walk(dict(tensor.terms), n, gelfand_candidates(n, f), [])
    return out


# ---------------------------------------------------------------------------
# fixtures


@dataclass
class FixtureRow:
    lam: Partition
    nu: Partition
    entries: list[str]
    normative: bool = True
    n_min: int | None = None
    note: str | None = None
    unreliable: dict = field(default_factory=dict)  # column index -> "sign" | "square"


@dataclass
class Fixture:
    table: int
    l1: Partition
    l2: Partition
    n_min: int
    columns: list[tuple[Partition, Partition]]
    rows: list[FixtureRow]

    def expected(self, i: int, j: int) -> SignedSquare:
        return parse_entry(self.rows[i].entries[j])

    def square_checked(self, i: int, j: int) -> bool:
        r = self.rows[i]
        return r.normative and r.unreliable.get(j) != "square"

    def sign_checked(self, i: int, j: int) -> bool:
        return self.square_checked(i, j) and self.rows[i].unreliable.get(j) != "sign"

    def row_n_min(self, i: int) -> int:
        return self.rows[i].n_min or self.n_min

    def row_ranks(self, i: int, count: int, start: int | None = None) -> list[int]:
        """The first ``count`` ranks at or above the row's minimum that work.

        A rank is skipped when a label of the row is ambiguous there (at an
        even level m a label with m/2 rows is a sum of two irreps with one
        Casimir value) or when two candidate labels share a Casimir value.
        """
        r = self.rows[i]
        need = [(r.lam, 0), (r.nu, 1), (self.l1, 0), (self.l2, 0)]
        need += [(p, 1) for c in self.columns for p in c]
        n = max(self.row_n_min(i), start or 0, max(2 * len(p) + 1 + shift for p, shift in need))
        out = []
        while len(out) < count:
            if not spectrum_clash(make_spec(self.l1, self.l2, r.lam, r.nu, n)):
                out.append(n)
            n += 1
        return out


TABLES = range(1, 10)


@lru_cache(maxsize=None)
def load_fixture(table: int) -> Fixture:
    text = resources.files("brauer_cgc").joinpath("fixtures", f"table{table}.json").read_text()
    d = json.loads(text)
    rows = [
        FixtureRow(
            parse_partition(r["lam"]),
            parse_partition(r["nu"]),
            list(r["entries"]),
            bool(r.get("normative", True)),
            r.get("n_min"),
            r.get("note"),
            {int(k): v for k, v in r.get("unreliable", {}).items()},
        )
        for r in d["rows"]
    ]
    cols = [(parse_partition(a), parse_partition(b)) for a, b in d["columns"]]
    l1, l2 = (parse_partition(x) for x in d["coupling"])
    return Fixture(int(d["table"]), l1, l2, int(d["n_min"]), cols, rows)


def parse_coupling(text: str) -> tuple[Partition, Partition]:
    """``"[2]x[1]"``, ``"[1^2]x[1^2]"`` or ``"21x1"`` style couplings."""
    parts = text.lower().replace("*", "x").split("x")
    if len(parts) != 2:
        raise ValueError(f"bad coupling {text!r}")
    return parse_partition(parts[0].strip()), parse_partition(parts[1].strip())


def table_for(l1, l2) -> int:
    l1, l2 = parse_partition(l1), parse_partition(l2)
    for t in TABLES:
        fx = load_fixture(t)
        if (fx.l1, fx.l2) == (l1, l2):
            return t
    raise KeyError(f"no table for {l1.compact()} x {l2.compact()}")


def parse_entry(text: str) -> SignedSquare:
    """``"0"``, ``"-1/2"``, ``"sqrt((n-1)/n)"`` or ``"-sqrt(3/4)"``."""
    t = text.strip().replace(" ", "")
    sign = 1
    if t.startswith("-"):
        sign, t = -1, t[1:]
    if t.startswith("sqrt(") and t.endswith(")"):
        sq = parse_ratfunc(t[5:-1])
    else:
        val = parse_ratfunc(t)
        if not val:
            return SignedSquare.zero()
        if val.num[-1] < 0:
            sign = -sign
        sq = val * val
    if not sq:
        return SignedSquare.zero()
    return SignedSquare(sign, sq)


# ---------------------------------------------------------------------------
# tables


@dataclass
class IsfTable:
    l1: Partition
    l2: Partition
    columns: list
    rows: list  # (lam, nu)
    entries: list  # rows of SignedSquare
    n_min: int
    table: int | None = None
    samples: dict = field(default_factory=dict)  # row index -> sampled n
    row_gauge: list = field(default_factory=list)
    column_gauge: dict = field(default_factory=dict)  # (column index, nu) -> sign
    sign_conflicts: list = field(default_factory=list)

    @property
    def coupling(self) -> str:
        return f"{self.l1.compact()}x{self.l2.compact()}"

    def blocks(self) -> dict:
        out = defaultdict(list)
        for i, (_, nu) in enumerate(self.rows):
            out[nu].append(i)
        return dict(out)

    def at(self, n: int) -> list[list[SignedSquare]]:
        return [[e.at(n) for e in row] for row in self.entries]


def _row_job(args):
    l1, l2, lam, nu, n, cols, delay = args
    spec = make_spec(l1, l2, lam, nu, n, delay)
    row = isf_row(space_for(spec), spec)
    extra = [k for k, v in row.items() if v.sign and k not in cols]
    if extra:
        raise ArithmeticError(f"{lam}/{nu} at n={n} has entries outside the column set: {extra}")
    return [row.get(c, SignedSquare.zero()) for c in cols]


def _run_jobs(jobs: list, workers: int | None):
    if workers is None:
        workers = min(8, os.cpu_count() or 1)
    if workers <= 1 or len(jobs) <= 1:
        return [_row_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row_job, jobs, chunksize=1))


def reconstruct_entry(samples: list[tuple[int, SignedSquare]], holdouts: int = 2) -> SignedSquare:
    """Fit sign * sqrt(R(n)) through samples; the last ``holdouts`` are checked only."""
    signs = {s.sign for _, s in samples if s.sign}
    if not signs:
        return SignedSquare.zero()
    if len(signs) > 1:
        raise ReconstructionError(f"sign changes across samples n={[n for n, _ in samples]}")
    fit, check = samples[: len(samples) - holdouts], samples[len(samples) - holdouts:]
    pts = [(n, s.square) for n, s in fit]
    last = None
    for deg in range(0, (len(pts) - 2) // 2 + 1):
        try:
            r = ratfunc_interpolate(pts, deg)
        except ReconstructionError as exc:
            last = exc
            continue
        if all(r(n) == s.square for n, s in check):
            return SignedSquare(signs.pop(), r)
        last = ReconstructionError(f"degree {deg} fit misses a holdout sample")
    raise ReconstructionError(f"no fit through {len(samples)} samples: {last}")


def sample_table(fx: Fixture, samples: int = 12, workers: int | None = None, delay: int = 0,
                 start: int | None = None) -> dict:
    """{row index: [(n, [SignedSquare per column])]} for consecutive n."""
    jobs, where = [], []
    for i, r in enumerate(fx.rows):
        for n in fx.row_ranks(i, samples, start):
            jobs.append((fx.l1, fx.l2, r.lam, r.nu, n, fx.columns, delay))
            where.append((i, n))
    out = defaultdict(list)
    for (i, n), vals in zip(where, _run_jobs(jobs, workers)):
        out[i].append((n, vals))
    return dict(out)


def reconstruct_table(coupling, samples: int = 12, workers: int | None = None,
                      start: int | None = None) -> IsfTable:
    """Rebuild a table as functions of n from ``samples`` ranks per row.

    ``coupling`` is a table number or an ``(l1, l2)`` pair / coupling string.
    The last two samples of each row are holdouts.
    """
    if samples < 4:
        raise ValueError("need at least 4 samples")
    if isinstance(coupling, int):
        t = coupling
    else:
        if isinstance(coupling, str):
            coupling = parse_coupling(coupling)
        t = table_for(*coupling)
    fx = load_fixture(t)
    data = sample_table(fx, samples, workers, start=start)
    entries = []
    for i in range(len(fx.rows)):
        rows = data[i]
        entries.append([
            reconstruct_entry([(n, vals[j]) for n, vals in rows]) for j in range(len(fx.columns))
        ])
    return IsfTable(
        fx.l1, fx.l2, list(fx.columns), [(r.lam, r.nu) for r in fx.rows], entries, fx.n_min, t,
        samples={i: [n for n, _ in data[i]] for i in data},
    )


# ---------------------------------------------------------------------------
# sign anchoring and checks


@dataclass
class EntryDiff:
    row: int
    column: int
    label: str
    expected: SignedSquare
    computed: SignedSquare
    kind: str  # "square" or "sign"

    def __str__(self):
        return f"{self.label}: expected {self.expected}, computed {self.computed} ({self.kind})"


def _entry_label(table: IsfTable, i: int, j: int) -> str:
    lam, nu = table.rows[i]
    a, b = table.columns[j]
    return f"{lam.compact()}/{nu.compact()} @ ({a.compact()}{b.compact()})"


def anchor_signs(table: IsfTable, fx: Fixture) -> IsfTable:
    """Fix the free signs of the computed table against the fixture.

    Each row state and each SO(n-1) coupled column state (per nu block) has
    a conventional global sign. Within a nu block the signs are chosen to
    agree with as many printed signs as possible; among equally good choices
    the disagreements are pushed to the latest entries in printed order.
    Remaining disagreements are recorded as sign conflicts, never flipped.
    """
    ncols = len(table.columns)
    row_g = [1] * len(table.rows)
    col_g: dict = {}
    for nu, idx in table.blocks().items():
        links = []
        for i in idx:
            for j in range(ncols):
                if not fx.sign_checked(i, j):
                    continue
                got, want = table.entries[i][j], fx.expected(i, j)
                if got.sign and want.sign:
                    links.append((i, j, got.sign * want.sign))
        cols = sorted({j for _, j, _ in links})
        rows = sorted({i for i, _, _ in links})
        best = None
        # the first row keeps its sign: flipping everything changes nothing
        for bits in product((1, -1), repeat=len(rows) + len(cols) - 1 if rows else 0):
            rg = dict(zip(rows, (1,) + bits[: len(rows) - 1]))
            cg = dict(zip(cols, bits[len(rows) - 1:]))
            bad = [(i, j) for i, j, p in links if rg[i] * cg[j] != p]
            score = (len(bad), [(-i, -j) for i, j in bad])
            if best is None or score < best[0]:
                best = (score, rg, cg)
        if best:
            for i, g in best[1].items():
                row_g[i] = g
            for j, g in best[2].items():
                col_g[(j, nu)] = g
    entries, conflicts = [], []
    for i, (_, nu) in enumerate(table.rows):
        out_row = []
        for j in range(ncols):
            e = table.entries[i][j]
            if row_g[i] * col_g.get((j, nu), 1) < 0:
                e = -e
            out_row.append(e)
            want = fx.expected(i, j)
            if fx.sign_checked(i, j) and e.sign and want.sign and e.sign != want.sign:
                conflicts.append(_entry_label(table, i, j))
        entries.append(out_row)
    return IsfTable(
        table.l1, table.l2, table.columns, table.rows, entries, table.n_min, table.table,
        samples=table.samples, row_gauge=row_g, column_gauge=col_g, sign_conflicts=conflicts,
    )


def compare_with_fixture(table: IsfTable, fx: Fixture) -> tuple[list[EntryDiff], list[str]]:
    """Differences on normative entries, plus labels of the skipped ones.

    Entries flagged as unreliable in the fixture are skipped entirely
    (``square``) or compared by square only (``sign``).
    """
    diffs, skipped = [], []
    for i, r in enumerate(fx.rows):
        for j in range(len(fx.columns)):
            label = _entry_label(table, i, j)
            if not fx.square_checked(i, j):
                skipped.append(label)
                continue
            got, want = table.entries[i][j], fx.expected(i, j)
            if got.square != want.square:
                kind = "square"
            elif got.sign != want.sign and fx.sign_checked(i, j):
                kind = "sign"
            else:
                if got.sign != want.sign:
                    skipped.append(label + " (sign)")
                continue
            diffs.append(EntryDiff(i, j, label, want, got, kind))
    return diffs, skipped


def _dot_is(entries_a, entries_b, target: int) -> bool:
    terms = [(a.sign * b.sign, RatFunc.coerce(a.square) * RatFunc.coerce(b.square))
             for a, b in zip(entries_a, entries_b) if a.sign and b.sign]
    if target:
        terms.append((-1, RatFunc.const(1)))
    return sqrt_sum_is_zero(terms)


def orthogonality_failures(table: IsfTable) -> list[str]:
    """Rows and columns of every nu block must be orthonormal as identities in n."""
    failures = []
    for nu, idx in table.blocks().items():
        cols = [j for j in range(len(table.columns)) if any(table.entries[i][j].sign for i in idx)]
        rows = [[table.entries[i][j] for j in cols] for i in idx]
        columns = [[table.entries[i][j] for i in idx] for j in cols]
        if len(idx) != len(cols):
            failures.append(f"block {nu.compact()}: {len(idx)} rows but {len(cols)} columns")
        for what, vecs, names in (("row", rows, idx), ("column", columns, cols)):
            for a in range(len(vecs)):
                for b in range(a, len(vecs)):
                    if not _dot_is(vecs[a], vecs[b], int(a == b)):
                        failures.append(f"block {nu.compact()}: {what}s {names[a]},{names[b]} not orthonormal")
    return failures


# ---------------------------------------------------------------------------
# independence of the magnetic configuration


_PYTHAGOREAN = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)),
                (Fraction(8, 17), Fraction(15, 17)))


def plane_rotations(labels: list[int], sweeps: int = 3) -> dict:
    """A rational rotation mixing the labels; label -> {label: coeff}.

    Plane rotations of consecutive labels are applied in alternating sweeps.
    One sweep leaves structural zeros in the minors, which would kill the
    overlap between Gel'fand states of multi-row labels.
    """
    mat = {x: {x: mpq(1)} for x in labels}
    planes = list(zip(labels, labels[1:]))
    order = [p for k in range(sweeps) for p in (planes if k % 2 == 0 else planes[::-1])]
    for i, (a, b) in enumerate(order):
        c, s = (mpq(x.numerator, x.denominator) for x in _PYTHAGOREAN[i % len(_PYTHAGOREAN)])
        new = {}
        for x, img in mat.items():
            out = defaultdict(mpq)
            for y, w in img.items():
                if y == a:
                    out[a] += c * w
                    out[b] += s * w
                elif y == b:
                    out[a] -= s * w
                    out[b] += c * w
                else:
                    out[y] += w
            new[x] = cs.clean(out)
        mat = new
    return mat


def transported_row(l1, l2, lam, nu, n: int, seed: int = 0) -> tuple[dict, dict]:
    """ISF rows from two Gel'fand states of [nu] with phases tied by SO(n-1).

    State A follows the minimal chain below nu; state B keeps nu one level
    longer. The B phases of the row state and of every column state are
    taken from the A states moved by a fixed rational SO(n-1) rotation and
    projected onto the B chain, so the two rows must agree exactly.
    """
    spec_a = make_spec(l1, l2, lam, nu, n, 0)
    spec_b = make_spec(l1, l2, lam, nu, n, 1)
    sa, sb = invariant_space(spec_a), invariant_space(spec_b)
    psi_a = coupled_state(sa, spec_a, seed)
    psi_b = coupled_state(sb, spec_b, seed + 1)
    row_a = isf_row(sa, spec_a, seed)
    rot = plane_rotations(list(range(n - 1, sb.m0, -1)))

    def move(v):
        w = sb.rotate(sa.embed(v, sb), rot)
        return _project_chain(sb, w, spec_b.chain[1:], spec_b.chain[0], n - 2, sb.m0)

    row_phase = sb.inner(move(psi_a), psi_b)
    if not row_phase:
        raise ArithmeticError("rotation has no overlap with the second Gel'fand state")
    lead_a = cs.leading_sign(sa, psi_a)
    norm_b = sb.inner(psi_b, psi_b)
    cols_a = _columns(sa, psi_a, spec_a)
    cols_b = _columns(sb, psi_b, spec_b)
    row_b = {}
    for key, comp_b in cols_b.items():
        sq = _frac(sb.inner(comp_b, comp_b) / norm_b)
        if key not in cols_a:
            row_b[key] = signed_square_of(sq, 1) if sq else SignedSquare.zero()
            continue
        col_phase = sb.inner(move(cols_a[key]), comp_b)
        if not col_phase:
            raise ArithmeticError(f"rotation has no overlap for column {key}")
        sign = lead_a * cs.leading_sign(sa, cols_a[key])
        sign *= (1 if row_phase > 0 else -1) * (1 if col_phase > 0 else -1)
        row_b[key] = signed_square_of(sq, sign)
    return row_a, row_b


# ---------------------------------------------------------------------------
# type-one entries and the symmetric-group oracle


def is_type_one(l1, l2, lam, nu, nu1, nu2) -> bool:
    """No trace contraction at either rank and at most one box leaves lam."""
    l1, l2, lam, nu, nu1, nu2 = (parse_partition(x) for x in (l1, l2, lam, nu, nu1, nu2))
    return (lam.weight == l1.weight + l2.weight and nu.weight == nu1.weight + nu2.weight
            and lam.weight - nu.weight in (0, 1))


def unitary_isf_row(l1, l2, lam, nu, n: int = 12, seed: int = 0) -> dict:
    """U(n) > U(n-1) isoscalar factors, built without any contraction."""
    l1, l2, lam, nu = (parse_partition(x) for x in (l1, l2, lam, nu))
    f = l1.weight + l2.weight
    chain = minimal_chain(nu, n)
    spec = CouplingSpec(l1, l2, lam, chain, n)
    space = cs.UnitarySpace(f, n)
    window = list(range(n, n - len(chain) - 1, -1))
    v = _random_vector(space.seed_keys(window), random.Random(seed))
    f1 = l1.weight
    for lab, off in ((l1, 0), (l2, f1)):
        if lab.weight >= 2:
            v = _apply_group_element(space, v, matrix_unit(lab, 0, 0).rational_terms(), off)
    v = cs.project(space, v, n, lam, partitions_of(f))
    v = _project_chain(space, v, chain, lam, n - 1)
    if not v:
        raise ArithmeticError("unitary coupled state vanished")
    norm = space.inner(v, v)
    s = cs.leading_sign(space, v)
    out = {}
    for key, comp in _columns(space, v, spec).items():
        out[key] = signed_square_of(_frac(space.inner(comp, comp) / norm), s * cs.leading_sign(space, comp))
    return out


@dataclass
class TypeOneReport:
    coupling: str
    type_one: list  # (row, column, value)
    type_two: list
    not_constant: list
    oracle_mismatch: list
    sign_conflicts: list

    @property
    def ok(self) -> bool:
        return not (self.not_constant or self.oracle_mismatch or self.sign_conflicts)


def typeone_check(table: IsfTable, oracle_n: int = 12) -> TypeOneReport:
    """Classify every nonzero entry and test type-one ones against U(n) ISFs.

    Type-one entries must be n-free and equal to the contraction-free
    (symmetric-group induction) values up to the row and column signs,
    which are fixed from the first entry linking them.
    """
    t1, t2, bad_const, mismatch = [], [], [], []
    oracle_rows: dict = {}
    edges = []
    for i, (lam, nu) in enumerate(table.rows):
        for j, (nu1, nu2) in enumerate(table.columns):
            e = table.entries[i][j]
            if not e.sign:
                continue
            lab = _entry_label(table, i, j)
            if not is_type_one(table.l1, table.l2, lam, nu, nu1, nu2):
                t2.append((i, j, e))
                continue
            t1.append((i, j, e))
            if not e.is_constant():
                bad_const.append(lab)
                continue
            if i not in oracle_rows:
                oracle_rows[i] = unitary_isf_row(table.l1, table.l2, lam, nu, oracle_n)
            u = oracle_rows[i].get((nu1, nu2), SignedSquare.zero())
            if u.square != e.square:
                mismatch.append(f"{lab}: {e} vs {u}")
            else:
                edges.append((i, (j, nu), e.sign * u.sign, lab))
    return TypeOneReport(table.coupling, t1, t2, bad_const, mismatch, _gauge_conflicts(edges))


def _gauge_conflicts(edges) -> list[str]:
    """Labels of edges inconsistent with any choice of row and column signs."""
    adj = defaultdict(list)
    for r, c, p, _ in edges:
        adj[("r", r)].append((("c", c), p))
        adj[("c", c)].append((("r", r), p))
    val: dict = {}
    for start in sorted(adj, key=repr):
        if start in val:
            continue
        val[start] = 1
        queue = [start]
        while queue:
            u = queue.pop(0)
            for w, p in adj[u]:
                if w not in val:
                    val[w] = val[u] * p
                    queue.append(w)
    return [lab for r, c, p, lab in edges if val[("r", r)] * val[("c", c)] != p]


# ---------------------------------------------------------------------------
# emitters


def _entry_text(e: SignedSquare) -> str:
    return str(e)


def to_json(table: IsfTable) -> dict:
    return {
        "table": table.table,
        "coupling": [str(table.l1), str(table.l2)],
        "n_min": table.n_min,
        "columns": [[str(a), str(b)] for a, b in table.columns],
        "rows": [
            {"lam": str(lam), "nu": str(nu), "entries": [_entry_text(e) for e in row]}
            for (lam, nu), row in zip(table.rows, table.entries)
        ],
        "sign_conflicts": list(table.sign_conflicts),
    }


def to_csv(table: IsfTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lam/nu"] + [f"{a.compact()}{b.compact()}" for a, b in table.columns])
    for (lam, nu), row in zip(table.rows, table.entries):
        w.writerow([f"{lam.compact()}/{nu.compact()}"] + [_entry_text(e) for e in row])
    return buf.getvalue()


def _latex_entry(e: SignedSquare) -> str:
    if not e.sign:
        return "0"
    sq = RatFunc.coerce(e.square)
    body = "1" if sq == 1 else rf"\sqrt{{{sq.latex()}}}"
    return ("-" if e.sign < 0 else "") + body


def _latex_label(p: Partition) -> str:
    return "[" + ("".join(_latex_runs(p)) or "0") + "]"


def _latex_runs(p: Partition):
    i = 0
    while i < len(p):
        j = i
        while j < len(p) and p[j] == p[i]:
            j += 1
        yield str(p[i]) + (f"^{{{j - i}}}" if j - i > 1 else "")
        i = j


def to_latex(table: IsfTable) -> str:
    """Table body: a header line of columns, then one line per row."""
    head = " & ".join([r"$[\lambda]/[\nu]$"] + [f"${_latex_label(a)}{_latex_label(b)}$" for a, b in table.columns])
    lines = [head + r" \\", r"\hline"]
    for (lam, nu), row in zip(table.rows, table.entries):
        cells = [f"${_latex_label(lam)}/{_latex_label(nu)}$"] + [f"${_latex_entry(e)}$" for e in row]
        lines.append(" & ".join(cells) + r" \\")
    return "\n".join(lines) + "\n"
