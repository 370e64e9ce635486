"""Induced modules S_f1 x S_f2 -> D_f(n) and their coupled bases.

The module is handled abstractly: its spanning set is Q_t (x) |m1, m2> over
coset representatives Q_t and seminormal basis vectors of the two factors.
A diagram acting on Q_t is refactored as Q_s h with h in S_f1 x S_f2, which
then acts through the seminormal matrices. Coefficients found this way do not
depend on tensor components. A component configuration realizes the spanning
set as tensors; the resulting Gram matrix fixes the normalization and shows
which coupled vectors vanish for that configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from gmpy2 import mpq

from . import tensorspace as ts
from .brauerdiag import BrauerDiagram, compose_diagrams, enumerate_cosets, generator
from .exactnum import SignedSquare
from .symcomb import (
    Partition,
    brauer_branching,
    newell_littlewood_product,
    parse_partition,
    seminormal_matrix,
    seminormal_unit,
)

__all__ = [
    "ComponentConfig",
    "ConsistencyError",
    "CoupledVector",
    "IdcCheck",
    "InducedModule",
    "IntertwiningReport",
    "NormMatrix",
    "UncoupledVector",
    "build_uncoupled",
    "chain_space",
    "check_idc_case",
    "derive_coupled",
    "load_idc_cases",
    "norm_matrix",
    "observed_multiplicities",
    "tau_chains",
    "uncoupled_basis",
    "verify_intertwining",
]

Key = tuple[int, int, int]  # (coset rank, m1, m2)


class ConsistencyError(RuntimeError):
    """An internal invariant of the induced module failed."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(int(x.numerator), int(x.denominator))


# ---------------------------------------------------------------------------
# component configurations


@dataclass(frozen=True)
class ComponentConfig:
    """Tensor component label for each slot of the base tensor."""

    f1: int
    f2: int
    labels: tuple[int, ...]
    policy: str = "explicit"

    def __post_init__(self):
        if len(self.labels) != self.f1 + self.f2:
            raise ValueError("one label per slot is required")

    @classmethod
    def generic(cls, f1: int, f2: int, n: int) -> "ComponentConfig":
        """Distinct labels inside each block; slot i of both blocks shares a label."""
        alphabet = ts.labels(n)
        if max(f1, f2) > len(alphabet):
            raise ValueError("rank too small for the generic policy")
        return cls(f1, f2, tuple(alphabet[:f1]) + tuple(alphabet[:f2]), "generic")

    @classmethod
    def distinct(cls, f1: int, f2: int, n: int) -> "ComponentConfig":
        alphabet = ts.labels(n)
        if f1 + f2 > len(alphabet):
            raise ValueError("rank too small for pairwise distinct labels")
        return cls(f1, f2, tuple(alphabet[: f1 + f2]), "distinct")

    @classmethod
    def explicit(cls, f1: int, f2: int, labels) -> "ComponentConfig":
        labs = tuple(ts.parse_label(x) if isinstance(x, str) else int(x) for x in labels)
        return cls(f1, f2, labs, "explicit")

    @classmethod
    def from_policy(cls, policy: str, f1: int, f2: int, n: int) -> "ComponentConfig":
        if policy == "generic":
            return cls.generic(f1, f2, n)
        if policy in ("distinct", "paired"):
            return cls.distinct(f1, f2, n) if policy == "distinct" else cls.generic(f1, f2, n)
        if policy.startswith("explicit:"):
            return cls.explicit(f1, f2, policy.split(":", 1)[1].split(","))
        raise ValueError(f"unknown component policy {policy!r}")

    @property
    def genericity(self) -> tuple[tuple[int, ...], ...]:
        """Groups of slots carrying the same label."""
        groups: dict[int, list[int]] = {}
        for i, x in enumerate(self.labels):
            groups.setdefault(x, []).append(i)
        return tuple(tuple(g) for g in groups.values() if len(g) > 1)

    def check(self, n: int):
        valid = set(ts.labels(n))
        bad = [x for x in self.labels if x not in valid]
        if bad:
            raise ValueError(f"labels {bad} are not components of SO({n})")

    def base(self, n: int) -> ts.SparseTensor:
        self.check(n)
        return ts.SparseTensor.basis(n, self.labels)

    def describe(self) -> str:
        return ",".join(ts.label_str(x) for x in self.labels)


# ---------------------------------------------------------------------------
# the abstract induced module


def _perm_diagram(p) -> BrauerDiagram:
    f = len(p)
    return BrauerDiagram(f, tuple(sorted((p[s], f + s) for s in range(f))))


class InducedModule:
    """Spanning set Q_t (x) |m1 m2> with the D_f(n) action at a fixed n."""

    def __init__(self, l1, l2, n: int):
        self.l1, self.l2 = parse_partition(l1), parse_partition(l2)
        self.f1, self.f2 = self.l1.weight, self.l2.weight
        self.f = self.f1 + self.f2
        if n < self.f - 1:
            raise ValueError(f"D_{self.f}({n}) is outside the semisimple range n >= f-1")
        self.n = n
        self.cosets = enumerate_cosets(self.f1, self.f2)
        self.d1 = len(seminormal_matrix(self.l1, tuple(range(self.f1))))
        self.d2 = len(seminormal_matrix(self.l2, tuple(range(self.f2))))
        self.keys: list[Key] = [
            (c.rank, a, b) for c in self.cosets for a in range(self.d1) for b in range(self.d2)
        ]
        self._signature = {self._sig(c.diagram): c.rank for c in self.cosets}
        if len(self._signature) != len(self.cosets):
            raise ConsistencyError("coset representatives are not distinct")
        self._stab = {c.rank: self._stabilizer(c.diagram) for c in self.cosets}
        self._cache: dict = {}

    # -- coset factorization ------------------------------------------------

    def _sig(self, d: BrauerDiagram):
        thr = d.through()
        return (
            tuple(sorted(d.top_cups())),
            tuple(sorted(t for t, s in thr if s < self.f1)),
            tuple(sorted(t for t, s in thr if s >= self.f1)),
        )

    def _split(self, h) -> tuple[tuple[int, ...], tuple[int, ...]]:
        f1 = self.f1
        h1 = tuple(h[i] for i in range(f1))
        h2 = tuple(h[i] - f1 for i in range(f1, self.f))
        if sorted(h1) != list(range(f1)) or sorted(h2) != list(range(self.f2)):
            raise ConsistencyError("factor does not preserve the blocks")
        return h1, h2

    def _stabilizer(self, q: BrauerDiagram):
        """Block permutations h with q h = q: simultaneous relabelings of the caps."""
        caps = sorted(q.bottom_caps())
        out = []
        for order in permutations(range(len(caps))):
            h = list(range(self.f))
            for src, dst in enumerate(order):
                (a, b), (c, d) = caps[src], caps[dst]
                h[a], h[b] = c, d
            if compose_diagrams(q, _perm_diagram(h))[0] != q:
                raise ConsistencyError("cap relabeling does not fix the coset")
            out.append(self._split(h))
        return out

    def factor(self, d: BrauerDiagram):
        """Write d = Q_t h; None when d has a cap inside one block."""
        f1 = self.f1
        caps = d.bottom_caps()
        if any((a < f1) == (b < f1) for a, b in caps):
            return None
        t = self._signature.get(self._sig(d))
        if t is None:
            raise ConsistencyError(f"no coset representative matches {d}")
        q = self.cosets[t].diagram
        top_to_bottom = {top: s for top, s in q.through()}
        h = [0] * self.f
        for top, s in d.through():
            h[s] = top_to_bottom[top]
        qcaps = sorted((min(a, b), max(a, b)) for a, b in q.bottom_caps())
        for (a, b), (c, e) in zip(sorted((min(a, b), max(a, b)) for a, b in caps), qcaps):
            h[a], h[b] = c, e
        if compose_diagrams(q, _perm_diagram(h)) != (d, 0):
            raise ConsistencyError("coset factorization failed")
        return (t,) + self._split(h)

    # -- action -----------------------------------------------------------

    def _symmetrize(self, t: int, vec: dict) -> dict:
        """Average over the block permutations fixing Q_t."""
        stab = self._stab[t]
        if len(stab) == 1:
            return vec
        out: dict = {}
        w = Fraction(1, len(stab))
        for h1, h2 in stab:
            r1, r2 = seminormal_matrix(self.l1, h1), seminormal_matrix(self.l2, h2)
            for (a, b), c in vec.items():
                for a2 in range(self.d1):
                    if not r1[a2][a]:
                        continue
                    for b2 in range(self.d2):
                        if r2[b2][b]:
                            out[(a2, b2)] = out.get((a2, b2), 0) + w * c * r1[a2][a] * r2[b2][b]
        return {k: v for k, v in out.items() if v}

    def basis_vector(self, key: Key) -> dict:
        t, a, b = key
        return {(t,) + ab: c for ab, c in self._symmetrize(t, {(a, b): Fraction(1)}).items()}

    def _act_key(self, d: BrauerDiagram, key: Key) -> dict:
        ck = (d, key)
        if ck in self._cache:
            return self._cache[ck]
        t, a, b = key
        prod, loops = compose_diagrams(d, self.cosets[t].diagram)
        res: dict = {}
        fac = self.factor(prod)
        if fac is not None:
            s, h1, h2 = fac
            r1, r2 = seminormal_matrix(self.l1, h1), seminormal_matrix(self.l2, h2)
            local = {}
            scale = Fraction(self.n) ** loops
            for a2 in range(self.d1):
                for b2 in range(self.d2):
                    c = r1[a2][a] * r2[b2][b]
                    if c:
                        local[(a2, b2)] = scale * c
            res = {(s,) + ab: c for ab, c in self._symmetrize(s, local).items()}
        self._cache[ck] = res
        return res

    def act(self, d, vec: dict) -> dict:
        """Act with a diagram or a list of (coefficient, diagram) terms."""
        terms = [(1, d)] if isinstance(d, BrauerDiagram) else d
        out: dict = {}
        for coeff, diag in terms:
            for key, c in vec.items():
                for k2, c2 in self._act_key(diag, key).items():
                    out[k2] = out.get(k2, 0) + coeff * c * c2
        return {k: v for k, v in out.items() if v}

    @lru_cache(maxsize=None)
    def casimir_terms(self, m: int):
        """(n-1) m + 2 sum_{i<j<m} (tau_ij - eps_ij) on the first m slots."""
        f = self.f
        terms = [(Fraction((self.n - 1) * m), BrauerDiagram.identity(f))]
        for i in range(m):
            for j in range(i + 1, m):
                swap = list(range(f))
                swap[i], swap[j] = j, i
                terms.append((Fraction(2), _perm_diagram(swap)))
                partner = [0] * (2 * f)
                for x in range(f):
                    partner[x], partner[f + x] = f + x, x
                partner[i], partner[j], partner[f + i], partner[f + j] = j, i, f + j, f + i
                terms.append((Fraction(-2), BrauerDiagram.from_partner(f, partner)))
        return tuple(terms)

    def casimir(self, m: int, vec: dict) -> dict:
        return self.act(list(self.casimir_terms(m)), vec)

    def project(self, vec: dict, m: int, target, candidates) -> dict:
        target = parse_partition(target)
        ct = ts.casimir_eigenvalue(target, self.n)
        others = set()
        for lab in map(parse_partition, candidates):
            if lab == target:
                continue
            c = ts.casimir_eigenvalue(lab, self.n)
            if c == ct:
                raise ts.DegenerateSpectrumError(
                    f"{lab} and {target} share the eigenvalue {ct} at level {m}, n={self.n}"
                )
            others.add(c)
        out = vec
        for c in sorted(others):
            if not out:
                break
            cv = self.casimir(m, out)
            out = {
                k: v
                for k in set(cv) | set(out)
                if (v := (cv.get(k, 0) - c * out.get(k, 0)) / (ct - c))
            }
        return out

    def project_chain(self, vec: dict, lam, tau) -> dict:
        """Project onto [lam] at level f and tau[i] at level f-1-i."""
        lam = parse_partition(lam)
        out = self.project(vec, self.f, lam, self.support())
        prev = lam
        for i, mu in enumerate(tau):
            m = self.f - 1 - i
            out = self.project(out, m, mu, _neighbours(prev, m))
            prev = mu
        return out

    @lru_cache(maxsize=None)
    def support(self) -> tuple[Partition, ...]:
        return tuple(newell_littlewood_product(self.l1, self.l2))


@lru_cache(maxsize=None)
def _module(l1, l2, n) -> InducedModule:
    return InducedModule(l1, l2, n)


def _neighbours(mu: Partition, m: int) -> list[Partition]:
    """Labels at level m adjacent to mu at level m+1."""
    return [p for p in brauer_branching(mu, mu.weight, m + 1) if p.weight <= m]


def _label_order(p: Partition):
    return (p.weight, tuple(-x for x in p))


def tau_chains(lam, f: int) -> list[tuple[Partition, ...]]:
    """Brauer-chain paths from [lam] at level f down to level 1."""
    lam = parse_partition(lam)

    def rec(mu, m):
        if m == 0:
            return [()]
        out = []
        for nu in sorted(_neighbours(mu, m), key=_label_order):
            out += [(nu,) + rest for rest in rec(nu, m - 1)]
        return out

    return rec(lam, f - 1)


# ---------------------------------------------------------------------------
# exact linear algebra on sparse coefficient vectors


def _reduce(basis: list[tuple[Key, dict]], vec: dict) -> dict:
    """Eliminate pivots of an echelon basis from vec."""
    vec = dict(vec)
    for pivot, row in basis:
        c = vec.get(pivot)
        if c:
            for k, v in row.items():
                nv = vec.get(k, 0) - c * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
    return vec


def _add_to_echelon(basis: list, vec: dict, order) -> bool:
    r = _reduce(basis, vec)
    if not r:
        return False
    pivot = min(r, key=order)
    inv = 1 / r[pivot]
    row = {k: v * inv for k, v in r.items()}
    for i, (p, other) in enumerate(basis):
        c = other.get(pivot)
        if c:
            basis[i] = (p, {k: v for k in set(other) | set(row) if (v := other.get(k, 0) - c * row.get(k, 0))})
    basis.append((pivot, row))
    return True


def rank(vectors, order=None) -> int:
    basis: list = []
    order = order or (lambda k: k)
    return sum(_add_to_echelon(basis, v, order) for v in vectors)


class _Solver:
    """Expresses vectors in the span of fixed columns."""

    def __init__(self, columns: list[dict]):
        self.count = len(columns)
        self.basis: list = []
        order = lambda k: (k[0] == "col", k)
        for j, col in enumerate(columns):
            _add_to_echelon(self.basis, {**col, ("col", j): Fraction(1)}, order)

    def solve(self, target: dict) -> list[Fraction] | None:
        """x with sum x_j columns[j] = target, or None outside the span."""
        r = _reduce(self.basis, target)
        if any(k[0] != "col" for k in r):
            return None
        # the tags carry minus the combination that was subtracted
        return [-r.get(("col", j), Fraction(0)) for j in range(self.count)]


# ---------------------------------------------------------------------------
# realization in tensor space


@dataclass
class UncoupledVector:
    key: Key
    coset_word: str
    realized: ts.SparseTensor

    @property
    def coset_rank(self) -> int:
        return self.key[0]

    @property
    def m1(self) -> int:
        return self.key[1]

    @property
    def m2(self) -> int:
        return self.key[2]

    @property
    def null(self) -> bool:
        return self.realized.is_zero()


def _act_block(v: ts.SparseTensor, unit: dict, offset: int) -> ts.SparseTensor:
    f = v.f
    out = ts.SparseTensor(v.f, v.n)
    for g, c in unit.items():
        p = list(range(f))
        for i, gi in enumerate(g):
            p[offset + i] = offset + gi
        out = out + ts.act_permutation(p, v, c)
    return out


def _block_traceless(v: ts.SparseTensor, lab: Partition, slots: list[int]) -> ts.SparseTensor:
    """Remove traces inside one block so its internal contractions vanish."""
    if len(slots) < 2:
        return v
    f = v.f
    traced = False
    for i in slots:
        for j in slots:
            if i < j:
                partner = [0] * (2 * f)
                for x in range(f):
                    partner[x], partner[f + x] = f + x, x
                partner[i], partner[j], partner[f + i], partner[f + j] = j, i, f + j, f + i
                if not ts.act_diagram(BrauerDiagram.from_partner(f, partner), v).is_zero():
                    traced = True
    if not traced:
        return v
    k = lab.weight
    cands = [p for w in range(k % 2, k + 1, 2) for p in _partitions(w)]
    return ts.project(v, v.n, lab, cands, slots)


def _partitions(w: int):
    from .symcomb import partitions_of

    return partitions_of(w)


def _realize_factor(l1, l2, m1: int, m2: int, cfg: ComponentConfig, n: int) -> ts.SparseTensor:
    f1 = cfg.f1
    v = cfg.base(n)
    v = _act_block(v, seminormal_unit(l1, m1, 0), 0)
    v = _act_block(v, seminormal_unit(l2, m2, 0), f1)
    v = _block_traceless(v, l1, list(range(f1)))
    return _block_traceless(v, l2, list(range(f1, cfg.f1 + cfg.f2)))


def build_uncoupled(l1, m1: int, l2, m2: int, cfg: ComponentConfig, n: int) -> list[UncoupledVector]:
    """Q_t applied to the matrix-unit image of the base tensor, for every coset."""
    l1, l2 = parse_partition(l1), parse_partition(l2)
    if (l1.weight, l2.weight) != (cfg.f1, cfg.f2):
        raise ValueError("configuration does not match the block sizes")
    mod = _module(l1, l2, n)
    base = _realize_factor(l1, l2, m1, m2, cfg, n)
    return [
        UncoupledVector((c.rank, m1, m2), c.word(), ts.act_diagram(c.diagram, base))
        for c in mod.cosets
    ]


def uncoupled_basis(l1, l2, cfg: ComponentConfig, n: int) -> list[UncoupledVector]:
    """All uncoupled vectors ordered by (coset rank, m1, m2)."""
    l1, l2 = parse_partition(l1), parse_partition(l2)
    mod = _module(l1, l2, n)
    vecs = [
        u
        for a in range(mod.d1)
        for b in range(mod.d2)
        for u in build_uncoupled(l1, a, l2, b, cfg, n)
    ]
    return sorted(vecs, key=lambda u: u.key)


@dataclass
class NormMatrix:
    keys: list[Key]
    entries: list[list[Fraction]]

    @property
    def size(self) -> int:
        return len(self.keys)

    def rank(self) -> int:
        rows = [{j: v for j, v in enumerate(row) if v} for row in self.entries]
        return rank(rows)

    @property
    def null_dimension(self) -> int:
        return self.size - self.rank()

    def form(self, x: dict, y: dict) -> Fraction:
        idx = {k: i for i, k in enumerate(self.keys)}
        total = Fraction(0)
        for k1, c1 in x.items():
            row = self.entries[idx[k1]]
            for k2, c2 in y.items():
                total += c1 * c2 * row[idx[k2]]
        return total

    def to_json(self) -> dict:
        return {"keys": [list(k) for k in self.keys], "entries": [[str(x) for x in r] for r in self.entries]}


def norm_matrix(vectors: list[UncoupledVector]) -> NormMatrix:
    ent = [[_frac(ts.inner(u.realized, v.realized)) for v in vectors] for u in vectors]
    return NormMatrix([u.key for u in vectors], ent)


# ---------------------------------------------------------------------------
# coupled vectors


def _phase_order(key: Key):
    t, a, b = key
    return (a, b, t)


@dataclass
class CoupledVector:
    """One D_f(n) coupled basis vector.

    ``coefficients`` are scaled so the first nonzero one in (m1, m2, coset)
    order is 1; ``norm`` is their squared length under the configuration's
    norm matrix; ``realized`` is the matching (unnormalized) tensor.
    """

    l1: Partition
    l2: Partition
    n: int
    cfg: ComponentConfig
    lam: Partition
    tau: tuple[Partition, ...]
    rho: int
    coefficients: dict
    norm: Fraction
    realized: ts.SparseTensor

    @property
    def null(self) -> bool:
        return self.norm == 0

    def idc(self) -> dict:
        """Normalized coefficients as SignedSquare values."""
        if self.null:
            raise ValueError("null vector cannot be normalized")
        return {
            k: SignedSquare(1 if c > 0 else -1, c * c / self.norm)
            for k, c in sorted(self.coefficients.items())
        }

    @property
    def label(self) -> str:
        return str(self.lam) + "".join(str(t) for t in self.tau[:-1])

    def to_json(self) -> dict:
        coeffs = []
        normal = None if self.null else self.idc()
        for k, c in sorted(self.coefficients.items()):
            t, a, b = k
            coeffs.append(
                {
                    "m1": a,
                    "m2": b,
                    "coset_rank": t,
                    "value": str(c),
                    "normalized": None if normal is None else str(normal[k]),
                }
            )
        return {
            "coupling": f"{self.l1}x{self.l2}",
            "n": self.n,
            "cfg": self.cfg.describe(),
            "lambda": str(self.lam),
            "tau_chain": [str(t) for t in self.tau],
            "rho": self.rho,
            "norm": str(self.norm),
            "null": self.null,
            "coefficients": coeffs,
        }


def _realize(vec: dict, uncoupled: dict) -> ts.SparseTensor:
    some = next(iter(uncoupled.values())).realized
    out = ts.SparseTensor(some.f, some.n)
    for k, c in vec.items():
        out = out + uncoupled[k].realized.scale(mpq(c.numerator, c.denominator))
    return out


def _gram_schmidt(vectors: list[dict], nm: NormMatrix) -> list[dict]:
    out: list[dict] = []
    for v in vectors:
        for u in out:
            uu = nm.form(u, u)
            if uu:
                c = nm.form(u, v) / uu
                v = {k: x for k in set(v) | set(u) if (x := v.get(k, 0) - c * u.get(k, 0))}
        out.append(v)
    return out


def _fix_phase(vec: dict) -> dict:
    lead = vec[min(vec, key=_phase_order)]
    return {k: v / lead for k, v in vec.items()}


def _independent(vectors) -> list[dict]:
    echelon: list = []
    return [v for v in vectors if v and _add_to_echelon(echelon, v, lambda k: k)]


@lru_cache(maxsize=None)
def _isotypic(l1, l2, n: int, lam: Partition) -> tuple:
    mod = _module(l1, l2, n)
    return tuple(
        _independent(mod.project(mod.basis_vector(k), mod.f, lam, mod.support()) for k in mod.keys)
    )


def chain_space(l1, l2, n: int, lam, tau) -> list[dict]:
    """Independent spanning set of the (lam, tau) eigenspace, in uncoupled order."""
    l1, l2, lam = parse_partition(l1), parse_partition(l2), parse_partition(lam)
    mod = _module(l1, l2, n)
    vecs = list(_isotypic(l1, l2, n, lam))
    prev = lam
    for i, mu in enumerate(tau):
        m = mod.f - 1 - i
        vecs = _independent(mod.project(v, m, mu, _neighbours(prev, m)) for v in vecs)
        prev = mu
    return vecs


def derive_coupled(l1, l2, cfg: ComponentConfig, n: int) -> list[CoupledVector]:
    """Coupled basis of the induced module, ordered by lambda, then tau, then rho."""
    l1, l2 = parse_partition(l1), parse_partition(l2)
    mod = _module(l1, l2, n)
    uncoupled = {u.key: u for u in uncoupled_basis(l1, l2, cfg, n)}
    nm = norm_matrix(list(uncoupled.values()))
    expected = newell_littlewood_product(l1, l2)
    out = []
    for lam in sorted(expected, key=lambda p: (-p.weight, tuple(-x for x in p))):
        for tau in tau_chains(lam, mod.f):
            found = chain_space(l1, l2, n, lam, tau)
            if len(found) != expected[lam]:
                raise ConsistencyError(
                    f"{l1}x{l2} -> {lam} {tau}: eigenspace dimension {len(found)}, expected {expected[lam]}"
                )
            for rho, vec in enumerate(_gram_schmidt(found, nm)):
                vec = _fix_phase(vec)
                out.append(
                    CoupledVector(l1, l2, n, cfg, lam, tau, rho, vec, nm.form(vec, vec), _realize(vec, uncoupled))
                )
    return out


def observed_multiplicities(l1, l2, n: int) -> dict:
    """Dimension of each (lambda, tau) eigenspace, checked equal across tau."""
    l1, l2 = parse_partition(l1), parse_partition(l2)
    mod = _module(l1, l2, n)
    out = {}
    for lam in mod.support():
        dims = {len(chain_space(l1, l2, n, lam, tau)) for tau in tau_chains(lam, mod.f)}
        if len(dims) != 1:
            raise ConsistencyError(f"{lam}: chain eigenspaces have dimensions {sorted(dims)}")
        out[lam] = dims.pop()
    total = rank([mod.basis_vector(k) for k in mod.keys])
    if total != sum(out[lam] * len(tau_chains(lam, mod.f)) for lam in out):
        raise ConsistencyError("isotypic components do not exhaust the module")
    return out


# ---------------------------------------------------------------------------
# intertwining check


@dataclass
class IntertwiningReport:
    coupling: str
    n: int
    matrices: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    max_violation: Fraction = Fraction(0)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _flag(self, what: str, size):
        size = abs(_frac(size))
        self.violations.append(what)
        self.max_violation = max(self.max_violation, size)

    def to_json(self) -> dict:
        return {
            "coupling": self.coupling,
            "n": self.n,
            "ok": self.ok,
            "max_violation": str(self.max_violation),
            "violations": self.violations,
            "matrices": {g: [[str(x) for x in row] for row in m] for g, m in self.matrices.items()},
        }


def verify_intertwining(coupled: list[CoupledVector], n: int | None = None) -> IntertwiningReport:
    """Generator matrices in the coupled basis: solvable, block diagonal, orthogonal for g_i."""
    first = coupled[0]
    n = first.n if n is None else n
    mod = _module(first.l1, first.l2, n)
    uncoupled = {u.key: u for u in uncoupled_basis(first.l1, first.l2, first.cfg, n)}
    rep = IntertwiningReport(f"{first.l1}x{first.l2}", n)
    cols = [c.coefficients for c in coupled]
    solver = _Solver(cols)
    if rank(cols) != len(cols):
        rep._flag("coupled vectors are linearly dependent", 1)
    for which in ("g", "e"):
        for i in range(1, mod.f):
            d = generator(mod.f, which, i)
            name = f"{which}{i}"
            mat = [[Fraction(0)] * len(coupled) for _ in coupled]
            for j, cv in enumerate(coupled):
                img = mod.act(d, cv.coefficients)
                x = solver.solve(img)
                if x is None:
                    rep._flag(f"{name}|{cv.label}> leaves the coupled span", 1)
                    continue
                for r, val in enumerate(x):
                    mat[r][j] = val
                    other = coupled[r]
                    if val and (other.lam, other.rho) != (cv.lam, cv.rho):
                        rep._flag(f"{name}: <{other.label}|{cv.label}> = {val} crosses blocks", val)
                diff = ts.act_diagram(d, cv.realized) - _realize(img, uncoupled)
                if not diff.is_zero():
                    biggest = max(abs(_frac(c)) for c in diff.terms.values())
                    rep._flag(f"{name}|{cv.label}>: tensor action differs from module action", biggest)
            rep.matrices[name] = mat
            if which == "g":
                _check_orthogonal(rep, name, mat, coupled)
    return rep


def _check_orthogonal(rep: IntertwiningReport, name: str, mat, coupled):
    """M^T diag(norm) M = diag(norm) on non-null vectors."""
    live = [j for j, c in enumerate(coupled) if not c.null]
    for b in live:
        for c in live:
            if b > c:
                continue
            s = sum(mat[a][b] * mat[a][c] * coupled[a].norm for a in live)
            want = coupled[b].norm if b == c else 0
            if s != want:
                rep._flag(f"{name} is not orthogonal at ({coupled[b].label}, {coupled[c].label})", s - want)


# ---------------------------------------------------------------------------
# reference case lists


@dataclass
class IdcCheck:
    label: str
    status: str  # "match", "relabelled", "mismatch" or "missing"
    detail: str = ""


@lru_cache(maxsize=None)
def load_idc_cases() -> dict:
    """Bundled unnormalized IDC lists, keyed by case number."""
    import json
    from importlib.resources import files

    data = json.loads(files("brauer_cgc").joinpath("fixtures/idc_cases.json").read_text())
    return {c["case"]: c for c in data["cases"]}


def _parse_coupling(text: str):
    left, right = text.split("x")
    return parse_partition(left), parse_partition(right)


def _proportional(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        return False
    if not a:
        return True
    k = next(iter(a))
    return all(a[x] * b[k] == a[k] * b[x] for x in a)


def _listed_basis(spec: dict, mod: InducedModule, n: int) -> dict:
    """Module vector for each listed basis index.

    Without a ``basis`` entry index i is coset i-1 on the first tableaux.
    Otherwise entry i is a generator word applied to a tableau vector, scaled
    into Young's orthogonal form when ``tableau_form`` asks for it.
    """
    from .brauerdiag import word_to_diagram
    from .exactnum import Surd
    from .symcomb import orthogonal_scale_squared

    if "basis" not in spec:
        return {i: mod.basis_vector((i - 1, 0, 0)) for i in range(1, len(mod.cosets) + 1)}
    f = mod.l1.weight + mod.l2.weight
    out = {}
    for i, (word, m1) in enumerate(spec["basis"], start=1):
        vec = mod.basis_vector((0, m1, 0))
        if word:
            d, loops = word_to_diagram(f, word)
            vec = {k: x * Fraction(n) ** loops for k, x in mod.act(d, vec).items()}
        if spec.get("tableau_form") == "orthogonal":
            scale = Surd.sqrt(orthogonal_scale_squared(mod.l1, m1))
            vec = {k: scale * x for k, x in vec.items()}
        out[i] = vec
    return out


def check_idc_case(case: int, n: int, cfg_policy: str = "generic", printed: bool = False) -> list[IdcCheck]:
    """Compare each listed vector, up to scale, with the derived one of the same chain.

    With ``printed`` the uncorrected form is used for entries that carry one.
    Coefficients may contain square roots; they are evaluated exactly at ``n``.
    """
    from .exactnum import evaluate_surd

    spec = load_idc_cases()[case]
    l1, l2 = _parse_coupling(spec["coupling"])
    mod = _module(l1, l2, n)
    cfg = ComponentConfig.from_policy(cfg_policy, l1.weight, l2.weight, n)
    derived = derive_coupled(l1, l2, cfg, n)
    basis = _listed_basis(spec, mod, n)
    out = []
    for vec in spec["vectors"]:
        listed: dict = {}
        terms = vec.get("printed", vec["terms"]) if printed else vec["terms"]
        for idx, text in terms:
            c = evaluate_surd(text, n)
            for k, x in basis[idx].items():
                listed[k] = c * x + listed.get(k, 0)
        listed = {k: x for k, x in listed.items() if x}
        lam = parse_partition(vec["lambda"])
        tau = tuple(parse_partition(t) for t in vec["tau"])
        same = [cv for cv in derived if cv.lam == lam and cv.tau[:-1] == tau]
        if not same:
            out.append(IdcCheck(vec["label"], "missing", "no derived vector with this chain"))
        elif _proportional(listed, same[0].coefficients):
            out.append(IdcCheck(vec["label"], "match"))
        else:
            hits = [cv.label for cv in derived if cv.lam == lam and _proportional(listed, cv.coefficients)]
            if hits:
                out.append(IdcCheck(vec["label"], "relabelled", f"proportional to {hits[0]}"))
            else:
                out.append(IdcCheck(vec["label"], "mismatch", str({k: str(v) for k, v in same[0].coefficients.items()})))
    return out
