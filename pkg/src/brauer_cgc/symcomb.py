"""Symmetric-group combinatorics.

Partitions, standard tableaux in Yamanouchi page order, Young's orthogonal
form, matrix units of the group algebra, Littlewood-Richardson and
Newell-Littlewood multiplicities, and the Brauer branching rule.

Permutations are tuples ``p`` acting on tensor slots by sending slot ``j`` to
slot ``p[j]``; the product ``p*q`` applies ``q`` first.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterator

from .exactnum import SignedSquare

log = logging.getLogger(__name__)

Perm = tuple


class Partition(tuple):
    """Weakly decreasing parts with trailing zeros removed."""

    def __new__(cls, parts=()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def rows(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        return self[i] if i < len(self) else 0

    def conjugate(self) -> "Partition":
        return Partition(sum(1 for p in self if p > j) for j in range(self.part(0)))

    def cells(self) -> list[tuple[int, int]]:
        return [(r, c) for r, p in enumerate(self) for c in range(p)]

    def __str__(self):
        return "[" + ",".join(str(p) for p in self) + "]" if self else "[0]"

    def __repr__(self):
        return f"Partition({str(self)})"

    def compact(self) -> str:
        """Short label such as ``[21^2]`` or ``[0]``."""
        if not self:
            return "[0]"
        out = []
        i = 0
        while i < len(self):
            j = i
            while j < len(self) and self[j] == self[i]:
                j += 1
            run = j - i
            out.append(str(self[i]) + (f"^{run}" if run > 1 else ""))
            i = j
        return "[" + "".join(out) + "]"


def parse_partition(text) -> Partition:
    """Accept ``[2,1]``, ``[21]``, ``[1^2]``, ``[21^2]``, ``[0]`` or a sequence."""
    if isinstance(text, Partition):
        return text
    if not isinstance(text, str):
        return Partition(text)
    body = text.strip().strip("[]").replace("{", "").replace("}", "").replace(" ", "")
    if body in ("", "0"):
        return Partition()
    if "," in body:
        return Partition(int(x) for x in body.split(","))
    parts = []
    for digit, exp in re.findall(r"(\d)(?:\^(\d+))?", body):
        parts.extend([int(digit)] * (int(exp) if exp else 1))
    return Partition(parts)


@lru_cache(maxsize=None)
def partitions_of(k: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of k in reverse lexicographic order."""
    if max_part is None:
        max_part = k
    if k == 0:
        return (Partition(),)
    out = []
    for first in range(min(k, max_part), 0, -1):
        for rest in partitions_of(k - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def contains(big: Partition, small: Partition) -> bool:
    return all(big.part(i) >= small.part(i) for i in range(len(small)))


# ---------------------------------------------------------------------------
# standard tableaux


@dataclass(frozen=True)
class StandardTableau:
    shape: Partition
    rows: tuple[tuple[int, ...], ...]
    index: int

    def row_of(self, k: int) -> int:
        for r, row in enumerate(self.rows):
            if k in row:
                return r
        raise KeyError(k)

    def position(self, k: int) -> tuple[int, int]:
        for r, row in enumerate(self.rows):
            if k in row:
                return r, row.index(k)
        raise KeyError(k)

    def content(self, k: int) -> int:
        r, c = self.position(k)
        return c - r

    def yamanouchi(self) -> tuple[int, ...]:
        """Row indices (1-based) of f, f-1, ..., 1."""
        f = self.shape.weight
        return tuple(self.row_of(k) + 1 for k in range(f, 0, -1))

    def __str__(self):
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self.rows) + "]"


def _fillings(shape: Partition) -> Iterator[tuple[tuple[int, ...], ...]]:
    f = shape.weight
    rows: list[list[int]] = [[] for _ in shape]

    def rec(k):
        if k > f:
            yield tuple(tuple(r) for r in rows)
            return
        for r in range(len(shape)):
            if len(rows[r]) < shape[r] and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(k)
                yield from rec(k + 1)
                rows[r].pop()

    yield from rec(1)


def enumerate_syt(shape) -> tuple[StandardTableau, ...]:
    return _enumerate_syt(parse_partition(shape))


@lru_cache(maxsize=None)
def _enumerate_syt(shape: Partition) -> tuple[StandardTableau, ...]:
    fills = list(_fillings(shape))
    tmp = [StandardTableau(shape, rows, -1) for rows in fills]
    tmp.sort(key=lambda t: t.yamanouchi(), reverse=True)
    return tuple(StandardTableau(shape, t.rows, i) for i, t in enumerate(tmp))


def hook_length_count(shape) -> int:
    shape = parse_partition(shape)
    conj = shape.conjugate()
    prod = 1
    for r, c in shape.cells():
        prod *= (shape[r] - c - 1) + (conj[c] - r - 1) + 1
    return math.factorial(shape.weight) // prod


# ---------------------------------------------------------------------------
# Young's orthogonal form


@dataclass(frozen=True)
class OrthoRep:
    """Young's orthogonal form; ``generators[i]`` is the matrix of s_{i+1}."""

    shape: Partition
    tableaux: tuple[StandardTableau, ...]
    generators: tuple[tuple[tuple[SignedSquare, ...], ...], ...]


def _swap_tableau(t: StandardTableau, i: int, table) -> int | None:
    """Index of the tableau with i and i+1 exchanged, if standard."""
    rows = tuple(tuple(i + 1 if x == i else i if x == i + 1 else x for x in row) for row in t.rows)
    return table.get(rows)


@lru_cache(maxsize=None)
def _seminormal(shape: Partition):
    """Rational generator matrices S and weights w with rho = W^1/2 S W^-1/2."""
    tabs = enumerate_syt(shape)
    f = shape.weight
    dim = len(tabs)
    lookup = {t.rows: t.index for t in tabs}
    weights: list[Fraction | None] = [None] * dim
    weights[0] = Fraction(1)
    edges = []
    for i in range(1, f):
        for t in tabs:
            u = _swap_tableau(t, i, lookup)
            if u is not None:
                d = t.content(i + 1) - t.content(i)
                edges.append((t.index, u, d))
    changed = True
    while changed:
        changed = False
        for a, b, d in edges:
            if weights[a] is not None and weights[b] is None:
                factor = 1 - Fraction(1, d * d)
                weights[b] = weights[a] * factor if d < 0 else weights[a] / factor
                changed = True
    for a, b, d in edges:
        factor = 1 - Fraction(1, d * d)
        expect = weights[a] * factor if d < 0 else weights[a] / factor
        if weights[b] != expect:
            raise ArithmeticError(f"inconsistent seminormal weights for {shape}")
    gens = []
    for i in range(1, f):
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for t in tabs:
            d = t.content(i + 1) - t.content(i)
            m[t.index][t.index] = Fraction(1, d)
            u = _swap_tableau(t, i, lookup)
            if u is not None:
                # orthogonal entry sqrt(1-1/d^2) conjugated by the weights
                r = (1 - Fraction(1, d * d)) * weights[t.index] / weights[u]
                m[u][t.index] = _exact_sqrt(r)
        gens.append(m)
    return tabs, tuple(weights), tuple(gens)


def _exact_sqrt(r: Fraction) -> Fraction:
    a, b = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if a * a != r.numerator or b * b != r.denominator:
        raise ArithmeticError(f"{r} is not a rational square")
    return Fraction(a, b)


def young_orthogonal_rep(shape) -> OrthoRep:
    return _young_orthogonal_rep(parse_partition(shape))


@lru_cache(maxsize=None)
def _young_orthogonal_rep(shape: Partition) -> OrthoRep:
    if shape.weight < 2:
        raise ValueError("shape needs at least two boxes")
    tabs, w, gens = _seminormal(shape)
    out = []
    for m in gens:
        dim = len(m)
        out.append(
            tuple(
                tuple(SignedSquare.from_rational(m[a][b]) * SignedSquare(1, w[a] / w[b]) if m[a][b] else SignedSquare.zero()
                      for b in range(dim))
                for a in range(dim)
            )
        )
    return OrthoRep(shape, tabs, tuple(out))


# ---------------------------------------------------------------------------
# permutations and the group algebra


def identity_perm(f: int) -> Perm:
    return tuple(range(f))


def transposition(f: int, i: int) -> Perm:
    """The adjacent transposition s_i (1-based), swapping slots i and i+1."""
    p = list(range(f))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def compose(p: Perm, q: Perm) -> Perm:
    """p*q: apply q, then p."""
    return tuple(p[q[j]] for j in range(len(q)))


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for j, pj in enumerate(p):
        inv[pj] = j
    return tuple(inv)


@lru_cache(maxsize=None)
def _seminormal_all(shape: Partition) -> dict:
    """Rational seminormal matrices for every permutation."""
    tabs, _, gens = _seminormal(shape)
    f = shape.weight
    dim = len(tabs)
    ident = [[Fraction(int(a == b)) for b in range(dim)] for a in range(dim)]
    mats = {identity_perm(f): ident}
    frontier = [identity_perm(f)]
    while frontier:
        nxt = []
        for q in frontier:
            for i in range(1, f):
                p = compose(transposition(f, i), q)
                if p not in mats:
                    mats[p] = _matmul(gens[i - 1], mats[q])
                    nxt.append(p)
        frontier = nxt
    return mats


def _matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][l] * b[l][j] for l in range(k) if a[i][l]), Fraction(0)) for j in range(m)] for i in range(n)]


def _squarefree_split(r: Fraction) -> tuple[Fraction, int]:
    """Return (q, s) with sqrt(r) = q*sqrt(s), s a squarefree positive integer."""
    if r <= 0:
        raise ValueError("radicand must be positive")
    x = r.numerator * r.denominator
    s, q, p = 1, 1, 2
    while p * p <= x:
        while x % (p * p) == 0:
            x //= p * p
            q *= p
        if x % p == 0:
            x //= p
            s *= p
        p += 1
    s *= x
    return Fraction(q, r.denominator), s


class GroupAlgebraElement:
    """sqrt(radical) * sum_g c_g g with rational c_g and squarefree radical."""

    __slots__ = ("f", "terms", "radical")

    def __init__(self, f: int, terms: dict, radical: int = 1):
        self.f = f
        self.terms = {p: Fraction(c) for p, c in terms.items() if c}
        self.radical = radical

    @classmethod
    def scaled(cls, f: int, terms: dict, radicand: Fraction):
        q, s = _squarefree_split(Fraction(radicand))
        return cls(f, {p: c * q for p, c in terms.items()}, s)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        out: dict = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                r = compose(p, q)
                out[r] = out.get(r, 0) + a * b
        return GroupAlgebraElement.scaled(self.f, out, Fraction(self.radical * other.radical))

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.radical != other.radical:
            raise ArithmeticError("cannot add elements with different radicals")
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0) + c
        return GroupAlgebraElement(self.f, out, self.radical)

    def __neg__(self):
        return GroupAlgebraElement(self.f, {p: -c for p, c in self.terms.items()}, self.radical)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def as_signed_squares(self) -> dict:
        return {p: SignedSquare.from_rational(c) * SignedSquare(1, Fraction(self.radical)) for p, c in self.terms.items()}

    def rational_terms(self) -> dict:
        if self.terms and self.radical != 1:
            raise ArithmeticError("element carries an irrational overall factor")
        return dict(self.terms)


@lru_cache(maxsize=None)
def _matrix_unit(shape: Partition, s: int, t: int) -> GroupAlgebraElement:
    tabs, w, _ = _seminormal(shape)
    f = shape.weight
    mats = _seminormal_all(shape)
    scale = Fraction(len(tabs), math.factorial(f))
    terms = {}
    for g, _m in mats.items():
        c = mats[inverse(g)][t][s]
        if c:
            terms[g] = scale * c
    # orthogonal entry (t, s) = seminormal entry * sqrt(w_t / w_s)
    return GroupAlgebraElement.scaled(f, terms, w[t] / w[s])


def seminormal_unit(shape, s: int, t: int) -> dict:
    """Rational seminormal unit E_st as {perm: Fraction}.

    h * E_st = sum_u rho(h)[u][s] * E_ut with rho the seminormal matrices.
    """
    shape = parse_partition(shape)
    if shape.weight == 0:
        return {(): Fraction(1)}
    tabs, _, _ = _seminormal(shape)
    mats = _seminormal_all(shape)
    scale = Fraction(len(tabs), math.factorial(shape.weight))
    return {g: scale * mats[inverse(g)][t][s] for g in mats if mats[inverse(g)][t][s]}


def seminormal_matrix(shape, perm) -> list[list[Fraction]]:
    """Seminormal representation matrix of a permutation."""
    shape = parse_partition(shape)
    if shape.weight == 0:
        return [[Fraction(1)]]
    return _seminormal_all(shape)[tuple(perm)]


def orthogonal_scale_squared(shape, m: int) -> Fraction:
    """Square of the factor taking seminormal unit vector m to the orthogonal one.

    Orthogonal unit m is sqrt(w_0 / w_m) times seminormal unit m, with w the
    seminormal weights.
    """
    shape = parse_partition(shape)
    if shape.weight == 0:
        return Fraction(1)
    w = _seminormal(shape)[1]
    return w[0] / w[m]


def matrix_unit(shape, s: int, t: int) -> GroupAlgebraElement:
    """e^shape_{st} (0-based tableau indices) as a group-algebra element."""
    shape = parse_partition(shape)
    if shape.weight == 0:
        return GroupAlgebraElement(0, {(): Fraction(1)})
    return _matrix_unit(shape, s, t)


def matrix_unit_element(shape, s: int, t: int) -> dict:
    """e^shape_{st} as a map from permutations to SignedSquare coefficients."""
    return matrix_unit(shape, s, t).as_signed_squares()


def all_permutations(f: int) -> list[Perm]:
    return [tuple(p) for p in permutations(range(f))]


# ---------------------------------------------------------------------------
# Littlewood-Richardson and Newell-Littlewood


def lr_coefficient(lam, mu, nu) -> int:
    """c^lam_{mu nu} by enumerating LR tableaux of shape lam/mu, content nu."""
    return _lr_coefficient(parse_partition(lam), parse_partition(mu), parse_partition(nu))


@lru_cache(maxsize=None)
def _lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    if lam.weight != mu.weight + nu.weight or not contains(lam, mu) or not contains(lam, nu):
        return 0
    cells = [(r, c) for r in range(len(lam)) for c in range(lam[r] - 1, mu.part(r) - 1, -1)]
    if not cells:
        return 1
    fill: dict = {}
    counts = [0] * (len(nu) + 1)

    def rec(k):
        if k == len(cells):
            return 1
        r, c = cells[k]
        total = 0
        for v in range(1, len(nu) + 1):
            if counts[v] >= nu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            right = fill.get((r, c + 1))
            if right is not None and v > right:
                continue
            above = fill.get((r - 1, c))
            if above is not None and v <= above:
                continue
            fill[(r, c)] = v
            counts[v] += 1
            total += rec(k + 1)
            counts[v] -= 1
            del fill[(r, c)]
        return total

    return rec(0)


def newell_littlewood(l1, l2, l) -> int:
    """Multiplicity of [l] in the stable O(n) product [l1] x [l2]."""
    l1, l2, l = parse_partition(l1), parse_partition(l2), parse_partition(l)
    excess = l1.weight + l2.weight - l.weight
    if excess < 0 or excess % 2:
        log.debug("parity violation in Newell-Littlewood %s x %s -> %s", l1, l2, l)
        return 0
    k = excess // 2
    total = 0
    for delta in partitions_of(k):
        if not (contains(l1, delta) and contains(l2, delta)):
            continue
        for alpha in partitions_of(l1.weight - k):
            a = lr_coefficient(l1, alpha, delta)
            if not a:
                continue
            for beta in partitions_of(l2.weight - k):
                b = lr_coefficient(l2, beta, delta)
                if b:
                    total += a * b * lr_coefficient(l, alpha, beta)
    return total


def newell_littlewood_product(l1, l2) -> dict:
    """All [l] with nonzero multiplicity in [l1] x [l2]."""
    l1, l2 = parse_partition(l1), parse_partition(l2)
    out = {}
    top = l1.weight + l2.weight
    for w in range(top % 2, top + 1, 2):
        for lam in partitions_of(w):
            m = newell_littlewood(l1, l2, lam)
            if m:
                out[lam] = m
    return out


def brauer_branching(shape, boxes: int, total: int) -> list[Partition]:
    """Labels adjacent to [shape] in the Brauer chain: one box removed, or added when boxes < total."""
    shape = parse_partition(shape)
    if shape.weight != boxes or not 0 <= boxes <= total:
        raise ValueError("shape is not a valid label for this algebra")
    out = []
    for r in range(len(shape)):
        if shape[r] > shape.part(r + 1):
            out.append(Partition(shape[:r] + (shape[r] - 1,) + shape[r + 1:]))
    if boxes < total:
        for r in range(len(shape) + 1):
            if r == 0 or shape[r - 1] > shape.part(r):
                parts = list(shape) + [0]
                parts[r] += 1
                out.append(Partition(parts))
    return sorted(set(out), key=lambda p: (p.weight, tuple(p)))
