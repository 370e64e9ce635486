"""Vector spaces on which the canonical chain Casimirs act.

Two interchangeable realizations share one interface:

* :class:`FullSpace` is the plain tensor space (Q^n)^{(x)f} at fixed n.
* :class:`InvariantSpace` is the subspace of tensors invariant under SO(m0)
  for some m0 < n. A slot either carries a label a_j with j > m0 or belongs
  to an invariant pairing sum_{u,v <= m0} eta(u,v) |..u..v..> with another
  slot. Its size does not grow with n, which is what makes sampling ISFs at
  many ranks cheap.

Vectors are plain ``{key: mpq}`` dicts. In an invariant key, entry ``j > 0``
is the label a_j and entry ``-(s+1)`` marks a slot paired with slot ``s``.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations, product
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import tensorspace as ts
from .symcomb import Partition, parse_partition

Vec = dict


def clean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c}


def lin(a, u: Vec, b, v: Vec) -> Vec:
    out: dict = defaultdict(mpq)
    if a:
        for k, c in u.items():
            out[k] += a * c
    if b:
        for k, c in v.items():
            out[k] += b * c
    return clean(out)


def scale(a, v: Vec) -> Vec:
    a = mpq(a)
    return {k: a * c for k, c in v.items()} if a else {}


def perfect_matchings(items: Sequence[int]):
    if not items:
        yield ()
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            yield ((a, items[i]),) + m


class FullSpace:
    """All tensors at rank n; keys are label tuples as in :mod:`tensorspace`."""

    def __init__(self, f: int, n: int):
        self.f, self.n = f, n

    def casimir(self, m: int, v: Vec, slots=None) -> Vec:
        t = ts.SparseTensor(self.f, self.n)
        t.terms = v
        return ts.chain_casimir(m, t, slots).terms

    def permute(self, p: Sequence[int], v: Vec) -> Vec:
        out: dict = defaultdict(mpq)
        for k, c in v.items():
            nk = [0] * self.f
            for j, x in enumerate(k):
                nk[p[j]] = x
            out[tuple(nk)] += c
        return clean(out)

    def inner(self, u: Vec, v: Vec):
        if len(u) > len(v):
            u, v = v, u
        acc = mpq(0)
        for k, c in u.items():
            d = v.get(k)
            if d is not None:
                acc += c * d
        return acc

    def expand(self, v: Vec) -> Vec:
        return v

    eigenvalue = staticmethod(ts.casimir_eigenvalue)

    def seed_keys(self, window: Sequence[int]) -> list:
        return list(product(window, repeat=self.f))

    def sign_labels(self, m0: int) -> list[int]:
        return ts.labels(self.n)


class UnitarySpace:
    """Tensors over a window of labels with the unitary-group chain.

    At level m the slots holding labels <= m carry a U(m) tensor, and the sum
    of their transpositions acts on the U(m) irrep mu by its content. Adding
    ``weight`` per inside slot separates irreps of different sizes. Nothing is
    ever contracted, so this is the symmetric-group induction model.
    """

    weight = 100

    def __init__(self, f: int, n: int):
        self.f, self.n = f, n

    def eigenvalue(self, lab, m: int) -> int:
        lab = parse_partition(lab)
        return sum(j - i for i, j in lab.cells()) + self.weight * lab.weight

    def casimir(self, m: int, v: Vec, slots=None) -> Vec:
        slots = tuple(range(self.f)) if slots is None else tuple(slots)
        out: dict = defaultdict(mpq)
        for k, c in v.items():
            ins = [s for s in slots if k[s] <= m]
            out[k] += self.weight * len(ins) * c
            for a, b in combinations(ins, 2):
                nk = list(k)
                nk[a], nk[b] = nk[b], nk[a]
                out[tuple(nk)] += c
        return clean(out)

    permute = FullSpace.permute
    inner = FullSpace.inner
    expand = FullSpace.expand
    seed_keys = FullSpace.seed_keys


class InvariantSpace:
    """SO(m0)-invariant tensors at rank n in the pairing basis.

    The pairing tensors on a fixed set of slots are linearly independent as
    long as m0 is at least the number of paired slots.
    """

    def __init__(self, f: int, n: int, m0: int):
        if not 4 <= m0 < n or m0 < f:
            raise ValueError(f"invariant level {m0} unusable for f={f}, n={n}")
        self.f, self.n, self.m0 = f, n, m0

    # keys ------------------------------------------------------------------

    def top_labels(self) -> list[int]:
        return list(range(self.n, self.m0, -1))

    def basis(self) -> list[tuple]:
        f = self.f
        out = []
        for size in range(0, f + 1, 2):
            for low in combinations(range(f), size):
                highs = [s for s in range(f) if s not in low]
                for match in perfect_matchings(list(low)):
                    for lab in product(self.top_labels(), repeat=len(highs)):
                        key = [0] * f
                        for s, x in zip(highs, lab):
                            key[s] = x
                        for a, b in match:
                            key[a], key[b] = -(b + 1), -(a + 1)
                        out.append(tuple(key))
        return out

    eigenvalue = staticmethod(ts.casimir_eigenvalue)

    # operators ---------------------------------------------------------------

    def permute(self, p: Sequence[int], v: Vec) -> Vec:
        out: dict = defaultdict(mpq)
        f = self.f
        for k, c in v.items():
            nk = [0] * f
            for j, x in enumerate(k):
                nk[p[j]] = x if x > 0 else -(p[-x - 1] + 1)
            out[tuple(nk)] += c
        return clean(out)

    def casimir(self, m: int, v: Vec, slots=None) -> Vec:
        """Chain Casimir of SO(m), m >= m0, restricted to ``slots``."""
        if not self.m0 <= m <= self.n:
            raise ValueError(f"level {m} below the invariant level {self.m0}")
        slots = tuple(range(self.f)) if slots is None else tuple(slots)
        m0 = self.m0
        tops = list(range(m, m0, -1))
        out: dict = defaultdict(mpq)
        for k, c in v.items():
            ins = [s for s in slots if k[s] < 0 or k[s] <= m]
            if not ins:
                continue
            diag = (m - 1) * len(ins)
            c2 = 2 * c
            for a, b in combinations(ins, 2):
                x, y = k[a], k[b]
                # transposition of slots a and b
                if x == y:
                    diag += 2
                elif x < 0 and -x - 1 == b:
                    diag += 2
                else:
                    out[self._swapped(k, a, b)] += c2
                # contraction of slots a and b, then re-expansion
                if x > 0 and y > 0:
                    if x != y:
                        continue
                    h, rest = 1, list(k)
                elif x < 0 and y < 0:
                    if -x - 1 == b:
                        h, rest = m0, list(k)
                    else:
                        kk, ll = -x - 1, -y - 1
                        rest = list(k)
                        rest[kk], rest[ll] = -(ll + 1), -(kk + 1)
                        h = 1
                else:
                    continue
                w = -c2 * h
                for t in tops:
                    rest[a] = rest[b] = t
                    out[tuple(rest)] += w
                rest[a], rest[b] = -(b + 1), -(a + 1)
                out[tuple(rest)] += w
            out[k] += diag * c
        return clean(out)

    @staticmethod
    def _swapped(k, a, b):
        nk = list(k)
        x, y = k[a], k[b]
        nk[a], nk[b] = y, x
        # partners of moved pair markers now point at the other slot
        for s, new in ((a, y), (b, x)):
            if new < 0:
                partner = -new - 1
                if partner in (a, b):
                    partner = b if partner == a else a
                    nk[s] = -(partner + 1)
                nk[partner] = -(s + 1)
        return tuple(nk)

    # geometry --------------------------------------------------------------

    def _signature(self, k):
        return tuple(x if x > 0 else 0 for x in k)

    def inner(self, u: Vec, v: Vec):
        groups: dict = defaultdict(list)
        for k, c in v.items():
            groups[self._signature(k)].append((k, c))
        acc = mpq(0)
        for k, c in u.items():
            for k2, d in groups.get(self._signature(k), ()):
                acc += c * d * self.m0 ** _loops(k, k2)
        return acc

    def sign_labels(self, m0: int | None = None) -> list[int]:
        """Labels enough to expose every nonzero coefficient."""
        lows = [self.m0 - i for i in range(max(1, self.f // 2))]
        return self.top_labels() + lows

    def expand(self, v: Vec, labels: Sequence[int] | None = None) -> Vec:
        """Coefficients on ordinary tensor keys whose labels lie in ``labels``."""
        labels = self.sign_labels() if labels is None else list(labels)
        lows = [x for x in labels if x <= self.m0]
        out: dict = defaultdict(mpq)
        for k, c in v.items():
            pairs = [(s, -x - 1) for s, x in enumerate(k) if x < 0 and s < -x - 1]
            for choice in product(lows, repeat=len(pairs)):
                nk = list(k)
                for (a, b), x in zip(pairs, choice):
                    nk[a] = nk[b] = x
                out[tuple(nk)] += c
        return clean(out)


    def embed(self, v: Vec, lower: "InvariantSpace") -> Vec:
        """The same tensors viewed in a space with a smaller invariant level.

        Each pairing sum over labels <= m0 splits into the pairing at the new
        level plus the diagonal terms a_j a_j for the labels in between.
        """
        if lower.f != self.f or lower.n != self.n or lower.m0 > self.m0:
            raise ValueError("target space must share f, n and have a lower invariant level")
        freed = list(range(self.m0, lower.m0, -1))
        out: dict = defaultdict(mpq)
        for k, c in v.items():
            pairs = [(s, -x - 1) for s, x in enumerate(k) if x < 0 and s < -x - 1]
            for choice in product([None] + freed, repeat=len(pairs)):
                nk = list(k)
                for (a, b), x in zip(pairs, choice):
                    if x is not None:
                        nk[a] = nk[b] = x
                out[tuple(nk)] += c
        return clean(out)

    def rotate(self, v: Vec, rotation: dict) -> Vec:
        """Act with an orthogonal map on the top labels.

        ``rotation`` sends a label to ``{label: coefficient}``; labels it does
        not mention and all pair markers are left alone.
        """
        out: dict = defaultdict(mpq)
        for k, c in v.items():
            images = [rotation.get(x, {x: 1}) if x > 0 else {x: 1} for x in k]
            for combo in product(*(list(im.items()) for im in images)):
                coeff = c
                for _, a in combo:
                    coeff *= a
                out[tuple(x for x, _ in combo)] += coeff
        return clean(out)


def _loops(k1, k2) -> int:
    """Closed loops formed by the pairings of two keys on the same slots."""
    seen = set()
    loops = 0
    for s, x in enumerate(k1):
        if x > 0 or s in seen:
            continue
        loops += 1
        cur = s
        while True:
            seen.add(cur)
            nxt = -k1[cur] - 1
            seen.add(nxt)
            cur = -k2[nxt] - 1
            if cur == s:
                break
    return loops


# ---------------------------------------------------------------------------
# spectral projection for any space


class DegenerateSpectrumError(ts.DegenerateSpectrumError):
    pass


def project(space, v: Vec, m: int, target, candidates: Iterable, slots=None) -> Vec:
    target = parse_partition(target)
    ct = space.eigenvalue(target, m)
    others = set()
    for lab in candidates:
        lab = parse_partition(lab)
        if lab == target:
            continue
        c = space.eigenvalue(lab, m)
        if c == ct:
            raise DegenerateSpectrumError(f"{lab} and {target} share SO({m}) eigenvalue {ct}")
        others.add(c)
    out = v
    for c in sorted(others):
        if not out:
            break
        cv = space.casimir(m, out, slots)
        if _is_eigen(cv, out, ct):
            break
        out = lin(mpq(1, ct - c), cv, mpq(-c, ct - c), out)
    return out


def _is_eigen(cv: Vec, v: Vec, c) -> bool:
    return len(cv) == len(v) and all(cv.get(k) == x * c for k, x in v.items())


def decompose(space, v: Vec, m: int, labels: Iterable, slots=None) -> dict:
    """Split v by SO(m) Casimir eigenvalue; returns {label: component}."""
    labs = [parse_partition(x) for x in labels]
    evs: dict = {}
    for lab in labs:
        c = space.eigenvalue(lab, m)
        if c in evs:
            raise DegenerateSpectrumError(f"{lab} and {evs[c]} share SO({m}) eigenvalue {c}")
        evs[c] = lab
    vals = sorted(evs)
    krylov = [v]
    for _ in range(len(vals) - 1):
        krylov.append(space.casimir(m, krylov[-1], slots))
    out = {}
    for c in vals:
        coeffs = [mpq(1)]
        denom = mpq(1)
        for d in vals:
            if d == c:
                continue
            new = [mpq(0)] * (len(coeffs) + 1)
            for i, a in enumerate(coeffs):
                new[i + 1] += a
                new[i] -= a * d
            coeffs = new
            denom *= c - d
        acc: dict = defaultdict(mpq)
        for a, vec in zip(coeffs, krylov):
            if a:
                a = a / denom
                for k, x in vec.items():
                    acc[k] += a * x
        comp = clean(acc)
        if comp:
            out[evs[c]] = comp
    return out


def leading_sign(space, v: Vec) -> int:
    """Sign of the first nonzero ordinary-tensor coefficient in canonical order."""
    full = space.expand(v)
    if not full:
        return 0
    k = min(full, key=ts.key_order)
    return 1 if full[k] > 0 else -1


def between(lam) -> list[Partition]:
    """Labels of SO(m-1) inside [lam] of SO(m): lam_i >= nu_i >= lam_{i+1}."""
    lam = parse_partition(lam)
    ranges = [range(lam.part(i + 1), lam[i] + 1) for i in range(len(lam))]
    return [Partition(p) for p in product(*ranges)]
