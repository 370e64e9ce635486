"""Tensor realization of D_f(n) on (Q^n)^{(x)f} at fixed integer n.

Component labels are encoded as integers: ``j`` for a_j (3 <= j <= n), and
``+2`` / ``-2`` for the SO(2) pair +a2 / -a2. The metric pairs a_j with
itself (+1) and +a2 with -a2 (-1). Coefficients are :class:`gmpy2.mpq`.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from .brauerdiag import AlgebraElement, BrauerDiagram
from .symcomb import Partition, parse_partition

Key = tuple


def labels(n: int) -> list[int]:
    """All n labels in canonical order: a_n, ..., a_3, +a2, -a2."""
    return list(range(n, 2, -1)) + [2, -2]


def level(x: int) -> int:
    return abs(x)


def label_key(x: int):
    """Sort key independent of n: higher levels first, +a2 before -a2."""
    return (0, -x) if x >= 3 else (1, 0 if x == 2 else 1)


def key_order(key: Key):
    return tuple(label_key(x) for x in key)


def label_str(x: int) -> str:
    if x == 2:
        return "+a2"
    if x == -2:
        return "-a2"
    return f"a{x}"


def parse_label(text: str) -> int:
    t = text.strip()
    if t in ("+a2", "a2+", "+2"):
        return 2
    if t in ("-a2", "a2-", "-2"):
        return -2
    j = int(t.lstrip("a"))
    if j < 3:
        raise ValueError(f"bad component label {text!r}")
    return j


def eta(x: int, y: int) -> int:
    if x >= 3:
        return 1 if x == y else 0
    return -1 if x == -y else 0


def metric_pairs(m: int) -> list[tuple[int, int, int]]:
    """(u, v, eta(u, v)) for every nonzero metric entry with levels <= m."""
    out = [(j, j, 1) for j in range(m, 2, -1)]
    if m >= 2:
        out += [(2, -2, -1), (-2, 2, -1)]
    return out


def casimir_eigenvalue(lam, m: int) -> int:
    lam = parse_partition(lam) if not isinstance(lam, Partition) else lam
    return sum(abs(p) * (abs(p) + m - 2 * (i + 1)) for i, p in enumerate(lam))


class SparseTensor:
    """Exact vector in (Q^n)^{(x)f} stored as {label tuple: mpq}."""

    __slots__ = ("f", "n", "terms")

    def __init__(self, f: int, n: int, terms: dict | None = None):
        self.f = f
        self.n = n
        self.terms = {k: mpq(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, n: int, key: Sequence[int], coeff=1) -> "SparseTensor":
        key = tuple(key)
        for x in key:
            if not (2 <= abs(x) <= n) or x == -1:
                raise ValueError(f"label {x} not valid at rank {n}")
        return cls(len(key), n, {key: coeff})

    def copy(self) -> "SparseTensor":
        out = SparseTensor(self.f, self.n)
        out.terms = dict(self.terms)
        return out

    def _same(self, other):
        if self.f != other.f or self.n != other.n:
            raise ValueError("tensors live in different spaces")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        res = SparseTensor(self.f, self.n)
        res.terms = out
        return res

    def __neg__(self):
        res = SparseTensor(self.f, self.n)
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SparseTensor":
        c = mpq(c)
        res = SparseTensor(self.f, self.n)
        if c:
            res.terms = {k: v * c for k, v in self.terms.items()}
        return res

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return self.f == other.f and self.n == other.n and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: key_order(kv[0]))

    def leading(self):
        """First (key, coefficient) in canonical key order."""
        if not self.terms:
            return None
        k = min(self.terms, key=key_order)
        return k, self.terms[k]

    def to_json(self) -> dict:
        return {",".join(label_str(x) for x in k): str(Fraction(int(c.numerator), int(c.denominator)))
                for k, c in self.sorted_items()}


def _wrap(v: SparseTensor, terms: dict) -> SparseTensor:
    out = SparseTensor(v.f, v.n)
    out.terms = {k: c for k, c in terms.items() if c}
    return out


def act_generator(which: str, i: int, v: SparseTensor) -> SparseTensor:
    if not 1 <= i <= v.f - 1:
        raise ValueError(f"generator index {i} out of range for f={v.f}")
    a, b = i - 1, i
    out: dict = defaultdict(mpq)
    if which == "g":
        for k, c in v.terms.items():
            lk = list(k)
            lk[a], lk[b] = lk[b], lk[a]
            out[tuple(lk)] += c
    elif which == "e":
        pairs = metric_pairs(v.n)
        for k, c in v.terms.items():
            h = eta(k[a], k[b])
            if not h:
                continue
            lk = list(k)
            for u, w, e in pairs:
                lk[a], lk[b] = u, w
                out[tuple(lk)] += h * e * c
    else:
        raise ValueError(f"unknown generator kind {which!r}")
    return _wrap(v, out)


def act_permutation(p: Sequence[int], v: SparseTensor, coeff=1) -> SparseTensor:
    """Slot j of every key moves to slot p[j]."""
    c0 = mpq(coeff)
    out: dict = defaultdict(mpq)
    for k, c in v.terms.items():
        nk = [0] * v.f
        for j, x in enumerate(k):
            nk[p[j]] = x
        out[tuple(nk)] += c * c0
    return _wrap(v, out)


def _diagram_action(d: BrauerDiagram, v: SparseTensor, coeff, out: dict):
    f = v.f
    caps = d.bottom_caps()
    cups = d.top_cups()
    thr = d.through()
    pairs = metric_pairs(v.n)
    for k, c in v.terms.items():
        w = c * coeff
        for a, b in caps:
            h = eta(k[a], k[b])
            if not h:
                w = 0
                break
            w *= h
        if not w:
            continue
        base = [0] * f
        for t, s in thr:
            base[t] = k[s]
        partial = [(base, w)]
        for a, b in cups:
            nxt = []
            for lk, ww in partial:
                for u, x, e in pairs:
                    nk = list(lk)
                    nk[a], nk[b] = u, x
                    nxt.append((nk, ww * e))
            partial = nxt
        for lk, ww in partial:
            out[tuple(lk)] += ww


def act_diagram(d, v: SparseTensor, coeff=1) -> SparseTensor:
    """Act with a diagram (times coeff) or a whole AlgebraElement."""
    out: dict = defaultdict(mpq)
    if isinstance(d, AlgebraElement):
        if d.f != v.f:
            raise ValueError("slot count mismatch")
        for diag, c in d.terms.items():
            cval = c(v.n) if callable(c) else c
            cval = Fraction(cval)
            _diagram_action(diag, v, mpq(cval.numerator, cval.denominator) * mpq(coeff), out)
    else:
        if d.f != v.f:
            raise ValueError("slot count mismatch")
        _diagram_action(d, v, mpq(coeff), out)
    return _wrap(v, out)


def inner(u: SparseTensor, v: SparseTensor) -> Fraction:
    u._same(v)
    if len(u.terms) > len(v.terms):
        u, v = v, u
    acc = mpq(0)
    vt = v.terms
    for k, c in u.terms.items():
        d = vt.get(k)
        if d is not None:
            acc += c * d
    return Fraction(int(acc.numerator), int(acc.denominator))


def inner_mpq(u: SparseTensor, v: SparseTensor):
    if len(u.terms) > len(v.terms):
        u, v = v, u
    vt = v.terms
    acc = mpq(0)
    for k, c in u.terms.items():
        d = vt.get(k)
        if d is not None:
            acc += c * d
    return acc


def chain_casimir(m: int, v: SparseTensor, slots: Iterable[int] | None = None) -> SparseTensor:
    """Quadratic Casimir of SO(m) acting on the given slots (all by default).

    Normalized so one slot carrying a label of level <= m has eigenvalue m-1;
    on partition [lam] of SO(m) the eigenvalue is sum lam_i (lam_i + m - 2i).
    """
    if not 2 <= m <= v.n:
        raise ValueError(f"Casimir level {m} out of range for rank {v.n}")
    slots = tuple(range(v.f)) if slots is None else tuple(slots)
    pairs = metric_pairs(m)
    out: dict = defaultdict(mpq)
    base = m - 1
    for k, c in v.terms.items():
        ins = [s for s in slots if abs(k[s]) <= m]
        if not ins:
            continue
        diag = base * len(ins)
        c2 = 2 * c
        lk = list(k)
        for a, b in combinations(ins, 2):
            x, y = k[a], k[b]
            if x == y:
                diag += 2
            else:
                lk[a], lk[b] = y, x
                out[tuple(lk)] += c2
                lk[a], lk[b] = x, y
            h = eta(x, y)
            if h:
                for u, w, e in pairs:
                    lk[a], lk[b] = u, w
                    out[tuple(lk)] -= c2 * (h * e)
                lk[a], lk[b] = x, y
        out[k] += diag * c
    return _wrap(v, out)


class DegenerateSpectrumError(ValueError):
    """Two candidate labels share a Casimir eigenvalue."""


def project(v: SparseTensor, m: int, target, candidates: Iterable, slots=None) -> SparseTensor:
    """Project onto the eigenvalue of ``target`` of the SO(m) Casimir on ``slots``.

    ``candidates`` must cover every SO(m) label present in ``v``; labels whose
    eigenvalue equals the target's are rejected unless they are the target.
    """
    target = parse_partition(target)
    ct = casimir_eigenvalue(target, m)
    others = set()
    for lab in candidates:
        lab = parse_partition(lab)
        c = casimir_eigenvalue(lab, m)
        if lab == target:
            continue
        if c == ct:
            raise DegenerateSpectrumError(f"{lab} and {target} share SO({m}) eigenvalue {ct}")
        others.add(c)
    out = v
    for c in sorted(others):
        if out.is_zero():
            break
        cv = chain_casimir(m, out, slots)
        if _is_eigen(cv, out, ct):
            break
        out = (cv - out.scale(c)).scale(mpq(1, ct - c))
    return out


def _is_eigen(cv: SparseTensor, v: SparseTensor, c) -> bool:
    if len(cv.terms) != len(v.terms):
        return False
    for k, x in v.terms.items():
        if cv.terms.get(k) != x * c:
            return False
    return True


def eigen_decompose(v: SparseTensor, m: int, eigenvalues: Sequence[int], slots=None) -> dict:
    """Split v into Casimir eigencomponents using one Krylov sequence.

    ``eigenvalues`` must include every eigenvalue present in ``v``. Returns
    {eigenvalue: component}, omitting zero components.
    """
    vals = sorted(set(eigenvalues))
    if len(vals) == 1:
        return {vals[0]: v} if not v.is_zero() else {}
    krylov = [v]
    for _ in range(len(vals) - 1):
        krylov.append(chain_casimir(m, krylov[-1], slots))
    out = {}
    for c in vals:
        # Lagrange basis polynomial prod_{d != c} (x - d)/(c - d)
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
                for k, x in vec.terms.items():
                    acc[k] += a * x
        comp = _wrap(v, acc)
        if not comp.is_zero():
            out[c] = comp
    return out


def weight_m12(key: Key) -> int:
    """SO(2) weight: number of +a2 minus number of -a2."""
    return sum(1 for x in key if x == 2) - sum(1 for x in key if x == -2)
