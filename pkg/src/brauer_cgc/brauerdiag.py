"""Brauer algebra D_f(n) as a diagram algebra.

Nodes are numbered top 1..f then bottom 1..f (internally 0..2f-1). Diagrams
act on tensors from the bottom: a product ``a*b`` stacks ``a`` above ``b`` so
that ``(a*b) v = a (b v)``. A closed loop contributes a factor ``n``, which is
an integer, a Fraction, or :class:`~brauer_cgc.exactnum.RatFunc` for
symbolic work.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .exactnum import RatFunc


@dataclass(frozen=True, order=True)
class BrauerDiagram:
    f: int
    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_partner(cls, f: int, partner: Sequence[int]) -> "BrauerDiagram":
        pairs = sorted({(min(a, b), max(a, b)) for a, b in enumerate(partner)})
        if len(pairs) != f:
            raise ValueError("partner map is not a perfect matching")
        return cls(f, tuple(pairs))

    @classmethod
    def identity(cls, f: int) -> "BrauerDiagram":
        return cls(f, tuple((i, f + i) for i in range(f)))

    @classmethod
    def parse(cls, text: str) -> "BrauerDiagram":
        pairs = re.findall(r"([tb])(\d+)-([tb])(\d+)", text)
        f = len(pairs)

        def node(side, k):
            return int(k) - 1 + (f if side == "b" else 0)

        return cls.from_partner(f, _partner_from_pairs(f, [(node(a, b), node(c, d)) for a, b, c, d in pairs]))

    def partner(self) -> list[int]:
        out = [0] * (2 * self.f)
        for a, b in self.pairs:
            out[a], out[b] = b, a
        return out

    def star(self) -> "BrauerDiagram":
        f = self.f
        flip = lambda x: x + f if x < f else x - f
        return BrauerDiagram.from_partner(f, [flip(p) for p in [self.partner()[flip(x)] for x in range(2 * f)]])

    def top_cups(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.pairs if b < self.f]

    def bottom_caps(self) -> list[tuple[int, int]]:
        return [(a - self.f, b - self.f) for a, b in self.pairs if a >= self.f]

    def through(self) -> list[tuple[int, int]]:
        """(top, bottom) slot pairs of vertical strands."""
        return [(a, b - self.f) for a, b in self.pairs if a < self.f <= b]

    def __str__(self):
        f = self.f
        name = lambda x: f"t{x + 1}" if x < f else f"b{x - f + 1}"
        return " ".join(f"{name(a)}-{name(b)}" for a, b in self.pairs)


def _partner_from_pairs(f, pairs):
    out = [None] * (2 * f)
    for a, b in pairs:
        out[a], out[b] = b, a
    if any(x is None for x in out):
        raise ValueError("not a perfect matching")
    return out


def compose_diagrams(a: BrauerDiagram, b: BrauerDiagram) -> tuple[BrauerDiagram, int]:
    """Stack a above b; returns the diagram and the number of closed loops."""
    if a.f != b.f:
        raise ValueError("strand counts differ")
    f = a.f
    pa, pb = a.partner(), b.partner()
    seen_mid = [False] * f
    result = [0] * (2 * f)

    def walk(side, node):
        while True:
            p = (pa if side == 0 else pb)[node]
            if side == 0:
                if p < f:
                    return p
                seen_mid[p - f] = True
                side, node = 1, p - f
            else:
                if p >= f:
                    return p
                seen_mid[p] = True
                side, node = 0, p + f

    # external nodes: top of a (0..f-1), bottom of b (f..2f-1)
    for x in range(f):
        result[x] = walk(0, x)
    for x in range(f, 2 * f):
        result[x] = walk(1, x)
    loops = 0
    for i in range(f):
        if seen_mid[i]:
            continue
        loops += 1
        side, node = 0, i + f
        while True:
            seen_mid[node - f if side == 0 else node] = True
            p = (pa if side == 0 else pb)[node]
            side, node = (1, p - f) if side == 0 else (0, p + f)
            if seen_mid[node - f if side == 0 else node]:
                break
    return BrauerDiagram.from_partner(f, result), loops


def generator(f: int, which: str, i: int) -> BrauerDiagram:
    if not 1 <= i <= f - 1:
        raise ValueError(f"generator index {i} out of range for f={f}")
    partner = list(range(f, 2 * f)) + list(range(f))
    a, b = i - 1, i
    if which == "g":
        partner[a], partner[b] = f + b, f + a
        partner[f + a], partner[f + b] = b, a
    elif which == "e":
        partner[a], partner[b] = b, a
        partner[f + a], partner[f + b] = f + b, f + a
    else:
        raise ValueError(f"unknown generator kind {which!r}")
    return BrauerDiagram.from_partner(f, partner)


def all_diagrams(f: int) -> list[BrauerDiagram]:
    def matchings(nodes):
        if not nodes:
            yield []
            return
        first, rest = nodes[0], nodes[1:]
        for k, other in enumerate(rest):
            for m in matchings(rest[:k] + rest[k + 1:]):
                yield [(first, other)] + m

    return sorted(BrauerDiagram(f, tuple(sorted(m))) for m in matchings(list(range(2 * f))))


def _is_zero(c) -> bool:
    return c == 0


@dataclass
class AlgebraElement:
    """Linear combination of diagrams; ``n`` is the loop weight."""

    f: int
    terms: dict = field(default_factory=dict)
    n: object = None

    def __post_init__(self):
        if self.n is None:
            self.n = RatFunc.n()
        self.terms = {d: c for d, c in self.terms.items() if not _is_zero(c)}

    @classmethod
    def of(cls, d: BrauerDiagram, n=None, coeff=1) -> "AlgebraElement":
        return cls(d.f, {d: coeff}, n)

    @classmethod
    def identity(cls, f: int, n=None) -> "AlgebraElement":
        return cls.of(BrauerDiagram.identity(f), n)

    def _check(self, other):
        if self.f != other.f:
            raise ValueError("strand counts differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return AlgebraElement(self.f, out, self.n)

    def __neg__(self):
        return AlgebraElement(self.f, {d: -c for d, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        return AlgebraElement(self.f, {d: c * v for d, v in self.terms.items()}, self.n)

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.f == other.f and (self - other).is_zero()

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [{"diagram": str(d), "coeff": str(c)} for d, c in sorted(self.terms.items())]


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    out: dict = {}
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            d, loops = compose_diagrams(da, db)
            c = ca * cb
            for _ in range(loops):
                c = c * a.n
            out[d] = out[d] + c if d in out else c
    return AlgebraElement(a.f, out, a.n)


def star(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.f, {d.star(): c for d, c in a.terms.items()}, a.n)


def parse_word(word) -> list[tuple[str, int]]:
    """Accept ``"e1g2"``, ``"e1 g2"``, ``[("e", 1), ("g", 2)]`` or ``["e1", "g2"]``."""
    if isinstance(word, str):
        return [(k, int(i)) for k, i in re.findall(r"([ge])_?\{?(\d+)\}?", word)]
    out = []
    for item in word:
        if isinstance(item, str):
            out.extend(parse_word(item))
        else:
            out.append((item[0], int(item[1])))
    return out


def word_to_element(f: int, word, n=None) -> AlgebraElement:
    out = AlgebraElement.identity(f, n)
    for which, i in parse_word(word):
        out = multiply(out, AlgebraElement.of(generator(f, which, i), n))
    return out


def word_to_diagram(f: int, word) -> tuple[BrauerDiagram, int]:
    """Single diagram of a generator word together with its loop count."""
    d, loops = BrauerDiagram.identity(f), 0
    for which, i in parse_word(word):
        d, extra = compose_diagrams(d, generator(f, which, i))
        loops += extra
    return d, loops


# ---------------------------------------------------------------------------
# coset representatives of S_f1 x S_f2 in D_f


@dataclass(frozen=True)
class CosetRep:
    """Q^k_omega: a shuffle of the two index blocks with k cross contractions.

    ``omega1``/``omega2`` are the output positions (1-based) of the surviving
    strands of each block; ``contractions`` lists the k top cups as position
    pairs; ``caps`` the contracted input slots (block-1 slot, block-2 slot).
    """

    k: int
    omega1: tuple[int, ...]
    omega2: tuple[int, ...]
    contractions: tuple[tuple[int, int], ...]
    caps: tuple[tuple[int, int], ...]
    rank: int
    diagram: BrauerDiagram

    def word(self) -> str:
        return _LISTED_WORDS_BY_DIAGRAM.get(self.diagram, "")


def _generic_reps(f1: int, f2: int) -> list[BrauerDiagram]:
    """Generic rule: for each k, cups in combination order, then survivor shuffles.

    The k contracted inputs are the last k slots of block 1 paired (nested)
    with the first k slots of block 2; survivors keep their order inside
    each block.
    """
    f = f1 + f2
    out = []
    for k in range(0, min(f1, f2) + 1):
        caps = [(f1 - j, f1 + 1 + j) for j in range(k)]
        surv1 = list(range(1, f1 - k + 1))
        surv2 = list(range(f1 + k + 1, f + 1))
        for cups in combinations(combinations(range(1, f + 1), 2), k):
            flat = [p for c in cups for p in c]
            if len(set(flat)) != 2 * k:
                continue
            free = [p for p in range(1, f + 1) if p not in flat]
            for pos1 in combinations(free, len(surv1)):
                pos2 = [p for p in free if p not in pos1]
                pairs = [(a - 1, b - 1) for a, b in cups]
                pairs += [(f + a - 1, f + b - 1) for a, b in caps]
                pairs += [(t - 1, f + s - 1) for t, s in zip(pos1, surv1)]
                pairs += [(t - 1, f + s - 1) for t, s in zip(pos2, surv2)]
                out.append(BrauerDiagram(f, tuple(sorted(pairs))))
    return out


def enumerate_cosets(f1: int, f2: int) -> list[CosetRep]:
    """Coset representatives in rank order.

    For f1 + f2 <= 4 the representatives are the diagrams of the fixed generator
    words used throughout the IDC tables; larger cases fall back to the generic
    rendering rule.
    """
    if f1 < 1 or f2 < 1:
        raise ValueError("both blocks need at least one index")
    words = LISTED_COSET_WORDS.get((f1, f2))
    f = f1 + f2
    if words is not None:
        out = []
        for rank, w in enumerate(words):
            d, loops = word_to_diagram(f, w)
            if loops:
                raise AssertionError("coset word closes a loop")
            out.append(_rep_from_diagram(f1, f2, d, rank))
        return out
    return [_rep_from_diagram(f1, f2, d, r) for r, d in enumerate(_generic_reps(f1, f2))]


def _rep_from_diagram(f1: int, f2: int, d: BrauerDiagram, rank: int) -> CosetRep:
    cups = tuple((a + 1, b + 1) for a, b in d.top_cups())
    caps = tuple((a + 1, b + 1) for a, b in d.bottom_caps())
    thr = sorted(d.through(), key=lambda tb: tb[1])
    omega1 = tuple(sorted(t + 1 for t, s in thr if s < f1))
    omega2 = tuple(sorted(t + 1 for t, s in thr if s >= f1))
    return CosetRep(len(cups), omega1, omega2, cups, caps, rank, d)


LISTED_COSET_WORDS: dict[tuple[int, int], list[str]] = {
    (1, 1): ["", "g1", "e1"],
    (2, 1): ["", "g2", "g1g2", "e1g2", "g1e2", "e2"],
    (1, 2): ["", "g1", "g2g1", "e2g1", "g2e1", "e1"],
    (3, 1): ["", "g3", "g2g3", "g1g2g3", "e1g2g3", "g1e2g3", "g1g2e3", "e2g3", "g2e3", "e3"],
    (2, 2): [
        "", "g2", "g1g2", "g3g2", "g1g3g2", "g2g1g3g2",
        "e1g2", "e1g3g2", "g1e2", "g2g3e1g2", "g1g3e2", "g2g1g3e2",
        "e2", "e2g1g3g2", "g3e2", "g2g1e3g2", "e3g2", "e3g1g2",
        "e3e1g2", "g2e1e3g2", "e2g1g3e2",
    ],
}

_LISTED_WORDS_BY_DIAGRAM: dict = {}
for (_a, _b), _ws in LISTED_COSET_WORDS.items():
    for _w in _ws:
        _LISTED_WORDS_BY_DIAGRAM.setdefault(word_to_diagram(_a + _b, _w)[0], _w)


# ---------------------------------------------------------------------------
# defining relations


def _relation_cases(f: int):
    w = lambda word: word_to_element(f, word)
    for i in range(1, f):
        yield f"g{i}^2 = 1", w(f"g{i}g{i}"), w("")
        yield f"e{i} g{i} = e{i}", w(f"e{i}g{i}"), w(f"e{i}")
        yield f"g{i} e{i} = e{i}", w(f"g{i}e{i}"), w(f"e{i}")
        yield f"e{i}^2 = n e{i}", w(f"e{i}e{i}"), w(f"e{i}").scale(RatFunc.n())
        g = w(f"g{i}")
        one = w("")
        yield f"(g{i}-1)^2 (g{i}+1) = 0", (g - one) * (g - one) * (g + one), AlgebraElement(f)
        if i + 1 < f:
            yield f"g{i} g{i+1} g{i} = g{i+1} g{i} g{i+1}", w(f"g{i}g{i+1}g{i}"), w(f"g{i+1}g{i}g{i+1}")
        if i > 1:
            yield f"e{i} g{i-1} e{i} = e{i}", w(f"e{i}g{i-1}e{i}"), w(f"e{i}")
        for j in range(i + 2, f):
            yield f"g{i} g{j} = g{j} g{i}", w(f"g{i}g{j}"), w(f"g{j}g{i}")
            yield f"e{i} e{j} = e{j} e{i}", w(f"e{i}e{j}"), w(f"e{j}e{i}")
    gens = [f"{k}{i}" for k in "ge" for i in range(1, f)]
    for a in gens:
        yield f"star({a}) = {a}", star(w(a)), w(a)
        for b in gens:
            yield f"star({a}{b}) = star({b}) star({a})", star(w(a + b)), star(w(b)) * star(w(a))


def relation_suite(f: int) -> list[str]:
    """Check the defining relations and the star operation with symbolic n.

    Returns the relations that fail (an empty list means all hold).
    """
    if f < 2:
        raise ValueError("relations need at least two strands")
    return [name for name, lhs, rhs in _relation_cases(f) if lhs != rhs]


def relation_count(f: int) -> int:
    return sum(1 for _ in _relation_cases(f))
