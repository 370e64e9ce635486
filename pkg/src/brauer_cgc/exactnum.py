"""Exact arithmetic: rationals, rational functions of the rank n, signed squares.

Rationals are :class:`fractions.Fraction`. Rational functions are kept as a
pair of integer-coefficient polynomials in lowest terms. A coefficient whose
value is ``sign * sqrt(square)`` is a :class:`SignedSquare`; square roots are
never evaluated. A :class:`Surd` is a finite sum of rational multiples of
square roots of integers, for expressions evaluated at a fixed rank.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import groupby
from typing import Iterable, Sequence, Union

BigRational = Fraction

__all__ = [
    "BigRational",
    "RatFunc",
    "SignedSquare",
    "ReconstructionError",
    "rat_arith",
    "ratfunc_interpolate",
    "signed_square_of",
    "parse_ratfunc",
    "sqrt_sum_is_zero",
    "Surd",
    "evaluate_surd",
]


class ReconstructionError(ValueError):
    """No rational function of the requested degree fits the samples."""

    def __init__(self, message: str, residual: tuple[int, Fraction] | None = None):
        super().__init__(message)
        self.residual = residual


def rat_arith(a, b, op: str) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# dense univariate polynomials, coefficient lists from degree 0 upward


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def _pneg(p):
    return [-c for c in p]


def _pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pdivmod(p, q):
    p = [Fraction(c) for c in p]
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(p) >= len(q) and p:
        shift = len(p) - len(q)
        c = p[-1] / lead
        quot[shift] = c
        for j, b in enumerate(q):
            p[shift + j] -= c * b
        _trim(p)
    return _trim(quot), p


def _pgcd(p, q):
    p, q = _trim(list(p)), _trim(list(q))
    while q:
        p, q = q, _pdivmod(p, q)[1]
    if not p:
        return []
    return [c / p[-1] for c in p]


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _content(p) -> Fraction:
    """Positive rational c with p/c having coprime integer coefficients."""
    nums = [c.numerator for c in p]
    dens = [c.denominator for c in p]
    g = reduce(math.gcd, nums, 0)
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), dens, 1)
    return Fraction(g, lcm)


class RatFunc:
    """Univariate rational function of ``n`` over the rationals.

    Stored canonically: integer coefficients, coprime numerator and
    denominator polynomials, jointly reduced content, positive leading
    denominator coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence = (0,), den: Sequence = (1,)):
        p = _trim([Fraction(c) for c in num])
        q = _trim([Fraction(c) for c in den])
        if not q:
            raise ZeroDivisionError("rational function with zero denominator")
        if not p:
            self.num, self.den = (), (1,)
            return
        g = _pgcd(p, q)
        if len(g) > 1:
            p = _pdivmod(p, g)[0]
            q = _pdivmod(q, g)[0]
        if q[-1] < 0:
            p, q = _pneg(p), _pneg(q)
        scale = _content(p + q)
        self.num = tuple(int(c / scale) for c in p)
        self.den = tuple(int(c / scale) for c in q)

    @classmethod
    def n(cls) -> "RatFunc":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls((Fraction(c),))

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls.const(Fraction(x))

    # arithmetic -----------------------------------------------------------
    def _parts(self):
        return [Fraction(c) for c in self.num], [Fraction(c) for c in self.den]

    def __add__(self, other):
        try:
            o = RatFunc.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b = self._parts()
        c, d = o._parts()
        return RatFunc(_padd(_pmul(a, d), _pmul(c, b)), _pmul(b, d))

    __radd__ = __add__

    def __neg__(self):
        a, b = self._parts()
        return RatFunc(_pneg(a), b)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        try:
            o = RatFunc.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b = self._parts()
        c, d = o._parts()
        return RatFunc(_pmul(a, c), _pmul(b, d))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        a, b = self._parts()
        c, d = o._parts()
        return RatFunc(_pmul(a, d), _pmul(b, c))

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc.const(1) / (self ** (-k))
        out = RatFunc.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = RatFunc.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    # queries --------------------------------------------------------------
    @property
    def degree(self) -> tuple[int, int]:
        return max(len(self.num) - 1, 0), len(self.den) - 1

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on n")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    def __call__(self, n) -> Fraction:
        d = _peval([Fraction(c) for c in self.den], Fraction(n))
        if d == 0:
            raise ZeroDivisionError(f"n={n} is a pole of {self}")
        return _peval([Fraction(c) for c in self.num], Fraction(n)) / d

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        if not self.num:
            return "0"
        ncoef, nfac = _factor_int_poly(self.num)
        dcoef, dfac = _factor_int_poly(self.den)
        top = _render_product(ncoef, nfac)
        if not dfac:
            return top if dcoef == 1 else f"{top}/{dcoef}"
        if dcoef == 1 and len(dfac) == 1:
            bottom = dfac[0]
        else:
            bottom = "(" + _render_product(dcoef, dfac) + ")"
        return f"{top}/{bottom}"

    def latex(self) -> str:
        if not self.num:
            return "0"
        ncoef, nfac = _factor_int_poly(self.num)
        dcoef, dfac = _factor_int_poly(self.den)
        top = _render_product(ncoef, nfac).replace("*", "")
        if not dfac and dcoef == 1:
            return top
        bottom = _render_product(dcoef, dfac).replace("*", "")
        return rf"\frac{{{top}}}{{{bottom}}}"


def _poly_str(coeffs: Sequence[int]) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            var = "n" if k == 1 else f"n**{k}"
            body = var if mag == 1 else f"{mag}*{var}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f"{sign}{body}"
    return out


def _factor_int_poly(coeffs: Sequence[int]) -> tuple[int, list[str]]:
    """Split an integer polynomial into integer content and factor strings.

    Rational roots become linear factors; any remainder is kept expanded.
    """
    p = [int(c) for c in coeffs]
    g = reduce(math.gcd, p, 0)
    if p[-1] < 0:
        g = -g
    p = [c // g for c in p]
    linear: list[tuple[int, int]] = []  # (a, b) meaning a*n + b
    while len(p) > 1:
        root = _rational_root(p)
        if root is None:
            break
        b, a = -root.numerator, root.denominator
        quot, rem = _pdivmod([Fraction(c) for c in p], [Fraction(b), Fraction(a)])
        assert not rem
        p = [int(c) for c in quot]
        linear.append((a, b))
    lead = p[0] if len(p) == 1 else 1
    factors = []
    linear.sort(key=lambda ab: (ab[1] != 0, ab[0], -ab[1]))
    for (a, b), run in groupby(linear):
        if b == 0:
            body = "n" if a == 1 else f"({a}*n)"
        else:
            body = "(" + _poly_str([b, a]) + ")"
        power = len(list(run))
        factors.append(body if power == 1 else f"{body}^{power}")
    if len(p) > 1:
        factors.append("(" + _poly_str(p) + ")")
    return g * lead, factors


def _rational_root(p: list[int]):
    if p[0] == 0:
        return Fraction(0)
    a0, an = abs(p[0]), abs(p[-1])
    cands = set()
    for u in _divisors(a0):
        for v in _divisors(an):
            cands.add(Fraction(u, v))
            cands.add(Fraction(-u, v))
    for r in sorted(cands, key=lambda x: (abs(x), x)):
        if _peval([Fraction(c) for c in p], r) == 0:
            return r
    return None


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _render_product(coef: int, factors: list[str]) -> str:
    if not factors:
        return str(coef)
    body = "*".join(factors)
    if coef == 1:
        return body
    if coef == -1:
        return "-" + body
    return f"{coef}*{body}"


_ALLOWED_BINOPS = {ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow}


def parse_ratfunc(text: str) -> RatFunc:
    """Parse an arithmetic expression in ``n`` with integer literals."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RatFunc.const(node.value)
        if isinstance(node, ast.Name) and node.id == "n":
            return RatFunc.n()
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponent must be an integer literal")
                return left ** node.right.value
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        raise ValueError(f"unsupported expression element in {text!r}")

    return walk(ast.parse(text.replace("^", "**"), mode="eval"))


# ---------------------------------------------------------------------------
# interpolation


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def ratfunc_interpolate(samples: Iterable[tuple[int, object]], max_deg: int) -> RatFunc:
    """Fit p/q with deg p, deg q <= max_deg through every sample exactly."""
    pts = [(int(x), Fraction(v)) for x, v in samples]
    if len({x for x, _ in pts}) != len(pts):
        raise ValueError("sample abscissae must be distinct")
    need = 2 * max_deg + 2
    if len(pts) < need:
        raise ValueError(f"need at least {need} samples, got {len(pts)}")
    width = max_deg + 1

    def row(x, v):
        powers = [Fraction(x) ** k for k in range(width)]
        return powers + [-v * p for p in powers]

    basis = _nullspace([row(x, v) for x, v in pts], 2 * width)
    if not basis:
        # locate the first sample that breaks a fit through the earlier ones
        for upto in range(need, len(pts) + 1):
            if not _nullspace([row(x, v) for x, v in pts[:upto]], 2 * width):
                raise ReconstructionError(
                    f"no rational function of degree <= {max_deg} fits; first conflict at n={pts[upto - 1][0]}",
                    residual=pts[upto - 1],
                )
        raise ReconstructionError("no rational function fits the samples")
    for vec in basis:
        p, q = vec[:width], vec[width:]
        if any(q):
            break
    else:
        raise ReconstructionError("degenerate fit with zero denominator")
    result = RatFunc(p, q)
    for x, v in pts:
        try:
            got = result(x)
        except ZeroDivisionError:
            raise ReconstructionError(f"fit has a pole at sample n={x}", residual=(x, v)) from None
        if got != v:
            raise ReconstructionError(f"fit misses sample n={x}", residual=(x, v))
    return result


# ---------------------------------------------------------------------------
# signed squares

Square = Union[Fraction, RatFunc]


@dataclass(frozen=True)
class SignedSquare:
    """The real number ``sign * sqrt(square)``."""

    sign: int
    square: Square

    def __post_init__(self):
        sq = self.square
        if isinstance(sq, RatFunc):
            if sq.is_constant():
                object.__setattr__(self, "square", sq.constant_value())
        else:
            object.__setattr__(self, "square", Fraction(sq))
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        zero = self.square == 0
        if zero != (self.sign == 0):
            raise ValueError("sign is zero exactly when the square is zero")
        if isinstance(self.square, Fraction) and self.square < 0:
            raise ValueError("square must be non-negative")

    @classmethod
    def zero(cls) -> "SignedSquare":
        return cls(0, Fraction(0))

    @classmethod
    def from_rational(cls, x) -> "SignedSquare":
        x = Fraction(x)
        return cls((x > 0) - (x < 0), x * x)

    def __neg__(self):
        return SignedSquare(-self.sign, self.square)

    def __mul__(self, other: "SignedSquare") -> "SignedSquare":
        return SignedSquare(self.sign * other.sign, self.square * other.square)

    def signed_square(self):
        """``sign * square``; sums of these over a row give orthogonality sums."""
        return self.square * self.sign

    def at(self, n: int) -> "SignedSquare":
        if isinstance(self.square, RatFunc):
            return SignedSquare(self.sign, self.square(n))
        return self

    def is_constant(self) -> bool:
        return not isinstance(self.square, RatFunc)

    def to_json(self) -> dict:
        return {"sign": self.sign, "square": str(self.square)}

    @classmethod
    def from_json(cls, obj: dict) -> "SignedSquare":
        sq = parse_ratfunc(str(obj["square"]))
        return cls(int(obj["sign"]), sq)

    def __str__(self):
        if self.sign == 0:
            return "0"
        sq = self.square
        if isinstance(sq, Fraction) and sq == 1:
            body = "1"
        else:
            body = f"sqrt({sq})"
        return ("-" if self.sign < 0 else "") + body


def signed_square_of(value_squared, sign_witness) -> SignedSquare:
    if isinstance(value_squared, RatFunc):
        sq = value_squared
    else:
        sq = Fraction(value_squared)
        if sq < 0:
            raise ValueError("value_squared must be non-negative")
    w = Fraction(sign_witness)
    if sq == 0:
        return SignedSquare.zero()
    sign = (w > 0) - (w < 0)
    if sign == 0:
        raise ValueError("zero sign witness for a nonzero square")
    return SignedSquare(sign, sq)


# ---------------------------------------------------------------------------
# exact sums of square roots


def _pderiv(p):
    return _trim([c * k for k, c in enumerate(p)][1:])


def _squarefree_parts(p) -> list:
    """Yun's algorithm: monic p = prod s_i^i, returned as [s_1, s_2, ...]."""
    p = [Fraction(c) for c in p]
    p = [c / p[-1] for c in p]
    out = []
    a = _pgcd(p, _pderiv(p))
    b = _pdivmod(p, a)[0]
    c = _pdivmod(_pderiv(p), a)[0]
    d = _padd(c, _pneg(_pderiv(b)))
    while len(b) > 1:
        a = _pgcd(b, d)
        out.append(a)
        b = _pdivmod(b, a)[0]
        c = _pdivmod(d, a)[0]
        d = _padd(c, _pneg(_pderiv(b)))
    return out


def _sqrt_split(sq) -> tuple[RatFunc, Fraction, tuple]:
    """Write sqrt(sq) as r * sqrt(k * K(n)) with K monic squarefree.

    The constant k is left unreduced; callers compare kernels by testing
    whether the ratio of two constants is a perfect square.
    """
    sq = RatFunc.coerce(sq)
    num, den = sq._parts()
    lead = num[-1] / den[-1]
    prod = _pmul([c / num[-1] for c in num], [c / den[-1] for c in den])
    root, kernel = [Fraction(1)], [Fraction(1)]
    for i, s in enumerate(_squarefree_parts(prod), start=1):
        for _ in range(i // 2):
            root = _pmul(root, s)
        if i % 2:
            kernel = _pmul(kernel, s)
    monic_den = [c / den[-1] for c in den]
    return RatFunc(root, monic_den), lead, tuple(kernel)


def _rational_sqrt(x: Fraction):
    import gmpy2

    if x < 0:
        return None
    a, b = gmpy2.isqrt_rem(x.numerator), gmpy2.isqrt_rem(x.denominator)
    if a[1] or b[1]:
        return None
    return Fraction(int(a[0]), int(b[0]))


def sqrt_sum_is_zero(terms: Iterable[tuple[int, object]]) -> bool:
    """Decide sum(sign * sqrt(square)) == 0 exactly as an identity in n.

    Square roots of rational functions whose ratio is not a square are
    linearly independent over Q(n), so terms are grouped by kernel and each
    group must cancel on its own.
    """
    groups: list[list] = []  # [lead, kernel, accumulated coefficient]
    for sign, sq in terms:
        if not sign:
            continue
        root, lead, kernel = _sqrt_split(sq)
        for g in groups:
            if g[1] == kernel:
                ratio = _rational_sqrt(lead / g[0])
                if ratio is not None:
                    g[2] = g[2] + root * ratio * sign
                    break
        else:
            groups.append([lead, kernel, root * sign])
    return all(not g[2] for g in groups)


# ---------------------------------------------------------------------------
# sums of square roots at a fixed rank


def _squarefree_split(m: int) -> tuple[int, int]:
    """Return (k, s) with m = k^2 * s and s squarefree."""
    k, s, p = 1, 1, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return k, s * m


class Surd:
    """Exact value sum(q_s * sqrt(s)) over squarefree integers s."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {s: Fraction(q) for s, q in (terms or {}).items() if q}

    @classmethod
    def coerce(cls, x) -> "Surd":
        return x if isinstance(x, Surd) else cls({1: Fraction(x)})

    @classmethod
    def sqrt(cls, x) -> "Surd":
        x = cls.coerce(x)
        if set(x.terms) - {1}:
            raise ValueError("nested square roots are not supported")
        r = x.terms.get(1, Fraction(0))
        if r < 0:
            raise ValueError("square root of a negative number")
        k, s = _squarefree_split(r.numerator * r.denominator)
        return cls({s: Fraction(k, r.denominator)})

    def __add__(self, other):
        out = dict(self.terms)
        for s, q in Surd.coerce(other).terms.items():
            out[s] = out.get(s, 0) + q
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({s: -q for s, q in self.terms.items()})

    def __sub__(self, other):
        return self + -Surd.coerce(other)

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        out: dict = {}
        for s, q in self.terms.items():
            for t, r in Surd.coerce(other).terms.items():
                g = math.gcd(s, t)
                u = (s // g) * (t // g)
                out[u] = out.get(u, 0) + q * r * g
        return Surd(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Surd.coerce(other)
        if len(other.terms) != 1:
            raise ZeroDivisionError("division only by a single nonzero root term")
        (s, q), = other.terms.items()
        return self * Surd({s: 1 / (q * s)})

    def __rtruediv__(self, other):
        return Surd.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return 1 / self ** -k
        out = Surd({1: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Surd)):
            return self.terms == Surd.coerce(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __float__(self):
        return math.fsum(float(q) * math.sqrt(s) for s, q in self.terms.items())

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = [str(q) if s == 1 else f"{q}*sqrt({s})" for s, q in sorted(self.terms.items())]
        return " + ".join(parts)


def evaluate_surd(text: str, n: int) -> Surd:
    """Evaluate an expression in ``n`` that may contain ``sqrt(...)`` of rationals."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Surd.coerce(node.value)
        if isinstance(node, ast.Name) and node.id == "n":
            return Surd.coerce(n)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            return Surd.sqrt(walk(node.args[0]))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponent must be an integer literal")
                return left ** node.right.value
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        raise ValueError(f"unsupported expression element in {text!r}")

    return walk(ast.parse(text.replace("^", "**"), mode="eval"))
