"""Exact scalars: rationals, integer polynomials and real algebraic numbers.

Rationals are ``gmpy2.mpq`` values.  A polynomial is a tuple of integer
coefficients, lowest degree first, with no trailing zeros (the zero polynomial
is the empty tuple).  Real roots are isolated by Descartes-rule bisection on
the square-free factors of a Yun decomposition.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence, Union

import gmpy2
from gmpy2 import mpq, mpz

Poly = tuple
Number = Union[int, mpq]

ZERO = mpq(0)
ONE = mpq(1)

LESS, EQUAL, GREATER = -1, 0, 1


def Q(x) -> mpq:
    """Coerce ints, mpq, Fraction and strings like ``"3/4"`` or ``"0.125"``."""
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, float):
        return mpq(Fraction(x))
    return mpq(x)


def sgn(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# dense integer polynomials


def strip(c: Iterable) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    return len(p) - 1


def lc(p: Poly):
    return p[-1] if p else 0


def padd(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return strip(out)


def psub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = [0] * n
    for i, c in enumerate(p):
        out[i] = c
    for i, c in enumerate(q):
        out[i] -= c
    return strip(out)


def pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def pscale(p: Poly, k) -> Poly:
    if k == 0:
        return ()
    return tuple(c * k for c in p)


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def pderiv(p: Poly) -> Poly:
    return strip(i * c for i, c in enumerate(p) if i)


def peval(p: Poly, x):
    """Horner evaluation; exact for int/mpq arguments."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def peval_interval(p: Poly, lo: mpq, hi: mpq) -> tuple:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner evaluation."""
    a = b = mpq(0)
    for c in reversed(p):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a = min(cands) + c
        b = max(cands) + c
    return a, b


def content(p: Poly) -> int:
    g = mpz(0)
    for c in p:
        g = gmpy2.gcd(g, c)
        if g == 1:
            break
    return int(g)


def primitive(p: Poly) -> Poly:
    """Divide out the content and make the leading coefficient positive."""
    if not p:
        return ()
    g = content(p)
    if p[-1] < 0:
        g = -g
    if g == 1:
        return tuple(int(c) for c in p)
    return tuple(int(c // g) for c in p)


def from_rationals(coeffs: Sequence) -> Poly:
    """Integer polynomial proportional to one with rational coefficients."""
    coeffs = [mpq(c) for c in coeffs]
    den = mpz(1)
    for c in coeffs:
        den = gmpy2.lcm(den, c.denominator)
    return strip(int(c * den) for c in coeffs)


def pdivmod_q(p: Poly, q: Poly) -> tuple:
    """Division over the rationals: returns (quotient, remainder) as mpq lists."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [mpq(c) for c in p]
    dq = len(q) - 1
    if len(r) - 1 < dq:
        return [], r
    quo = [mpq(0)] * (len(r) - dq)
    inv = mpq(1) / q[-1]
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] * inv
        quo[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
    return quo, strip(r[:dq])


def pexquo(p: Poly, q: Poly) -> Poly:
    """Exact quotient, returned as a primitive integer polynomial."""
    quo, rem = pdivmod_q(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return primitive(from_rationals(quo))


def prem(p: Poly, q: Poly) -> Poly:
    """Pseudo-remainder of p by q (integer arithmetic)."""
    r = list(p)
    dq = len(q) - 1
    lq = q[-1]
    while len(r) - 1 >= dq and r:
        lr = r[-1]
        shift = len(r) - 1 - dq
        r = [c * lq for c in r]
        for j, b in enumerate(q):
            r[shift + j] -= lr * b
        r = list(strip(r))
    return tuple(r)


def pgcd(p: Poly, q: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient (``()`` if both zero)."""
    p, q = primitive(p), primitive(q)
    if len(p) < len(q):
        p, q = q, p
    while q:
        if len(q) == 1:
            return (1,)
        p, q = q, primitive(prem(p, q))
    return p


def have_common_root(p: Poly, q: Poly) -> bool:
    """True iff p and q share a (complex) root."""
    return degree(pgcd(p, q)) > 0


def sqf_list(p: Poly) -> list:
    """Square-free decomposition: [(factor, multiplicity), ...].

    Factors are primitive, square-free, pairwise coprime and non-constant.
    Uses the gcd/exact-division recurrence, which is insensitive to the
    constant factors that integer gcds introduce.
    """
    p = primitive(p)
    if degree(p) < 1:
        return []
    out = []
    c = pgcd(p, pderiv(p))
    w = pexquo(p, c)
    i = 1
    while degree(w) > 0:
        y = pgcd(w, c)
        z = pexquo(w, y)
        if degree(z) > 0:
            out.append((z, i))
        w = y
        c = pexquo(c, y)
        i += 1
    return out


def sqf_part(p: Poly) -> Poly:
    p = primitive(p)
    if degree(p) < 1:
        return p
    return pexquo(p, pgcd(p, pderiv(p)))


# ---------------------------------------------------------------------------
# Descartes-rule root isolation


def _taylor_shift1(p: list) -> list:
    """Coefficients of p(x + 1)."""
    a = list(p)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _variations(c: Sequence) -> int:
    v = 0
    last = 0
    for x in c:
        if x:
            if last and (x > 0) != (last > 0):
                v += 1
            last = x
    return v


def _descartes01(q: Sequence) -> int:
    """Upper bound (exact when 0 or 1) on the roots of q in (0, 1)."""
    return _variations(_taylor_shift1(list(reversed(q))))


def compose_linear(p: Poly, a: mpq, w: mpq) -> Poly:
    """Integer polynomial proportional to p(a + w*x)."""
    acc = [mpq(0)]
    for c in reversed(p):
        # acc = acc * (a + w x) + c
        nxt = [mpq(0)] * (len(acc) + 1)
        for i, v in enumerate(acc):
            if v:
                nxt[i] += v * a
                nxt[i + 1] += v * w
        nxt[0] += c
        acc = nxt
    return from_rationals(acc)


def descartes_count(p: Poly, lo: mpq, hi: mpq) -> int:
    """Descartes bound on the number of roots of p in the open (lo, hi)."""
    return _descartes01(compose_linear(p, mpq(lo), mpq(hi) - mpq(lo)))


def root_bound(p: Poly) -> mpq:
    """A power of two strictly greater than the modulus of every root."""
    lead = abs(p[-1])
    m = max(abs(c) for c in p[:-1]) if len(p) > 1 else 0
    b = 1 + (m + lead - 1) // lead + 1
    return mpq(1 << int(b).bit_length())


def _isolate_positive(p: Poly) -> tuple:
    """Isolate the roots of square-free p (p(0) != 0) in (0, inf).

    Returns (intervals, exact_roots) with intervals as (lo, hi) pairs that
    each contain exactly one root in their interior.
    """
    n = len(p) - 1
    bound = root_bound(p)
    b = int(bound)
    q = [c * b**i for i, c in enumerate(p)]
    intervals, exact = [], []
    stack = [(q, mpq(0), bound)]
    while stack:
        q, lo, hi = stack.pop()
        v = _descartes01(q)
        if v == 0:
            continue
        if v == 1:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = [c << (n - i) for i, c in enumerate(q)]
        right = _taylor_shift1(left)
        if right[0] == 0:
            exact.append(mid)
            right = right[1:] + [0]
        stack.append((left, lo, mid))
        stack.append((right, mid, hi))
    return intervals, exact


class AlgebraicReal:
    """A real root of a square-free integer polynomial.

    ``poly`` is primitive and square-free.  When ``lo == hi`` the number is the
    rational ``lo``; otherwise exactly one root lies in the open interval and
    neither endpoint is a root.  Refinement tightens the interval in place,
    which never changes the value.
    """

    __slots__ = ("poly", "_iv", "_slo")

    def __init__(self, poly: Poly, lo, hi):
        self.poly = poly
        lo, hi = mpq(lo), mpq(hi)
        if lo != hi:
            slo, shi = sgn(peval(poly, lo)), sgn(peval(poly, hi))
            if slo == 0 or shi == 0 or slo == shi:
                raise ValueError("interval does not isolate a simple root")
            self._slo = slo
        else:
            self._slo = 0
        self._iv = (lo, hi)

    @classmethod
    def rational(cls, v) -> "AlgebraicReal":
        v = mpq(v)
        obj = cls.__new__(cls)
        obj.poly = primitive((-v.numerator, v.denominator))
        obj._iv = (v, v)
        obj._slo = 0
        return obj

    @classmethod
    def _trusted(cls, poly, lo, hi, slo) -> "AlgebraicReal":
        obj = cls.__new__(cls)
        obj.poly, obj._iv, obj._slo = poly, (lo, hi), slo
        return obj

    @property
    def lo(self) -> mpq:
        return self._iv[0]

    @property
    def hi(self) -> mpq:
        return self._iv[1]

    @property
    def is_rational(self) -> bool:
        return self._iv[0] == self._iv[1]

    def width(self) -> mpq:
        lo, hi = self._iv
        return hi - lo

    def bisect(self) -> None:
        lo, hi = self._iv
        if lo == hi:
            return
        mid = (lo + hi) / 2
        s = sgn(peval(self.poly, mid))
        if s == 0:
            self._iv = (mid, mid)
            self._slo = 0
        elif s == self._slo:
            self._iv = (mid, hi)
        else:
            self._iv = (lo, mid)

    def split_at(self, x: mpq) -> None:
        """Shrink the interval to the side of ``x`` holding the root."""
        lo, hi = self._iv
        if not (lo < x < hi):
            return
        s = sgn(peval(self.poly, x))
        if s == 0:
            self._iv = (x, x)
            self._slo = 0
        elif s == self._slo:
            self._iv = (x, hi)
        else:
            self._iv = (lo, x)

    def tighten(self, width) -> None:
        width = mpq(width)
        while self._iv[1] - self._iv[0] > width:
            self.bisect()

    def approx(self, width=mpq(1, 1 << 60)) -> mpq:
        """A rational within ``width`` of the value."""
        self.tighten(width)
        lo, hi = self._iv
        return (lo + hi) / 2

    def __float__(self) -> float:
        lo, hi = self._iv
        if lo == hi:
            return float(lo)
        scale = max(abs(lo), abs(hi), ONE)
        self.tighten(scale / (1 << 60))
        lo, hi = self._iv
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgebraicReal({self.lo})"
        return f"AlgebraicReal(~{float(self):.12g}, poly={self.poly})"

    # ordering via compare(); hashing is deliberately unsupported
    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __eq__(self, other):
        if isinstance(other, (AlgebraicReal, int, mpq(0).__class__, Fraction)):
            return compare(self, other) == 0
        return NotImplemented

    __hash__ = None


Real = Union[AlgebraicReal, mpq, int]


def as_algebraic(x) -> AlgebraicReal:
    if isinstance(x, AlgebraicReal):
        return x
    return AlgebraicReal.rational(x)


def isolate_real_roots(p: Poly) -> list:
    """All distinct real roots of p, ascending, as (AlgebraicReal, multiplicity)."""
    p = strip(p)
    if not p:
        raise ValueError("identically zero")
    roots = []
    for f, mult in sqf_list(p):
        for r in _roots_squarefree(f):
            roots.append((r, mult))
    roots.sort(key=cmp_to_key(lambda a, b: compare(a[0], b[0])))
    return roots


def real_roots(p: Poly) -> list:
    """Distinct real roots of p (without multiplicities), ascending."""
    return [r for r, _ in isolate_real_roots(p)]


def _roots_squarefree(f: Poly) -> list:
    f = primitive(f)
    if degree(f) < 1:
        return []
    if degree(f) == 1:
        return [AlgebraicReal.rational(mpq(-f[0], f[1]))]
    out = []
    if f[0] == 0:
        out.append(AlgebraicReal.rational(0))
        f = primitive(f[1:])
        if degree(f) < 1:
            return out
        if degree(f) == 1:
            out.append(AlgebraicReal.rational(mpq(-f[0], f[1])))
            return out
    ivs, exact = _isolate_positive(f)
    for lo, hi in ivs:
        out.append(_make_root(f, lo, hi))
    out.extend(AlgebraicReal.rational(x) for x in exact)
    fneg = tuple(c if i % 2 == 0 else -c for i, c in enumerate(f))
    ivs, exact = _isolate_positive(fneg)
    for lo, hi in ivs:
        out.append(_make_root(f, -hi, -lo))
    out.extend(AlgebraicReal.rational(-x) for x in exact)
    return out


def _inner_sign(f: Poly, x: mpq, side: int) -> int:
    """Sign of f just to the right (side=+1) or left (side=-1) of x."""
    s = sgn(peval(f, x))
    if s:
        return s
    # simple root at x (f square-free)
    return side * sgn(peval(pderiv(f), x))


def _make_root(f: Poly, lo: mpq, hi: mpq) -> AlgebraicReal:
    """Build an AlgebraicReal from an interval holding exactly one root of f
    in its interior; endpoints may themselves be roots of f."""
    cand = simplest_between(lo, hi)
    if peval(f, cand) == 0:
        return AlgebraicReal.rational(cand)
    slo = sgn(peval(f, lo))
    shi = sgn(peval(f, hi))
    if slo and shi:
        return AlgebraicReal._trusted(f, lo, hi, slo)
    inner_lo = _inner_sign(f, lo, +1)
    while True:
        mid = (lo + hi) / 2
        sm = sgn(peval(f, mid))
        if sm == 0:
            return AlgebraicReal.rational(mid)
        if sm != inner_lo:
            hi = mid
        else:
            lo, inner_lo = mid, sm
        slo = sgn(peval(f, lo))
        shi = sgn(peval(f, hi))
        if slo and shi:
            return AlgebraicReal._trusted(f, lo, hi, slo)


def refine(a: Real, width) -> Real:
    """Copy of ``a`` whose isolating interval has width <= ``width``."""
    if not isinstance(a, AlgebraicReal):
        return a
    if mpq(width) <= 0:
        raise ValueError("width must be positive")
    b = AlgebraicReal._trusted(a.poly, a._iv[0], a._iv[1], a._slo)
    b.tighten(width)
    return b


def _is_root_of(g: Poly, a: AlgebraicReal) -> bool:
    lo, hi = a._iv
    if lo == hi:
        return peval(g, lo) == 0
    return sgn(peval(g, lo)) * sgn(peval(g, hi)) < 0


def compare(a: Real, b: Real) -> int:
    """Exact three-way comparison of rationals and algebraic reals."""
    a_alg = isinstance(a, AlgebraicReal)
    b_alg = isinstance(b, AlgebraicReal)
    if not a_alg and not b_alg:
        return sgn(a - b)
    if not a_alg:
        return -_compare_alg_rat(b, mpq(a))
    if not b_alg:
        return _compare_alg_rat(a, mpq(b))
    if a is b:
        return EQUAL
    gcd_checked = False
    while True:
        alo, ahi = a._iv
        blo, bhi = b._iv
        if alo == ahi and blo == bhi:
            return sgn(alo - blo)
        if alo == ahi:
            return -_compare_alg_rat(b, alo)
        if blo == bhi:
            return _compare_alg_rat(a, blo)
        if ahi <= blo:
            return LESS
        if bhi <= alo:
            return GREATER
        if not gcd_checked:
            gcd_checked = True
            g = a.poly if a.poly == b.poly else pgcd(a.poly, b.poly)
            if degree(g) > 0 and _is_root_of(g, a) and _is_root_of(g, b):
                lo, hi = max(alo, blo), min(ahi, bhi)
                if sgn(peval(g, lo)) * sgn(peval(g, hi)) < 0:
                    return EQUAL
        if ahi - alo >= bhi - blo:
            a.bisect()
        else:
            b.bisect()


def _compare_alg_rat(a: AlgebraicReal, x: mpq) -> int:
    lo, hi = a._iv
    if lo == hi:
        return sgn(lo - x)
    if hi <= x:
        return LESS
    if x <= lo:
        return GREATER
    if peval(a.poly, x) == 0:
        return EQUAL
    a.split_at(x)
    return LESS if a._iv[1] <= x else GREATER


def sign_at(p: Poly, a: Real) -> int:
    """Exact sign of p at a rational or algebraic point."""
    if not isinstance(a, AlgebraicReal):
        return sgn(peval(p, a))
    if a.is_rational:
        return sgn(peval(p, a.lo))
    lo, hi = a._iv
    elo, ehi = peval_interval(p, lo, hi)
    if elo > 0:
        return 1
    if ehi < 0:
        return -1
    g = pgcd(p, a.poly)
    if degree(g) > 0 and _is_root_of(g, a):
        return 0
    while True:
        a.bisect()
        lo, hi = a._iv
        if lo == hi:
            return sgn(peval(p, lo))
        elo, ehi = peval_interval(p, lo, hi)
        if elo > 0:
            return 1
        if ehi < 0:
            return -1


def rational_between(a: Real, b: Real) -> mpq:
    """A simple rational strictly between a < b."""
    if compare(a, b) >= 0:
        raise ValueError("need a < b")
    a_hi = _upper(a)
    b_lo = _lower(b)
    while a_hi >= b_lo:
        if isinstance(a, AlgebraicReal) and not a.is_rational:
            a.bisect()
        if isinstance(b, AlgebraicReal) and not b.is_rational:
            b.bisect()
        a_hi, b_lo = _upper(a), _lower(b)
    return simplest_between(a_hi, b_lo)


def _upper(a: Real) -> mpq:
    return a._iv[1] if isinstance(a, AlgebraicReal) else mpq(a)


def _lower(a: Real) -> mpq:
    return a._iv[0] if isinstance(a, AlgebraicReal) else mpq(a)


def _floor(x: mpq) -> mpq:
    return mpq(x.numerator // x.denominator)


def simplest_between(lo, hi) -> mpq:
    """Rational with the smallest denominator in the open interval (lo, hi)."""
    lo, hi = mpq(lo), mpq(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return mpq(0)
    if hi <= 0:
        return -_simplest_pos(-hi, -lo)
    return _simplest_pos(lo, hi)


def _simplest_pos(lo: mpq, hi: mpq) -> mpq:
    # 0 <= lo < hi
    fl = _floor(lo)
    if fl + 1 < hi:
        return fl + 1
    if lo == fl:
        return fl + mpq(1, int(_floor(1 / (hi - fl))) + 1)
    return fl + 1 / _simplest_pos(1 / (hi - fl), 1 / (lo - fl))


def sqrt_floor_interval(x: mpq, digits: int = 40) -> tuple:
    """Rational bracket [l, u] of sqrt(x) for x >= 0 (used for lengths)."""
    if x < 0:
        raise ValueError("negative")
    scale = 1 << (4 * digits)
    v = int(gmpy2.isqrt(gmpy2.floor(x * scale * scale)))
    return mpq(v, scale), mpq(v + 1, scale)


def to_float(x: Real) -> float:
    return float(x)
