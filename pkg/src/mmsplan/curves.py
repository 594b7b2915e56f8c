"""Exact topology of rational functions y = f_n(x) / f_d(x) over the x-axis.

Sign structure of a single curve and the y-order of a pair of curves are
computed once per canonical curve (or pair) and cached.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from typing import Optional, Sequence, Union

import gmpy2
from gmpy2 import mpq, mpz

from .numeric import (
    AlgebraicReal,
    Poly,
    Q,
    compare,
    content,
    degree,
    from_rationals,
    isolate_real_roots,
    lc,
    pdivmod_q,
    peval,
    peval_interval,
    pgcd,
    pmul,
    psub,
    pscale,
    sgn,
    sign_at,
    strip,
)

BELOW, EQUAL, ABOVE = -1, 0, 1
OVERLAP = "overlap"

Real = Union[AlgebraicReal, mpq]


def _canonical_pair(num: Poly, den: Poly) -> tuple:
    """Coprime integer pair with joint content 1 and positive leading denominator."""
    num, den = strip(num), strip(den)
    if not den:
        raise ZeroDivisionError("denominator is identically zero")
    if not num:
        return (), (1,)
    g = pgcd(num, den)
    if degree(g) > 0:
        qn, rn = pdivmod_q(num, g)
        qd, rd = pdivmod_q(den, g)
        assert not rn and not rd
        k = len(qn)
        both = from_rationals(list(qn) + list(qd))
        both = tuple(both) + (0,) * (len(qn) + len(qd) - len(both))
        num, den = strip(both[:k]), strip(both[k:])
    c = mpz(gmpy2.gcd(content(num), content(den)))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = tuple(int(x // c) for x in num)
        den = tuple(int(x // c) for x in den)
    return tuple(int(x) for x in num), tuple(int(x) for x in den)


@dataclass(frozen=True)
class RationalFunction:
    """Canonical coprime quotient of integer polynomials (low degree first)."""

    num: Poly
    den: Poly = (1,)

    def __post_init__(self):
        n, d = _canonical_pair(self.num, self.den)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    @classmethod
    def from_rationals(cls, num: Sequence, den: Sequence = (1,)) -> "RationalFunction":
        coeffs = [Q(c) for c in num] + [Q(c) for c in den]
        ints = from_rationals(coeffs)
        ints = tuple(ints) + (0,) * (len(coeffs) - len(ints))
        return cls(ints[: len(num)], ints[len(num) :])

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        c = Q(c)
        return cls((int(c.numerator),), (int(c.denominator),))

    @property
    def key(self) -> tuple:
        return (self.num, self.den)

    @property
    def is_constant(self) -> bool:
        return degree(self.num) <= 0 and degree(self.den) <= 0

    @property
    def constant_value(self) -> Optional[mpq]:
        if not self.is_constant:
            return None
        return mpq(self.num[0], self.den[0]) if self.num else mpq(0)

    def __call__(self, x) -> mpq:
        return evaluate(self, x)

    def minus_constant(self, c) -> Poly:
        """Numerator of f - c (its zeros are where f crosses y = c)."""
        c = Q(c)
        return strip(psub(pscale(self.num, c.denominator), pscale(self.den, c.numerator)))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num}/{self.den})"


def evaluate(f: RationalFunction, x0) -> mpq:
    x0 = Q(x0)
    d = peval(f.den, x0)
    if d == 0:
        raise ZeroDivisionError("pole")
    return mpq(peval(f.num, x0)) / d


# ---------------------------------------------------------------------------
# one-curve topology


@dataclass(frozen=True)
class Breakpoint:
    x: AlgebraicReal
    kinds: frozenset
    multiplicity: int


@dataclass(frozen=True)
class CurveTopology:
    """Zeros and poles of f in ascending order and the sign of f between them.

    ``signs[i]`` is the sign on the open interval left of ``breakpoints[i]``;
    ``signs[-1]`` is the sign right of the last breakpoint.
    """

    breakpoints: tuple
    signs: tuple

    def interval_index(self, x: Real) -> tuple:
        """(i, on_breakpoint): interval index, or breakpoint index when on one."""
        return _locate(self.breakpoints, x)


def _locate(bps: Sequence[Breakpoint], x: Real) -> tuple:
    lo, hi = 0, len(bps)
    while lo < hi:
        mid = (lo + hi) // 2
        c = compare(x, bps[mid].x)
        if c == 0:
            return mid, True
        if c < 0:
            hi = mid
        else:
            lo = mid + 1
    return lo, False


def _merge_roots(tagged: Sequence[tuple]) -> list:
    """Merge (root, kind, mult) triples from several polynomials into breakpoints."""
    tagged = sorted(tagged, key=cmp_to_key(lambda a, b: compare(a[0], b[0])))
    out: list = []
    for x, kind, m in tagged:
        if out and compare(out[-1][0], x) == 0:
            out[-1][1].add(kind)
            out[-1][2] += m
        else:
            out.append([x, {kind}, m])
    return [Breakpoint(x, frozenset(k), m) for x, k, m in out]


def _propagate(bps: Sequence[Breakpoint], right_sign: int, parity_mult) -> tuple:
    signs = [0] * (len(bps) + 1)
    signs[-1] = right_sign
    for i in range(len(bps) - 1, -1, -1):
        m = parity_mult(bps[i])
        signs[i] = -signs[i + 1] if m % 2 else signs[i + 1]
    return tuple(signs)


@lru_cache(maxsize=1 << 16)
def _curve_topology(num: Poly, den: Poly) -> CurveTopology:
    if not num:
        return CurveTopology((), (0,))
    tagged = [(x, "zero", m) for x, m in isolate_real_roots(num)]
    tagged += [(x, "pole", m) for x, m in isolate_real_roots(den)]
    bps = _merge_roots(tagged)
    signs = _propagate(bps, sgn(lc(num)) * sgn(lc(den)), lambda b: b.multiplicity)
    return CurveTopology(tuple(bps), signs)


def one_curve_topology(f: RationalFunction) -> CurveTopology:
    return _curve_topology(f.num, f.den)


def sign_of(f: RationalFunction, x: Real) -> int:
    """Exact sign of f at x; raises ZeroDivisionError at a pole."""
    if not isinstance(x, AlgebraicReal) or x.is_rational:
        v = x.lo if isinstance(x, AlgebraicReal) else Q(x)
        d = peval(f.den, v)
        if d == 0:
            raise ZeroDivisionError("pole")
        return sgn(peval(f.num, v)) * sgn(d)
    top = one_curve_topology(f)
    i, on = top.interval_index(x)
    if on:
        if "pole" in top.breakpoints[i].kinds:
            raise ZeroDivisionError("pole")
        return 0
    return top.signs[i]


# ---------------------------------------------------------------------------
# pair topology


@dataclass(frozen=True)
class CurvePairTopology:
    """y-order of f relative to g between breakpoints.

    Breakpoints are the real roots of ``r = f_n g_d - g_n f_d`` (kind
    ``"intersection"`` unless also a pole) and of both denominators
    (``"pole_f"``, ``"pole_g"``).  ``orders[i]`` is BELOW / ABOVE for the open
    interval left of breakpoint i.  ``overlap`` is set when r vanishes
    identically.
    """

    breakpoints: tuple
    orders: tuple
    overlap: bool = False

    def intersections(self) -> list:
        """x-coordinates where the curves meet (both defined)."""
        return [
            b.x
            for b in self.breakpoints
            if "intersection" in b.kinds and "pole_f" not in b.kinds and "pole_g" not in b.kinds
        ]

    def intersection_breakpoints(self) -> list:
        return [
            b
            for b in self.breakpoints
            if "intersection" in b.kinds and "pole_f" not in b.kinds and "pole_g" not in b.kinds
        ]


def difference_numerator(f: RationalFunction, g: RationalFunction) -> Poly:
    return psub(pmul(f.num, g.den), pmul(g.num, f.den))


@lru_cache(maxsize=1 << 18)
def _pair_topology(fk: tuple, gk: tuple) -> CurvePairTopology:
    fn, fd = fk
    gn, gd = gk
    r = psub(pmul(fn, gd), pmul(gn, fd))
    if not r:
        return CurvePairTopology((), (EQUAL,), True)
    tagged = [(x, "intersection", m) for x, m in isolate_real_roots(r)]
    tagged += [(x, "pole_f", m) for x, m in isolate_real_roots(fd)] if degree(fd) > 0 else []
    tagged += [(x, "pole_g", m) for x, m in isolate_real_roots(gd)] if degree(gd) > 0 else []
    bps = _merge_roots(tagged)
    # sign(f - g) = sign(r) * sign(f_d) * sign(g_d)
    right = sgn(lc(r)) * sgn(lc(fd)) * sgn(lc(gd))
    orders = _propagate(bps, right, lambda b: b.multiplicity)
    return CurvePairTopology(tuple(bps), orders)


def _flip(t: CurvePairTopology) -> CurvePairTopology:
    swap = {"pole_f": "pole_g", "pole_g": "pole_f", "intersection": "intersection"}
    bps = tuple(Breakpoint(b.x, frozenset(swap[k] for k in b.kinds), b.multiplicity) for b in t.breakpoints)
    return CurvePairTopology(bps, tuple(-o for o in t.orders), t.overlap)


def pair_topology(f: RationalFunction, g: RationalFunction) -> CurvePairTopology:
    """Cached per unordered pair; the reversed pair is derived by flipping."""
    if f.key <= g.key:
        return _pair_topology(f.key, g.key)
    return _flip_cached(g.key, f.key)


@lru_cache(maxsize=1 << 18)
def _flip_cached(fk, gk) -> CurvePairTopology:
    return _flip(_pair_topology(fk, gk))


def compare_y_at(f: RationalFunction, g: RationalFunction, x0: Real) -> int:
    """Order of f(x0) relative to g(x0): BELOW, EQUAL or ABOVE.

    Raises ValueError("undefined") at a pole of either curve.
    """
    if not isinstance(x0, AlgebraicReal) or x0.is_rational:
        v = x0.lo if isinstance(x0, AlgebraicReal) else Q(x0)
        fd, gd = peval(f.den, v), peval(g.den, v)
        if fd == 0 or gd == 0:
            raise ValueError("undefined")
        return sgn(peval(f.num, v) * gd - peval(g.num, v) * fd) * sgn(fd) * sgn(gd)
    t = pair_topology(f, g)
    if t.overlap:
        if sign_at(f.den, x0) == 0:
            raise ValueError("undefined")
        return EQUAL
    i, on = _locate(t.breakpoints, x0)
    if on:
        if t.breakpoints[i].kinds & {"pole_f", "pole_g"}:
            raise ValueError("undefined")
        return EQUAL
    return t.orders[i]


def crossings(f: RationalFunction, c) -> list:
    """Distinct real x with f(x) = c (as AlgebraicReals)."""
    return [x for x, _ in _crossings(f.num, f.den, Q(c))]


@lru_cache(maxsize=1 << 16)
def _crossings(num, den, c) -> tuple:
    p = psub(pscale(num, c.denominator), pscale(den, c.numerator))
    if not p:
        return ()
    return tuple((x, m) for x, m in isolate_real_roots(p) if sign_at(den, x) != 0)


def poles(f: RationalFunction) -> list:
    return [b.x for b in one_curve_topology(f).breakpoints if "pole" in b.kinds]


def cache_info() -> dict:
    return {
        "curve": _curve_topology.cache_info(),
        "pair": _pair_topology.cache_info(),
        "crossings": _crossings.cache_info(),
    }


def clear_caches() -> None:
    _curve_topology.cache_clear()
    _pair_topology.cache_clear()
    _flip_cached.cache_clear()
    _crossings.cache_clear()


# ---------------------------------------------------------------------------
# arcs and curve values


@dataclass(frozen=True)
class XMonotoneArc:
    """Graph of ``curve`` over the open x-range (lo, hi); None is infinite."""

    curve: RationalFunction
    lo: Optional[Real]
    hi: Optional[Real]


def split_into_arcs(f: RationalFunction, lo: Optional[Real] = None, hi: Optional[Real] = None) -> list:
    """Pole-free pieces of f over (lo, hi)."""
    cuts = []
    for p in poles(f):
        if (lo is None or compare(p, lo) > 0) and (hi is None or compare(p, hi) < 0):
            cuts.append(p)
    ends = [lo] + cuts + [hi]
    return [XMonotoneArc(f, a, b) for a, b in zip(ends, ends[1:])]


class CurveValue:
    """The exact number f(x) for a rational function f and algebraic x."""

    __slots__ = ("f", "x")

    def __init__(self, f: RationalFunction, x: Real):
        self.f = f
        self.x = x

    def compare_rational(self, y) -> int:
        y = Q(y)
        if not isinstance(self.x, AlgebraicReal) or self.x.is_rational:
            return sgn(evaluate(self.f, _as_q(self.x)) - y)
        p = self.f.minus_constant(y)
        return sign_at(p, self.x) * sign_at(self.f.den, self.x)

    def compare(self, other: "CurveValue") -> int:
        return compare_y_at(self.f, other.f, self.x)

    def rational(self) -> Optional[mpq]:
        if not isinstance(self.x, AlgebraicReal) or self.x.is_rational:
            return evaluate(self.f, _as_q(self.x))
        if self.f.is_constant:
            return self.f.constant_value
        return None

    def enclosure(self, width=mpq(1, 1 << 40)) -> tuple:
        """Rational (lo, hi) bracketing the value."""
        q = self.rational()
        if q is not None:
            return q, q
        x = self.x

        while True:
            nlo, nhi = peval_interval(self.f.num, x.lo, x.hi)
            dlo, dhi = peval_interval(self.f.den, x.lo, x.hi)
            if dlo > 0 or dhi < 0:
                cands = [nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi]
                lo, hi = min(cands), max(cands)
                if hi - lo <= width:
                    return lo, hi
            x.bisect()
            if x.is_rational:
                q = evaluate(self.f, x.lo)
                return q, q

    def __float__(self) -> float:
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        return f"CurveValue(~{float(self):.9g})"


def _as_q(x) -> mpq:
    return x.lo if isinstance(x, AlgebraicReal) else Q(x)
