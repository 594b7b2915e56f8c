import math
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from mmsplan.numeric import (
    EQUAL,
    GREATER,
    LESS,
    AlgebraicReal,
    compare,
    have_common_root,
    isolate_real_roots,
    pgcd,
    pmul,
    primitive,
    refine,
    sign_at,
    sqf_part,
)
from oracles import ev, fr, sturm_count

polys = st.lists(st.integers(-20, 20), min_size=2, max_size=9).filter(lambda c: any(c[1:]))


def root_of(p, lo, hi):
    for r, _ in isolate_real_roots(p):
        if lo <= float(r) <= hi:
            return r
    raise AssertionError("no root in range")


def sqrt2():
    return root_of((-2, 0, 1), 1, 2)


def test_sqrt2_roots():
    roots = isolate_real_roots((-2, 0, 1))
    assert [m for _, m in roots] == [1, 1]
    assert [round(float(r), 5) for r, _ in roots] == [-1.41421, 1.41421]


def test_multiplicities_of_factored_cubic():
    # (x-1)^2 (x+3) = x^3 + x^2 - 5x + 3
    roots = isolate_real_roots((3, -5, 1, 1))
    assert [(float(r), m) for r, m in roots] == [(-3.0, 1), (1.0, 2)]


def test_no_real_roots():
    assert isolate_real_roots((1, 0, 1)) == []


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError, match="identically zero"):
        isolate_real_roots(())


def test_refine_sqrt2():
    r = sqrt2()
    refine(r, mpq(1, 100))
    assert r.hi - r.lo <= mpq(1, 100)
    assert r.lo * r.lo < 2 < r.hi * r.hi


def test_refine_rational_root_keeps_value():
    r = root_of((-3, 2), 1, 2)
    refine(r, mpq(1, 10**6))
    assert r.lo <= mpq(3, 2) <= r.hi


def test_refine_cube_root_against_float():
    r = root_of((-2, 0, 0, 1), 1, 2)
    refine(r, mpq(1, 10**6))
    c = 2 ** (1 / 3)
    assert float(r.lo) <= c <= float(r.hi)
    assert r.hi - r.lo <= mpq(1, 10**6)


def test_compare_examples():
    s = sqrt2()
    assert compare(s, mpq(3, 2)) == LESS
    assert compare(s, root_of((-2, 0, 1), 1, 2)) == EQUAL
    assert compare(root_of((-3, 0, 1), 0, 3), s) == GREATER


def test_sign_at_examples():
    assert sign_at((-2, 0, 1), mpq(1)) == -1
    assert sign_at((-2, 0, 1), sqrt2()) == 0
    # x^3 - x at sqrt(3)
    r = root_of((-3, 0, 1), 0, 3)
    assert sign_at((0, -1, 0, 1), r) == 1


def test_sign_at_interval_oracle():
    # sign of x^3 - x at sqrt(3) by refining until the image interval excludes 0
    r = root_of((-3, 0, 1), 0, 3)
    lo, hi = fr(r.lo), fr(r.hi)
    while True:
        vals = [ev([0, -1, 0, 1], x) for x in (lo, hi)]
        if min(vals) > 0 and lo > 1:
            break
        mid = (lo + hi) / 2
        if (mid * mid - 3) * (lo * lo - 3) > 0:
            lo = mid
        else:
            hi = mid
    assert sign_at((0, -1, 0, 1), r) == 1


def test_gcd_and_square_free():
    g = pgcd((-1, 0, 1), (-1, 1))
    assert primitive(g) in ((-1, 1), (1, -1))
    sf = primitive(sqf_part((3, -5, 1, 1)))
    assert sf in ((-3, 2, 1), (3, -2, -1))
    assert not have_common_root((1, 0, 1), (-2, 0, 1))


@given(polys)
def test_root_count_matches_sturm(coeffs):
    roots = isolate_real_roots(tuple(coeffs))
    assert len(roots) == sturm_count(coeffs)
    total = sum(m for _, m in roots)
    assert total <= len(coeffs) - 1
    for (a, _), (b, _) in zip(roots, roots[1:]):
        assert compare(a, b) < 0


@given(polys)
def test_isolating_intervals_hold_one_root(coeffs):
    for r, _ in isolate_real_roots(tuple(coeffs)):
        if r.is_rational:
            assert ev(coeffs, fr(r.lo)) == 0
        else:
            assert sturm_count(sqf_part(tuple(coeffs)), r.lo, r.hi) == 1
            assert ev(r.poly, fr(r.lo)) * ev(r.poly, fr(r.hi)) < 0


def _random_roots(seed, n=3):
    rnd = random.Random(seed)
    out = []
    for _ in range(n):
        a = rnd.randint(1, 30)
        b = rnd.choice([-1, 1]) * rnd.randint(0, 5)
        p = (rnd.randint(-30, -1), b, a)
        rs = isolate_real_roots(p)
        out.append(rs[rnd.randrange(len(rs))][0] if rs else mpq(rnd.randint(-5, 5), rnd.randint(1, 5)))
    return out


@given(st.integers(0, 10**6))
def test_compare_total_order(seed):
    a, b, c = _random_roots(seed)
    assert compare(a, b) == -compare(b, a)
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0
    assert compare(a, a) == 0


@given(st.integers(0, 10**6), st.fractions(-6, 6, max_denominator=50))
def test_refine_preserves_comparisons(seed, probe):
    a = _random_roots(seed, 1)[0]
    if not isinstance(a, AlgebraicReal):
        return
    probe = mpq(probe.numerator, probe.denominator)
    before = compare(a, probe)
    refine(a, mpq(1, 10**9))
    assert compare(a, probe) == before


@given(polys, polys, st.integers(0, 10**6))
def test_sign_is_multiplicative(p, q, seed):
    rnd = random.Random(seed)
    candidates = [r for r, _ in isolate_real_roots((-7, 0, 1)) + isolate_real_roots((-1, -1, 1))]
    x = candidates[rnd.randrange(len(candidates))]
    assert sign_at(pmul(tuple(p), tuple(q)), x) == sign_at(tuple(p), x) * sign_at(tuple(q), x)


def test_algebraic_real_rejects_bad_interval():
    with pytest.raises(ValueError):
        AlgebraicReal((-2, 0, 1), mpq(2), mpq(3))


def test_to_float_close():
    assert math.isclose(float(sqrt2()), math.sqrt(2), rel_tol=1e-15)
