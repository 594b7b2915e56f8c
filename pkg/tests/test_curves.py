import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from mmsplan.curves import (
    RationalFunction,
    compare_y_at,
    difference_numerator,
    evaluate,
    one_curve_topology,
    pair_topology,
    split_into_arcs,
)
from mmsplan.numeric import isolate_real_roots, rational_between, sign_at
from oracles import ev, fr

BELOW, EQUAL, ABOVE = -1, 0, 1

RF = RationalFunction


def interval_samples(breakpoints):
    """One rational per open interval between consecutive breakpoints."""
    xs = [b.x for b in breakpoints]
    if not xs:
        return [mpq(0)]
    out = [mpq(int(xs[0].lo) - 1) if hasattr(xs[0], "lo") else xs[0] - 1]
    for a, b in zip(xs, xs[1:]):
        out.append(rational_between(a, b))
    out.append(mpq(int(xs[-1].hi) + 1))
    return out


def direct_sign(f, x):
    x = fr(x)
    d = ev(f.den, x)
    n = ev(f.num, x)
    return (n * d > 0) - (n * d < 0)


def direct_order(f, g, x):
    a = ev(f.num, fr(x)) / ev(f.den, fr(x))
    b = ev(g.num, fr(x)) / ev(g.den, fr(x))
    return (a > b) - (a < b)


def test_reciprocal_topology():
    t = one_curve_topology(RF((1,), (0, 1)))
    assert [sorted(b.kinds) for b in t.breakpoints] == [["pole"]]
    assert t.signs == (-1, 1)


def test_even_zero_does_not_flip():
    t = one_curve_topology(RF((1, -2, 1), (0, 1)))
    assert [float(b.x) for b in t.breakpoints] == [0.0, 1.0]
    assert t.signs == (-1, 1, 1)


def test_zeros_of_shifted_quadratic():
    t = one_curve_topology(RF((-1, 0, 1), (1, 0, 1)))
    assert t.signs == (1, -1, 1)


def test_pair_lines():
    t = pair_topology(RF((0, 1)), RF((0, -1)))
    assert [float(x) for x in t.intersections()] == [0.0]
    assert t.orders == (BELOW, ABOVE)


def test_pair_reciprocal_and_identity():
    f, g = RF((1,), (0, 1)), RF((0, 1))
    t = pair_topology(f, g)
    assert [float(b.x) for b in t.breakpoints] == [-1.0, 0.0, 1.0]
    for x, order in zip(interval_samples(t.breakpoints), t.orders):
        assert order == direct_order(f, g, x)


def test_pair_overlap():
    f = RF((2, 1), (-3, 1))
    assert pair_topology(f, RF((4, 2), (-6, 2))).overlap


def test_compare_y_at_examples():
    assert compare_y_at(RF((0, 0, 1)), RF((1, 1)), mpq(0)) == BELOW
    assert compare_y_at(RF((1,), (0, 1)), RF((0, 1)), mpq(1)) == EQUAL
    root2 = [r for r, _ in isolate_real_roots((-2, 0, 1))][1]
    f, one = RF((1, 0, 3), (2, 0, 2)), RF.constant(1)
    assert compare_y_at(f, one, root2) == ABOVE
    # oracle: sign of r = f_n - f_d at sqrt 2
    assert sign_at(difference_numerator(f, one), root2) == 1


def test_compare_at_pole_is_undefined():
    with pytest.raises(ValueError, match="undefined"):
        compare_y_at(RF((1,), (0, 1)), RF((0, 1)), mpq(0))


def test_split_into_arcs_examples():
    assert len(split_into_arcs(RF((0, 1)), mpq(0), mpq(1))) == 1
    assert len(split_into_arcs(RF((1,), (0, 1)), mpq(-1), mpq(1))) == 2
    assert len(split_into_arcs(RF((0, 1), (-1, 0, 1)), mpq(-2), mpq(2))) == 3


def test_evaluate_examples():
    assert evaluate(RF((1, 0, 1), (0, 1)), 2) == mpq(5, 2)
    assert evaluate(RF((-1, 0, 1), (3, 1)), 1) == 0
    assert evaluate(RF((1, 0, 3), (2, 0, 2)), 1) == 1
    with pytest.raises(ZeroDivisionError):
        evaluate(RF((1,), (0, 1)), 0)


def test_removable_singularity_cancelled():
    f = RF((-2, 0, 2), (-4, 0, 4))
    assert f.is_constant and f.constant_value == mpq(1, 2)


def test_cache_idempotence():
    f = RF((1, 2, 3), (5, 0, 1))
    assert one_curve_topology(f) is one_curve_topology(RF((2, 4, 6), (10, 0, 2)))
    g = RF((0, 1))
    assert pair_topology(f, g) is pair_topology(f, g)


small = st.integers(-9, 9)
polys = st.lists(small, min_size=1, max_size=5)


def _rf(num, den):
    if not any(den):
        den = [1]
    return RF(tuple(num), tuple(den))


@given(polys, polys)
def test_one_curve_signs_match_evaluation(num, den):
    f = _rf(num, den)
    t = one_curve_topology(f)
    for x, s in zip(interval_samples(t.breakpoints), t.signs):
        assert s == direct_sign(f, x)


@given(polys, polys, polys, polys)
def test_pair_orders_match_evaluation(a, b, c, d):
    f, g = _rf(a, b), _rf(c, d)
    t = pair_topology(f, g)
    if t.overlap:
        assert f.key == g.key
        return
    for x, o in zip(interval_samples(t.breakpoints), t.orders):
        assert o == direct_order(f, g, x)
    for x in t.intersections():
        assert sign_at(difference_numerator(f, g), x) == 0


@given(polys, polys, polys, polys, st.integers(0, 10**6))
def test_compare_is_antisymmetric(a, b, c, d, seed):
    f, g = _rf(a, b), _rf(c, d)
    rnd = random.Random(seed)
    probes = [mpq(rnd.randint(-40, 40), rnd.randint(1, 9))] + [r for r, _ in isolate_real_roots((-3, 0, 1))]
    for x in probes:
        try:
            u = compare_y_at(f, g, x)
        except ValueError:
            continue
        assert compare_y_at(g, f, x) == -u
