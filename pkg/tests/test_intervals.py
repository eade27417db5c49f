from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tangent_quadrics.intervals import ComplexInterval, ComplexRational


rationals = st.fractions(
    min_value=Fraction(-1000), max_value=Fraction(1000), max_denominator=997
)
small_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


class TestSoundness:
    """The load-bearing property: exact results lie inside interval results."""

    @settings(max_examples=2000, deadline=None)
    @given(rationals, rationals, rationals, rationals)
    def test_complex_ops_contain_exact(self, ar, ai, br, bi):
        a_exact = (ar, ai)
        b_exact = (br, bi)
        ia = ComplexInterval.from_number(float(ar)) + ComplexInterval(0, 0, float(ai), 0)
        # build intervals centered at the float approximations
        ia = ComplexInterval(float(ar), abs(float(ar)) * 2**-52 + 5e-324,
                             float(ai), abs(float(ai)) * 2**-52 + 5e-324)
        ib = ComplexInterval(float(br), abs(float(br)) * 2**-52 + 5e-324,
                             float(bi), abs(float(bi)) * 2**-52 + 5e-324)
        assert ia.contains_exact(ar, ai) and ib.contains_exact(br, bi)
        s = ia + ib
        assert s.contains_exact(ar + br, ai + bi)
        d = ia - ib
        assert d.contains_exact(ar - br, ai - bi)
        p = ia * ib
        assert p.contains_exact(ar * br - ai * bi, ar * bi + ai * br)

    @settings(max_examples=500, deadline=None)
    @given(rationals, rationals, st.integers(min_value=1, max_value=1000))
    def test_integer_division_contains_exact(self, ar, ai, n):
        ia = ComplexInterval(float(ar), abs(float(ar)) * 2**-52 + 5e-324,
                             float(ai), abs(float(ai)) * 2**-52 + 5e-324)
        q = ia / n
        assert q.contains_exact(Fraction(ar, n), Fraction(ai, n))

    def test_mass_random_products(self):
        rng = np.random.default_rng(0)
        for _ in range(20000):
            a = Fraction(int(rng.integers(-999, 1000)), int(rng.integers(1, 999)))
            b = Fraction(int(rng.integers(-999, 1000)), int(rng.integers(1, 999)))
            ia = ComplexInterval.from_number(a)
            ib = ComplexInterval.from_number(b)
            assert (ia * ib).contains_exact(a * b)
            assert (ia + ib).contains_exact(a + b)
            assert (ia - ib).contains_exact(a - b)

    def test_fraction_enclosure(self):
        q = Fraction(1, 3)
        iv = ComplexInterval.from_number(q)
        assert iv.contains_exact(q)
        assert iv.re_rad > 0  # 1/3 is not a float

    def test_chained_polynomial_evaluation(self):
        # evaluate a small polynomial both exactly and in intervals
        rng = np.random.default_rng(1)
        for _ in range(300):
            xs = [Fraction(int(v), 64) for v in rng.integers(-64, 65, size=4)]
            ivs = [ComplexInterval.from_number(float(x)) for x in xs]
            exact = xs[0] * xs[1] * xs[2] - xs[3] * xs[1] + xs[2] * xs[2] * xs[0] - 7
            got = ivs[0] * ivs[1] * ivs[2] - ivs[3] * ivs[1] + ivs[2] * ivs[2] * ivs[0] - 7
            assert got.contains_exact(exact)


class TestPredicates:
    def test_contained_in_interior(self):
        small = ComplexInterval(0.0, 0.1, 0.0, 0.1)
        big = ComplexInterval(0.01, 0.5, 0.0, 0.5)
        assert small.contained_in_interior(big)
        assert not big.contained_in_interior(small)

    def test_containment_is_strict(self):
        a = ComplexInterval(0.0, 0.5, 0.0, 0.5)
        assert not a.contained_in_interior(a)

    def test_disjoint(self):
        a = ComplexInterval(0.0, 0.4, 0.0, 1.0)
        b = ComplexInterval(1.0, 0.4, 0.0, 1.0)
        assert a.disjoint_from(b) and b.disjoint_from(a)
        c = ComplexInterval(0.5, 0.2, 5.0, 0.1)  # re overlaps, im far away
        assert a.disjoint_from(c)

    def test_not_disjoint_when_touching(self):
        a = ComplexInterval(0.0, 0.5, 0.0, 0.5)
        b = ComplexInterval(1.0, 0.5, 0.0, 0.5)
        assert not a.disjoint_from(b)  # closed rectangles touch at 0.5

    def test_excludes_zero(self):
        assert ComplexInterval(1.0, 0.5, 0.0, 3.0).excludes_zero()
        assert ComplexInterval(0.0, 1.0, 2.0, 0.5).excludes_zero()
        assert not ComplexInterval(0.0, 1e-3, 0.0, 1e-3).excludes_zero()

    def test_conj(self):
        a = ComplexInterval(1.0, 0.1, 2.0, 0.2)
        c = a.conj()
        assert (c.re_mid, c.re_rad, c.im_mid, c.im_rad) == (1.0, 0.1, -2.0, 0.2)

    def test_hull_contains_both(self):
        a = ComplexInterval(0.0, 0.1, 1.0, 0.1)
        b = ComplexInterval(2.0, 0.3, -1.0, 0.1)
        h = a.hull(b)
        for iv in (a, b):
            for q_re, q_im in [
                (Fraction(iv.re_mid) - Fraction(iv.re_rad), Fraction(iv.im_mid)),
                (Fraction(iv.re_mid) + Fraction(iv.re_rad), Fraction(iv.im_mid) + Fraction(iv.im_rad)),
            ]:
                assert h.contains_exact(q_re, q_im)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            ComplexInterval(0.0, -1.0, 0.0, 0.0)

    def test_json_roundtrip(self):
        a = ComplexInterval(1.5, 1e-12, -0.25, 3e-15)
        b = ComplexInterval.from_json(a.to_json())
        assert (a.re_mid, a.re_rad, a.im_mid, a.im_rad) == (b.re_mid, b.re_rad, b.im_mid, b.im_rad)


class TestComplexRational:
    def test_exact_ring_ops(self):
        a = ComplexRational(Fraction(1, 3), Fraction(-2, 7))
        b = ComplexRational(Fraction(5, 11), Fraction(1, 2))
        p = a * b
        assert p.re == Fraction(1, 3) * Fraction(5, 11) - Fraction(-2, 7) * Fraction(1, 2)
        assert p.im == Fraction(1, 3) * Fraction(1, 2) + Fraction(-2, 7) * Fraction(5, 11)
        assert (a + b) - b == a

    def test_from_complex_is_exact(self):
        z = complex(0.1, -0.3)
        cr = ComplexRational.from_complex(z)
        assert float(cr.re) == z.real and float(cr.im) == z.imag

    def test_enclosure_tight_for_floats(self):
        cr = ComplexRational.from_complex(1.5 - 0.25j)
        iv = cr.enclosure()
        assert iv.re_rad == 0.0 and iv.im_rad == 0.0

    def test_enclosure_contains_nonfloat(self):
        cr = ComplexRational(Fraction(1, 3), Fraction(2, 3))
        iv = cr.enclosure()
        assert iv.contains_exact(Fraction(1, 3), Fraction(2, 3))
        assert iv.re_rad > 0

    def test_division_by_int(self):
        cr = ComplexRational(1, 1) / 3
        assert cr.re == Fraction(1, 3)
