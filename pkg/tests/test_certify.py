from fractions import Fraction

import numpy as np
import pytest

from tangent_quadrics import certify as ct
from tangent_quadrics import homotopy as ho
from tangent_quadrics import polysys as ps
from tangent_quadrics.conditions import MonomialCondition
from tangent_quadrics.intervals import ComplexInterval


def product_system(roots_per_var, chart=False):
    """System of univariate factored polynomials prod (x_v - r) per variable,
    embedded as MonomialConditions on the first variables of a 10-var system
    is overkill; instead build a small standalone SlpSystem-like object."""
    # use the real SlpSystem machinery through a synthetic instance is not
    # possible for arbitrary factored systems, so tests below use genuine
    # tangency systems plus this tiny duck-typed system for the basics.


class TinySqrt2:
    """x^2 - 2 = 0 and D - x = 0 with variables (D, x): mimics the 11-var layout."""

    n = 2
    has_det_variable = True

    def evaluate(self, z):
        d, x = z
        return np.array([x * x - 2.0, d - x])

    def jacobian(self, z):
        d, x = z
        return np.array([[0.0, 2 * x], [1.0, -1.0]])

    def evaluate_exact(self, z):
        d, x = z
        return [x * x - 2, d - x]

    def jacobian_exact(self, z):
        return [[0, 2 * z[1]], [1, -1]]


class TestKrawczykBasics:
    def test_sqrt2(self):
        s = TinySqrt2()
        x = np.array([1.41421356 + 0j, 1.41421356 + 0j])
        box = ct.krawczyk_certify(s, np.array([1.41421356, 1.41421356], dtype=complex))
        # krawczyk_certify insists on 11-vector for SlpSystem; TinySqrt2 bypasses
        assert box.certified
        # the box contains sqrt(2) in both coordinates
        import mpmath

        mpmath.mp.dps = 40
        r = mpmath.sqrt(2)
        for iv in box.intervals:
            lo = Fraction(iv.re_mid) - Fraction(iv.re_rad)
            hi = Fraction(iv.re_mid) + Fraction(iv.re_rad)
            assert lo <= Fraction(str(r)) <= hi
        assert box.intervals[0].excludes_zero()

    def test_corrupted_point_never_falsely_certifies(self):
        s = TinySqrt2()
        x = np.array([1.41421356 + 1e-2, 1.41421356 - 1e-2], dtype=complex)
        box = ct.krawczyk_certify(s, x)
        if box.certified:
            # re-centering is allowed; the box must still contain sqrt(2)
            import mpmath

            mpmath.mp.dps = 40
            r = Fraction(str(mpmath.sqrt(2)))
            iv = box.intervals[1]
            assert Fraction(iv.re_mid) - Fraction(iv.re_rad) <= r <= Fraction(iv.re_mid) + Fraction(iv.re_rad)

    def test_far_point_never_falsely_certifies(self):
        # refinement may re-center onto a true root, but a certificate must
        # always contain one; with refinement pinned away it must fail
        s = TinySqrt2()
        box = ct.krawczyk_certify(s, np.array([5.0, 5.0], dtype=complex), inflation=1e-6)
        if box.certified:
            import mpmath

            mpmath.mp.dps = 40
            r = Fraction(str(mpmath.sqrt(2)))
            iv = box.intervals[1]
            lo = Fraction(iv.re_mid) - Fraction(iv.re_rad)
            hi = Fraction(iv.re_mid) + Fraction(iv.re_rad)
            assert lo <= r <= hi or lo <= -r <= hi


def _certified_pipeline(signature, inst_seed, rng_seed=0):
    inst = ps.random_real_instance(signature, inst_seed)
    s10 = ps.assemble(inst, chart_seed=0)
    sols = ho.solve_total_degree(s10, ho.TrackerSettings(rng_seed=rng_seed))
    s10r = ps.assemble(inst, chart_seed=1, real_chart=True)
    s11 = ps.with_det_variable(s10r)
    boxes = []
    for sol in (s for s in sols if s.converged):
        x10 = ps.transport_to_chart(sol.x, s10r.chart_coefficients)
        boxes.append(ct.krawczyk_certify(s11, ps.extend_solution(x10)))
    return s11, sols, boxes


class TestTangencyCertification:
    def test_linear_instance(self):
        s11, sols, boxes = _certified_pipeline((9, 0, 0, 0), 1)
        summary = ct.verdicts(boxes, s11)
        assert summary.certified == 1
        assert summary.distinct == 1
        assert summary.nondegenerate == 1
        assert summary.real == 1

    def test_no_false_certificates_rational_check(self):
        # certified boxes of a (5,4,0,0) instance contain true solutions:
        # verified by running many exact-residual Newton steps from far
        # higher accuracy and testing membership
        s11, sols, boxes = _certified_pipeline((5, 4, 0, 0), 7)
        import mpmath as mp

        mp.mp.dps = 60
        for box in boxes:
            if not box.certified:
                continue
            xs = [mp.mpc(v.real, v.imag) for v in box.solution_approx]
            for _ in range(40):
                F = s11.evaluate_exact(xs)
                J = s11.jacobian_exact(xs)
                A = mp.matrix(11, 11)
                b = mp.matrix(11, 1)
                for i in range(11):
                    b[i] = -F[i]
                    for j in range(11):
                        A[i, j] = J[i][j]
                d = mp.lu_solve(A, b)
                xs = [xs[i] + d[i] for i in range(11)]
                if max(abs(v) for v in d) < mp.mpf("1e-45"):
                    break
            for iv, v in zip(box.intervals, xs):
                assert Fraction(iv.re_mid) - Fraction(iv.re_rad) <= Fraction(str(v.real)) <= Fraction(
                    iv.re_mid
                ) + Fraction(iv.re_rad)
                assert Fraction(iv.im_mid) - Fraction(iv.im_rad) <= Fraction(str(v.imag)) <= Fraction(
                    iv.im_mid
                ) + Fraction(iv.im_rad)

    def test_conjugation_symmetry(self):
        s11, sols, boxes = _certified_pipeline((5, 4, 0, 0), 7)
        # pick a certified nonreal solution; certify its conjugate
        target = next(
            b for b in boxes if b.certified and abs(b.solution_approx[1:].imag).max() > 1e-3
        )
        conj_box = ct.krawczyk_certify(s11, np.conj(target.solution_approx))
        assert conj_box.certified
        for a, b in zip(target.intervals, conj_box.intervals):
            assert a.re_mid == b.re_mid
            assert a.im_mid == -b.im_mid
            assert a.re_rad == b.re_rad
            assert a.im_rad == b.im_rad

    def test_verdicts_duplicate_box(self):
        s11, sols, boxes = _certified_pipeline((9, 0, 0, 0), 11)
        dup = ct.krawczyk_certify(s11, boxes[0].solution_approx.copy())
        summary = ct.verdicts([boxes[0], dup], s11)
        assert summary.certified == 2
        assert summary.distinct == 1

    def test_nondegeneracy_check_requires_certified(self):
        s11, sols, boxes = _certified_pipeline((9, 0, 0, 0), 12)
        box = boxes[0]
        assert ct.nondegeneracy_check(box) == box.intervals[0].excludes_zero()
        box.certified = False
        assert not ct.nondegeneracy_check(box)

    def test_degenerate_interval_flagged(self):
        s11, _, boxes = _certified_pipeline((9, 0, 0, 0), 13)
        box = boxes[0]
        box.intervals[0] = ComplexInterval(0.0, 1e-3, 0.0, 1e-3)
        assert not ct.nondegeneracy_check(box)


class TestRefinementStability:
    def test_refined_solution_stays_inside_box(self):
        # independence from the tracker: 50 extra Newton steps in high
        # precision stay inside the certified box
        s11, sols, boxes = _certified_pipeline((5, 4, 0, 0), 21)
        import mpmath as mp

        mp.mp.dps = 40
        checked = 0
        for box in boxes[:5]:
            if not box.certified:
                continue
            xs = [mp.mpc(v.real, v.imag) for v in box.solution_approx]
            for _ in range(50):
                F = s11.evaluate_exact(xs)
                J = s11.jacobian_exact(xs)
                A = mp.matrix(11, 11)
                b = mp.matrix(11, 1)
                for i in range(11):
                    b[i] = -F[i]
                    for j in range(11):
                        A[i, j] = J[i][j]
                xs = [xs[i] + d for i, d in enumerate(mp.lu_solve(A, b))]
            for iv, v in zip(box.intervals, xs):
                assert abs(float(v.real) - iv.re_mid) <= iv.re_rad * (1 + 1e-9) + 1e-300
                assert abs(float(v.imag) - iv.im_mid) <= iv.im_rad * (1 + 1e-9) + 1e-300
            checked += 1
        assert checked >= 3
