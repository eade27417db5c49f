import numpy as np
import pytest

from tangent_quadrics import homotopy as ho
from tangent_quadrics import polysys as ps


class TinyUnivariate:
    n = 1

    def __init__(self, c):
        self.c = c

    def evaluate(self, x):
        return np.array([x[0] ** 2 - self.c])

    def jacobian(self, x):
        return np.array([[2 * x[0]]])


class TestTrackPath:
    def test_univariate(self):
        sol = ho.track_path(
            TinyUnivariate(1.0),
            TinyUnivariate(4.0),
            np.array([1.0 + 0j]),
            np.exp(0.3j),
            ho.TrackerSettings(),
        )
        assert sol.status == "converged"
        assert abs(abs(sol.x[0]) - 2.0) < 1e-9

    def test_both_roots_reached(self):
        ends = []
        for x0 in (1.0, -1.0):
            sol = ho.track_path(
                TinyUnivariate(1.0),
                TinyUnivariate(4.0),
                np.array([complex(x0)]),
                np.exp(0.3j),
                ho.TrackerSettings(),
            )
            ends.append(complex(sol.x[0]))
        assert sorted(round(e.real) for e in ends) == [-2, 2]


class TestSolveTotalDegree:
    def test_linear_signature(self):
        s = ps.assemble(ps.random_real_instance((9, 0, 0, 0), 0), chart_seed=0)
        sols = ho.solve_total_degree(s, ho.TrackerSettings(rng_seed=0))
        assert len(sols) == 1
        assert sols[0].converged
        assert sols[0].residual < 1e-9
        assert ho.count_real(sols) == 1

    @pytest.mark.parametrize(
        "sig,expect,seed",
        [((5, 4, 0, 0), 16, 31), ((4, 3, 2, 0), 72, 32), ((6, 2, 1, 0), 12, 33)],
    )
    def test_bezout_region_counts(self, sig, expect, seed):
        s = ps.assemble(ps.random_real_instance(sig, seed), chart_seed=0)
        sols = ho.solve_total_degree(s, ho.TrackerSettings(rng_seed=seed))
        assert sum(1 for x in sols if x.converged) == expect

    def test_determinism(self):
        s = ps.assemble(ps.random_real_instance((5, 4, 0, 0), 40), chart_seed=0)
        a = ho.solve_total_degree(s, ho.TrackerSettings(rng_seed=3))
        b = ho.solve_total_degree(s, ho.TrackerSettings(rng_seed=3))
        assert [x.status for x in a] == [x.status for x in b]
        for xa, xb in zip(a, b):
            assert np.array_equal(xa.x, xb.x)

    def test_conjugation_closure(self):
        s = ps.assemble(ps.random_real_instance((5, 4, 0, 0), 41), chart_seed=0)
        sols = ho.solve_total_degree(s, ho.TrackerSettings(rng_seed=0))
        pts = [ps.projective_normalize(x.x) for x in sols if x.converged]
        for p in pts:
            q = ps.projective_normalize(np.conj(p))
            assert any(np.max(np.abs(q - r)) < 1e-6 for r in pts)

    def test_rejects_det_system(self):
        s10 = ps.assemble(ps.random_real_instance((9, 0, 0, 0), 42), chart_seed=0)
        s11 = ps.with_det_variable(s10)
        with pytest.raises(ValueError):
            ho.solve_total_degree(s11, ho.TrackerSettings())


class TestRealityTest:
    def test_phase_rotated_real_vector(self):
        rng = np.random.default_rng(1)
        v = rng.standard_normal(10).astype(complex)
        w = np.exp(0.77j) * v
        assert ho.phase_aligned_imag_norm(w) < 1e-12
        assert ho.is_projectively_real(w)

    def test_truly_complex_vector(self):
        rng = np.random.default_rng(2)
        v = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        assert ho.phase_aligned_imag_norm(v) > 1e-3

    def test_count_real_conjugate_pair(self):
        # fabricate solutions from a real system with complex roots
        a = np.full(10, 1.0 + 1.0j)
        b = np.conj(a)
        sols = [
            ho.TrackedSolution(
                x=v, path_index=i, residual=0.0, condition_estimate=1.0,
                status="converged", det_value=1.0, is_real_estimate=False,
            )
            for i, v in enumerate((a, b))
        ]
        # a and conj(a) are each phase-rescalable? (1+i) v0 is: it is a
        # complex multiple of a real vector, so projectively real
        assert ho.count_real(sols) == 2

    def test_count_real_embedded_nonreal(self):
        rng = np.random.default_rng(3)
        re = rng.standard_normal(10)
        im = rng.standard_normal(10)
        sols = [
            ho.TrackedSolution(
                x=re + 1j * im, path_index=0, residual=0.0, condition_estimate=1.0,
                status="converged", det_value=1.0, is_real_estimate=False,
            )
        ]
        assert ho.count_real(sols) == 0


class TestParameterHomotopy:
    def test_constant_homotopy(self):
        inst = ps.random_real_instance((5, 4, 0, 0), 50)
        s = ps.assemble(inst, chart_seed=0)
        sols = ho.solve_total_degree(s, ho.TrackerSettings(rng_seed=0))
        moved = ho.parameter_homotopy(inst, sols, inst, ho.TrackerSettings(rng_seed=0))
        conv0 = sorted(
            [x.x for x in sols if x.converged], key=lambda v: (v[0].real, v[0].imag)
        )
        conv1 = sorted(
            [x.x for x in moved if x.converged], key=lambda v: (v[0].real, v[0].imag)
        )
        assert len(conv0) == len(conv1)
        for a, b in zip(conv0, conv1):
            assert np.max(np.abs(a - b)) < 1e-8

    def test_small_perturbation_matches_fresh_solve(self):
        from tangent_quadrics.search import perturb_instance

        inst0 = ps.random_real_instance((5, 4, 0, 0), 51)
        s0 = ps.assemble(inst0, chart_seed=0)
        sols0 = ho.solve_total_degree(s0, ho.TrackerSettings(rng_seed=0))
        inst1 = perturb_instance(inst0, 1e-6, np.random.default_rng(51))
        moved = ho.parameter_homotopy(inst0, sols0, inst1, ho.TrackerSettings(rng_seed=1))
        fresh = ho.solve_total_degree(
            ps.assemble(inst1, chart_seed=0), ho.TrackerSettings(rng_seed=2)
        )
        a = sorted(
            (ps.projective_normalize(x.x) for x in moved if x.converged),
            key=lambda v: (v[0].real, v[0].imag),
        )
        b = sorted(
            (ps.projective_normalize(x.x) for x in fresh if x.converged),
            key=lambda v: (v[0].real, v[0].imag),
        )
        assert len(a) == len(b) == 16
        for va in a:
            assert any(np.max(np.abs(va - vb)) < 1e-6 for vb in b)

    def test_signature_mismatch(self):
        inst0 = ps.random_real_instance((5, 4, 0, 0), 52)
        inst1 = ps.random_real_instance((4, 5, 0, 0), 53)
        with pytest.raises(ValueError):
            ho.parameter_homotopy(inst0, [], inst1, ho.TrackerSettings())


class TestSettings:
    def test_validation(self):
        with pytest.raises(ValueError):
            ho.TrackerSettings(min_step=1.0)
        with pytest.raises(ValueError):
            ho.TrackerSettings(endpoint_tol=-1)

    def test_json_roundtrip(self):
        s = ho.TrackerSettings(rng_seed=7, initial_step=0.2)
        back = ho.TrackerSettings.from_json(s.to_json())
        assert back == s
