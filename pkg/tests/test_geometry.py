import warnings
from fractions import Fraction

import numpy as np
import pytest

from tangent_quadrics import geometry as g


def det2(a, b, c, d):
    return a * d - b * c


def det_fraction(M):
    """Gaussian elimination over Fractions (test oracle)."""
    M = [list(map(Fraction, row)) for row in M]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


class TestPluckerFromSpan:
    def test_coordinate_lines(self):
        e = np.eye(4, dtype=int).tolist()
        assert g.plucker_from_span([e[0], e[1]]).l == (1, 0, 0, 0, 0, 0)
        assert g.plucker_from_span([e[2], e[3]]).l == (0, 0, 0, 0, 0, 1)

    def test_twisted_cubic_rows(self):
        t = Fraction(3, 2)
        line = g.plucker_from_span([[1, t, t**2, t**3], [0, 1, 2 * t, 3 * t**2]])
        assert line.l == (1, 2 * t, 3 * t**2, t**2, 2 * t**3, t**4)

    def test_plucker_relation_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            M = g.random_rational_matrix(rng, (2, 4))
            try:
                line = g.plucker_from_span(M)
            except g.DegenerateFigureError:
                continue
            assert g.plucker_residual(line.l) == 0

    def test_rank_deficient_rejected(self):
        with pytest.raises(g.DegenerateFigureError):
            g.plucker_from_span([[1, 2, 3, 4], [2, 4, 6, 8]])


class TestPlaneFromSpan:
    def test_coordinate_planes(self):
        e = np.eye(4, dtype=int).tolist()
        h = g.plane_from_span([e[0], e[1], e[2]]).h
        assert [abs(v) for v in h] == [0, 0, 0, 1]
        assert g.plane_from_span([e[1], e[2], e[3]]).h == (1, 0, 0, 0)

    def test_rows_pair_to_zero(self):
        # point-in-plane form vanishes on every row of the span
        rng = np.random.default_rng(1)
        for _ in range(50):
            M = g.random_rational_matrix(rng, (3, 4))
            try:
                plane = g.plane_from_span(M)
            except g.DegenerateFigureError:
                continue
            for row in M:
                pairing = sum(p * h for p, h in zip(row, plane.h))
                assert pairing == 0

    def test_rank_deficient_rejected(self):
        with pytest.raises(g.DegenerateFigureError):
            g.plane_from_span([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0]])


class TestIncidence:
    def test_point_in_coordinate_plane(self):
        P = g.ProjPoint((1, 0, 0, 0))
        H = g.plane_from_span(np.eye(4)[:3].tolist())  # x4 = 0
        assert g.incidence_residuals(P, H) == [0]

    def test_point_not_on_coordinate_line(self):
        P = g.ProjPoint((0, 0, 0, 1))
        L = g.PluckerLine((1, 0, 0, 0, 0, 0), warn_off_grassmannian=False)
        res = g.incidence_residuals(P, L)
        assert len(res) == 4 and any(r != 0 for r in res)

    def test_flag_from_random_matrix(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            V = g.random_rational_matrix(rng, (4, 4))
            if det_fraction(V) == 0:
                continue
            flag = g.Flag.from_matrix(V)
            res = (
                g.incidence_residuals(flag.P, flag.L)
                + g.incidence_residuals(flag.L, flag.H)
                + g.incidence_residuals(flag.P, flag.H)
            )
            assert len(res) == 9
            assert all(r == 0 for r in res)
            assert g.plucker_residual(flag.L.l) == 0

    def test_unsupported_pair(self):
        P = g.ProjPoint((1, 0, 0, 0))
        with pytest.raises(TypeError):
            g.incidence_residuals(P, P)

    def test_scale_invariance_up_to_scale(self):
        # rescaling a figure rescales all residuals uniformly
        P = g.ProjPoint((1, 2, 3, 4))
        L = g.PluckerLine((Fraction(1), 2, 3, 4, 5, 6), warn_off_grassmannian=False)
        r1 = g.incidence_residuals(P, L)
        P2 = g.ProjPoint((3, 6, 9, 12))
        r2 = g.incidence_residuals(P2, L)
        assert r2 == [3 * v for v in r1]


class TestWedge:
    def test_identity(self):
        X = g.SymQuadric([1, 0, 0, 0, 1, 0, 0, 1, 0, 1])
        w2 = g.wedge(X, 2)
        w3 = g.wedge(X, 3)
        assert w2 == [[1 if i == j else 0 for j in range(6)] for i in range(6)]
        assert w3 == [[1 if i == j else 0 for j in range(4)] for i in range(4)]

    def test_diagonal(self):
        a, b, c, d = Fraction(2), Fraction(3), Fraction(5), Fraction(7)
        X = g.SymQuadric([a, 0, 0, 0, b, 0, 0, c, 0, d])
        w2 = g.wedge(X, 2)
        diag = [w2[i][i] for i in range(6)]
        assert diag == [a * b, a * c, a * d, b * c, b * d, c * d]
        assert all(w2[i][j] == 0 for i in range(6) for j in range(6) if i != j)

    def test_line_tangency_identity_exact(self):
        # det(L X L^T) equals the quadratic form of wedge_2 X on raw minors
        rng = np.random.default_rng(3)
        for _ in range(60):
            X = g.random_rational_quadric(rng)
            L = g.random_rational_matrix(rng, (2, 4))
            l = [det2(L[0][i], L[0][j], L[1][i], L[1][j]) for i, j in g.PAIRS]
            xm = X.matrix()
            lx = [[sum(L[a][i] * xm[i][j] for i in range(4)) for j in range(4)] for a in range(2)]
            gram = [[sum(lx[a][j] * L[b][j] for j in range(4)) for b in range(2)] for a in range(2)]
            lhs = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0]
            w2 = g.wedge(X, 2)
            rhs = sum(l[a] * w2[a][b] * l[b] for a in range(6) for b in range(6))
            assert lhs == rhs

    def test_adjugate_identity_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            X = g.random_rational_quadric(rng)
            m = X.matrix()
            adj = g.wedge(X, 3)
            d = g.det4(m)
            for i in range(4):
                for j in range(4):
                    assert sum(m[i][k] * adj[k][j] for k in range(4)) == (d if i == j else 0)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            g.wedge(g.SymQuadric([1] + [0] * 9), 4)


class TestCompleteQuadric:
    def test_identity_generators(self):
        q = g.complete_quadric(g.SymQuadric([1, 0, 0, 0, 1, 0, 0, 1, 0, 1]))
        assert g.generator_check(q) == [0, 0, 0, 0, 0]

    def test_random_rational_generators(self):
        rng = np.random.default_rng(5)
        for _ in range(250):
            q = g.complete_quadric(g.random_rational_quadric(rng))
            assert all(v == 0 for v in g.generator_check(q))

    def test_off_image_point(self):
        X = g.random_rational_quadric(np.random.default_rng(6))
        q = g.complete_quadric(X)
        Y = [[Fraction(0)] * 6 for _ in range(6)]
        Y[0][5] = Y[5][0] = Fraction(1)  # y_{12,34} = 1, others 0
        off = g.CompleteQuadricPoint(X=q.X, Y=tuple(tuple(r) for r in Y), Z=q.Z)
        assert g.generator_check(off)[0] == 1


class TestTwistedCubic:
    def test_t0(self):
        assert g.twisted_cubic_tangent(0).l == (1, 0, 0, 0, 0, 0)

    def test_t1(self):
        line = g.twisted_cubic_tangent(1)
        assert line.l == (1, 2, 3, 1, 2, 1)
        assert 1 * 1 - 2 * 2 + 3 * 1 == 0

    def test_t2_relation(self):
        line = g.twisted_cubic_tangent(Fraction(2))
        assert line.l == (1, 4, 12, 4, 16, 16)
        assert g.plucker_residual(line.l) == 0

    def test_relation_identically(self):
        for t in (Fraction(-5, 3), Fraction(7, 11), 4):
            assert g.plucker_residual(g.twisted_cubic_tangent(t).l) == 0


class TestFiguresAndSerialization:
    def test_normalization_float(self):
        p = g.ProjPoint((2.0, -4.0, 1.0, 0.5))
        assert max(abs(complex(v)) for v in p.p) == 1.0

    def test_exact_not_normalized(self):
        p = g.ProjPoint((Fraction(2), Fraction(4), 0, 0))
        assert p.p == (Fraction(2), Fraction(4), 0, 0)

    def test_zero_rejected(self):
        with pytest.raises(g.DegenerateFigureError):
            g.ProjPoint((0, 0, 0, 0))

    def test_off_grassmannian_warns(self):
        with pytest.warns(UserWarning):
            g.PluckerLine((1.0, 0, 0, 0, 0, 1.0))

    def test_on_grassmannian_no_warning(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            g.PluckerLine((1.0, 0, 0, 0, 0, 0))

    @pytest.mark.parametrize(
        "fig",
        [
            g.ProjPoint((1, Fraction(1, 3), -2, 0)),
            g.PluckerLine((1.0, 0.25, 0, 0, 0, 0), warn_off_grassmannian=False),
            g.plane_from_span(np.eye(4)[1:].tolist()),
            g.SymQuadric([Fraction(1), 0, 0, 0, Fraction(-2, 7), 0, 0, 1, 0, 3]),
        ],
    )
    def test_json_roundtrip(self, fig):
        back = g.figure_from_json(g.figure_to_json(fig))
        assert type(back) is type(fig)
        assert back.coords == fig.coords

    def test_quadric_from_full_matrix(self):
        m = [[1, 2, 3, 4], [2, 5, 6, 7], [3, 6, 8, 9], [4, 7, 9, 10]]
        X = g.SymQuadric([v for row in m for v in row])
        assert X.matrix() == m

    def test_span_from_plucker_roundtrip(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            line = g.random_line(rng)
            span = g.span_from_plucker([complex(v).real for v in line.l])
            back = g.plucker_from_span(span.tolist())
            a = np.array([complex(v) for v in line.l])
            b = np.array([complex(v) for v in back.l])
            # projectively equal
            k = np.argmax(np.abs(a))
            assert np.allclose(a / a[k], b / b[k], atol=1e-9)
