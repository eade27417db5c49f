"""Projective figures in 3-space and the multilinear algebra behind tangency.

Points, lines (Pluecker coordinates), planes (dual coordinates) and quadrics
(symmetric 4x4 matrices) come in two coordinate tiers: exact rationals
(``fractions.Fraction``) for identity checking, and floats/complex for the
numerical pipeline.  The exterior powers ``wedge(X, 2)`` and ``wedge(X, 3)``
are labeled so that

    det(L X L^T) = l (wedge_2 X) l^T      and      det(H X H^T) = h (wedge_3 X) h^T

hold verbatim for the coordinate conventions used here; in particular
``wedge(X, 3)`` is the adjugate of X.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "DegenerateFigureError",
    "ProjPoint",
    "PluckerLine",
    "ProjPlane",
    "SymQuadric",
    "Flag",
    "CompleteQuadricPoint",
    "plucker_from_span",
    "plane_from_span",
    "incidence_residuals",
    "wedge",
    "complete_quadric",
    "generator_check",
    "twisted_cubic_tangent",
    "plucker_residual",
    "figure_to_json",
    "figure_from_json",
    "sym_from_upper",
    "upper_from_sym",
    "UPPER_INDICES",
    "PAIRS",
    "TRIPLES",
]


class DegenerateFigureError(ValueError):
    """Raised when a span matrix does not have the rank its figure needs."""


# Upper-triangular positions of a symmetric 4x4 matrix, row-major:
# (x11, x12, x13, x14, x22, x23, x24, x33, x34, x44).
UPPER_INDICES = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]

# Column-pair order of Pluecker coordinates (l12, l13, l14, l23, l24, l34).
PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

# Triple order matching the dual plane coordinates (h234, -h134, h124, -h123):
# position a holds the triple complementary to a, with sign (-1)^a.
TRIPLES = [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)]
TRIPLE_SIGNS = [1, -1, 1, -1]

_EXACT_TYPES = (Fraction, int)


def _is_exact(coords) -> bool:
    return all(isinstance(c, _EXACT_TYPES) for c in coords)


def _normalize(coords):
    """Scale so the largest-magnitude coordinate becomes exactly 1 (float tier only)."""
    if _is_exact(coords):
        return tuple(Fraction(c) for c in coords)
    vals = [complex(c) for c in coords]
    k = max(range(len(vals)), key=lambda i: abs(vals[i]))
    pivot = vals[k]
    if pivot == 0:
        raise DegenerateFigureError("all coordinates are zero")
    out = tuple(v / pivot for v in vals)
    # drop spurious imaginary parts so real data stays real
    if all(abs(v.imag) == 0.0 for v in out):
        return tuple(v.real for v in out)
    return out


def _check_nonzero(coords, what: str):
    if all(c == 0 for c in coords):
        raise DegenerateFigureError(f"{what} has all-zero coordinates")


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^3, four homogeneous coordinates."""

    p: tuple

    def __init__(self, p: Sequence):
        coords = tuple(p)
        if len(coords) != 4:
            raise ValueError("a projective point needs 4 coordinates")
        _check_nonzero(coords, "point")
        object.__setattr__(self, "p", _normalize(coords))

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.p)

    @property
    def coords(self) -> tuple:
        return self.p

    kind = "point"


@dataclass(frozen=True)
class PluckerLine:
    """A line of P^3 in Pluecker coordinates (l12, l13, l14, l23, l24, l34).

    User-supplied vectors need not satisfy the Pluecker relation exactly
    (the relation is checked and a warning is emitted past ``rel_tol``);
    the tangency condition is a valid quadratic condition for any vector.
    """

    l: tuple

    def __init__(self, l: Sequence, rel_tol: float = 1e-6, warn_off_grassmannian: bool = True):
        coords = tuple(l)
        if len(coords) != 6:
            raise ValueError("a Pluecker line needs 6 coordinates")
        _check_nonzero(coords, "line")
        coords = _normalize(coords)
        object.__setattr__(self, "l", coords)
        if warn_off_grassmannian:
            res = plucker_residual(coords)
            scale = max(abs(complex(c)) for c in coords) ** 2
            if abs(complex(res)) > rel_tol * scale:
                warnings.warn(
                    f"Pluecker vector is off the Grassmannian (residual {complex(res):.3g})",
                    stacklevel=2,
                )

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.l)

    @property
    def coords(self) -> tuple:
        return self.l

    kind = "line"


@dataclass(frozen=True)
class ProjPlane:
    """A plane of P^3 in dual coordinates (h234, -h134, h124, -h123)."""

    h: tuple

    def __init__(self, h: Sequence):
        coords = tuple(h)
        if len(coords) != 4:
            raise ValueError("a projective plane needs 4 coordinates")
        _check_nonzero(coords, "plane")
        object.__setattr__(self, "h", _normalize(coords))

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.h)

    @property
    def coords(self) -> tuple:
        return self.h

    kind = "plane"


@dataclass(frozen=True)
class SymQuadric:
    """A quadric surface, stored as the 10 upper-triangular entries of X."""

    x: tuple

    def __init__(self, x: Sequence):
        entries = tuple(x)
        if len(entries) == 16:
            m = [list(entries[4 * i : 4 * i + 4]) for i in range(4)]
            entries = tuple(m[i][j] for i, j in UPPER_INDICES)
        if len(entries) != 10:
            raise ValueError("a quadric needs the 10 upper-triangular entries of X")
        _check_nonzero(entries, "quadric")
        object.__setattr__(self, "x", _normalize(entries))

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.x)

    @property
    def coords(self) -> tuple:
        return self.x

    def matrix(self):
        """The full symmetric 4x4 matrix as a list of rows."""
        return sym_from_upper(self.x)

    kind = "quadric"


Figure = ProjPoint | PluckerLine | ProjPlane | SymQuadric


@dataclass(frozen=True)
class Flag:
    """A complete flag P in L in H; all nine incidence relations must vanish."""

    P: ProjPoint
    L: PluckerLine
    H: ProjPlane
    tol: float = field(default=1e-9, compare=False)

    def __post_init__(self):
        res = [
            *incidence_residuals(self.P, self.L),
            *incidence_residuals(self.L, self.H),
            *incidence_residuals(self.P, self.H),
            plucker_residual(self.L.l),
        ]
        if self.P.is_exact and self.L.is_exact and self.H.is_exact:
            bad = [r for r in res if r != 0]
            if bad:
                raise DegenerateFigureError(f"not a flag: exact incidence residuals {bad}")
        else:
            worst = max(abs(complex(r)) for r in res)
            if worst > self.tol:
                raise DegenerateFigureError(f"not a flag: incidence residual {worst:.3g}")

    @classmethod
    def from_matrix(cls, V) -> "Flag":
        """Flag spanned by the first three rows of an invertible 4x4 matrix."""
        rows = [list(r) for r in V]
        return cls(
            P=ProjPoint(rows[0]),
            L=plucker_from_span(rows[:2]),
            H=plane_from_span(rows[:3]),
        )


def sym_from_upper(upper):
    """Rebuild the symmetric 4x4 matrix (list of rows) from 10 entries."""
    m = [[None] * 4 for _ in range(4)]
    for (i, j), v in zip(UPPER_INDICES, upper):
        m[i][j] = v
        m[j][i] = v
    return m


def upper_from_sym(m):
    return tuple(m[i][j] for i, j in UPPER_INDICES)


def _det2(a, b, c, d):
    return a * d - b * c


def _minor2(m, rows, cols):
    (i, j), (k, l) = rows, cols
    return _det2(m[i][k], m[i][l], m[j][k], m[j][l])


def _minor3(m, rows, cols):
    (i, j, k), (p, q, r) = rows, cols
    return (
        m[i][p] * _det2(m[j][q], m[j][r], m[k][q], m[k][r])
        - m[i][q] * _det2(m[j][p], m[j][r], m[k][p], m[k][r])
        + m[i][r] * _det2(m[j][p], m[j][q], m[k][p], m[k][q])
    )


def det4(m):
    """Determinant of a 4x4 matrix over any commutative ring (no division)."""
    total = None
    for j in range(4):
        term = m[0][j] * _minor3(m, (1, 2, 3), tuple(c for c in range(4) if c != j))
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def plucker_residual(l):
    """The Pluecker quadric l12*l34 - l13*l24 + l14*l23."""
    return l[0] * l[5] - l[1] * l[4] + l[2] * l[3]


def plucker_from_span(M) -> PluckerLine:
    """Pluecker coordinates of the line spanned by the two rows of M (2x4)."""
    rows = [list(r) for r in M]
    if len(rows) != 2 or any(len(r) != 4 for r in rows):
        raise ValueError("expected a 2x4 matrix")
    minors = tuple(_det2(rows[0][i], rows[0][j], rows[1][i], rows[1][j]) for i, j in PAIRS)
    if all(v == 0 for v in minors):
        raise DegenerateFigureError("span matrix has rank < 2")
    return PluckerLine(minors, warn_off_grassmannian=False)


def plane_from_span(M) -> ProjPlane:
    """Dual coordinates (h234, -h134, h124, -h123) of the plane spanned by the rows of M (3x4)."""
    rows = [list(r) for r in M]
    if len(rows) != 3 or any(len(r) != 4 for r in rows):
        raise ValueError("expected a 3x4 matrix")
    cols = list(zip(*rows))

    def minor(c0, c1, c2):
        a, b, c = cols[c0], cols[c1], cols[c2]
        return (
            a[0] * _det2(b[1], c[1], b[2], c[2])
            - b[0] * _det2(a[1], c[1], a[2], c[2])
            + c[0] * _det2(a[1], b[1], a[2], b[2])
        )

    h = (minor(1, 2, 3), -minor(0, 2, 3), minor(0, 1, 3), -minor(0, 1, 2))
    if all(v == 0 for v in h):
        raise DegenerateFigureError("span matrix has rank < 3")
    return ProjPlane(h)


def incidence_residuals(f1, f2) -> list:
    """Incidence polynomials for (point, plane), (point, line) or (line, plane).

    All returned values vanish iff the first figure is contained in the second.
    """
    if isinstance(f1, ProjPoint) and isinstance(f2, ProjPlane):
        p, h = f1.p, f2.h
        # h is stored dual, so containment is the plain pairing
        return [p[0] * h[0] + p[1] * h[1] + p[2] * h[2] + p[3] * h[3]]
    if isinstance(f1, ProjPoint) and isinstance(f2, PluckerLine):
        p, l = f1.p, f2.l
        # l = (l12, l13, l14, l23, l24, l34)
        l12, l13, l14, l23, l24, l34 = l
        return [
            p[0] * l23 - p[1] * l13 + p[2] * l12,
            p[0] * l24 - p[1] * l14 + p[3] * l12,
            p[0] * l34 - p[2] * l14 + p[3] * l13,
            p[1] * l34 - p[2] * l24 + p[3] * l23,
        ]
    if isinstance(f1, PluckerLine) and isinstance(f2, ProjPlane):
        l12, l13, l14, l23, l24, l34 = f1.l
        s = f2.h
        # recover raw minors from the stored dual ordering
        h234, h134, h124, h123 = s[0], -s[1], s[2], -s[3]
        return [
            l12 * h134 - l13 * h124 + l14 * h123,
            l12 * h234 - l23 * h124 + l24 * h123,
            l13 * h234 - l23 * h134 + l34 * h123,
            l14 * h234 - l24 * h134 + l34 * h124,
        ]
    raise TypeError(f"unsupported figure pair ({type(f1).__name__}, {type(f2).__name__})")


def wedge(X, k: int):
    """k-th exterior power of a symmetric 4x4 matrix (k = 2 or 3).

    Returns a list-of-rows matrix over the entry ring.  ``wedge(X, 2)`` is the
    6x6 matrix of 2x2 minors in the PAIRS order; ``wedge(X, 3)`` carries the
    dual-coordinate signs, i.e. it equals the adjugate, so that
    X * wedge(X, 3) = det(X) * I.
    """
    m = X.matrix() if isinstance(X, SymQuadric) else [list(r) for r in X]
    if k == 2:
        return [[_minor2(m, I, J) for J in PAIRS] for I in PAIRS]
    if k == 3:
        return [
            [
                TRIPLE_SIGNS[a] * TRIPLE_SIGNS[b] * _minor3(m, TRIPLES[a], TRIPLES[b])
                for b in range(4)
            ]
            for a in range(4)
        ]
    raise ValueError("k must be 2 or 3")


@dataclass(frozen=True)
class CompleteQuadricPoint:
    """Image (X, Y, Z) = (X, wedge_2 X, wedge_3 X) of a quadric, or an ad-hoc triple."""

    X: tuple  # 10 upper entries
    Y: tuple  # 6x6 rows, PAIRS labeling
    Z: tuple  # 4x4 rows, dual labeling (adjugate convention)

    def y(self, ij, kl):
        """Plain 2x2 minor y_{ij,kl}; indices are 1-based pairs like (1, 2)."""
        a = PAIRS.index((ij[0] - 1, ij[1] - 1))
        b = PAIRS.index((kl[0] - 1, kl[1] - 1))
        return self.Y[a][b]

    def z(self, ijk, lmn):
        """Plain 3x3 minor z_{ijk,lmn}; indices are 1-based triples."""
        a = TRIPLES.index(tuple(v - 1 for v in ijk))
        b = TRIPLES.index(tuple(v - 1 for v in lmn))
        return TRIPLE_SIGNS[a] * TRIPLE_SIGNS[b] * self.Z[a][b]

    def x(self, i, j):
        m = sym_from_upper(self.X)
        return m[i - 1][j - 1]


def complete_quadric(X: SymQuadric) -> CompleteQuadricPoint:
    """The point (X, wedge_2 X, wedge_3 X) in P^9 x P^20 x P^9."""
    return CompleteQuadricPoint(
        X=tuple(X.coords),
        Y=tuple(tuple(r) for r in wedge(X, 2)),
        Z=tuple(tuple(r) for r in wedge(X, 3)),
    )


def generator_check(q: CompleteQuadricPoint) -> list:
    """Evaluate the five exemplar generators of the complete-quadrics ideal.

    One generator per degree class (010), (020), (101), (011), (110); all five
    vanish exactly on points of the form (X, wedge_2 X, wedge_3 X).
    """
    y, z, x = q.y, q.z, q.x
    return [
        y((1, 2), (3, 4)) - y((1, 3), (2, 4)) + y((1, 4), (2, 3)),
        y((1, 2), (2, 4)) * y((2, 4), (3, 4))
        - y((1, 3), (2, 4)) * y((2, 4), (2, 4))
        + y((1, 4), (2, 4)) * y((2, 3), (2, 4)),
        x(1, 1) * z((1, 2, 3), (2, 3, 4))
        - x(1, 2) * z((1, 2, 3), (1, 3, 4))
        + x(1, 3) * z((1, 2, 3), (1, 2, 4))
        - x(1, 4) * z((1, 2, 3), (1, 2, 3)),
        y((1, 2), (1, 3)) * z((1, 2, 3), (1, 3, 4))
        - y((1, 3), (1, 3)) * z((1, 2, 3), (1, 2, 4))
        + y((1, 3), (1, 4)) * z((1, 2, 3), (1, 2, 3)),
        x(1, 1) * y((1, 2), (2, 3)) - x(1, 2) * y((1, 2), (1, 3)) + x(1, 3) * y((1, 2), (1, 2)),
    ]


def twisted_cubic_tangent(t) -> PluckerLine:
    """Tangent line of the twisted cubic (1 : t : t^2 : t^3) at parameter t."""
    return PluckerLine(
        (1 * t**0, 2 * t, 3 * t**2, t**2, 2 * t**3, t**4), warn_off_grassmannian=False
    )


def span_from_plucker(l) -> np.ndarray:
    """Two spanning points of the line with Pluecker coordinates l.

    Uses the rank-2 antisymmetric matrix whose columns lie on the line;
    raises ValueError when the vector is too far off the Grassmannian for
    a 2-dimensional span to emerge.
    """
    lam = np.zeros((4, 4))
    for (i, j), v in zip(PAIRS, l):
        lam[i, j] = v
        lam[j, i] = -v
    norms = np.linalg.norm(lam, axis=0)
    cols = np.argsort(norms)[::-1][:2]
    span = lam[:, cols].T
    if np.linalg.matrix_rank(span, tol=1e-10) < 2:
        raise ValueError("Pluecker vector does not span a line")
    return span


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

_KIND_TO_CLASS = {"point": ProjPoint, "line": PluckerLine, "plane": ProjPlane, "quadric": SymQuadric}


def _coord_to_json(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return c
    c = complex(c)
    if c.imag == 0:
        return c.real
    return [c.real, c.imag]


def _coord_from_json(v):
    if isinstance(v, str):
        num, _, den = v.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(v, list):
        return complex(v[0], v[1])
    return v


def figure_to_json(fig) -> dict:
    return {"kind": fig.kind, "coords": [_coord_to_json(c) for c in fig.coords]}


def figure_from_json(obj: dict):
    cls = _KIND_TO_CLASS[obj["kind"]]
    coords = [_coord_from_json(v) for v in obj["coords"]]
    if cls is PluckerLine:
        return PluckerLine(coords, warn_off_grassmannian=False)
    return cls(coords)


# ---------------------------------------------------------------------------
# Random figures (used by census, search seeding and tests)
# ---------------------------------------------------------------------------


def random_point(rng: np.random.Generator) -> ProjPoint:
    return ProjPoint(rng.standard_normal(4).tolist())


def random_line(rng: np.random.Generator) -> PluckerLine:
    return plucker_from_span(rng.standard_normal((2, 4)).tolist())


def random_plane(rng: np.random.Generator) -> ProjPlane:
    return plane_from_span(rng.standard_normal((3, 4)).tolist())


def random_quadric(rng: np.random.Generator, definite: bool = False) -> SymQuadric:
    a = rng.standard_normal((4, 4))
    m = a @ a.T if definite else a + a.T
    return SymQuadric(upper_from_sym(m.tolist()))


def random_rational_matrix(rng: np.random.Generator, shape, den: int = 64):
    """Matrix of random Fractions with denominator ``den`` (exact tier)."""
    vals = rng.integers(-den, den + 1, size=shape)
    flat = [Fraction(int(v), den) for v in np.ravel(vals)]
    it = iter(flat)
    return [[next(it) for _ in range(shape[1])] for _ in range(shape[0])]


def random_rational_quadric(rng: np.random.Generator, den: int = 64) -> SymQuadric:
    upper = [Fraction(int(v), den) for v in rng.integers(-den, den + 1, size=10)]
    if all(v == 0 for v in upper):
        upper[0] = Fraction(1)
    return SymQuadric(upper)
