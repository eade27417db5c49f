"""Tangency conditions on a quadric X as evaluable straight-line programs.

Each condition is a homogeneous polynomial in the 10 entries of X:

    degree 1   P X P^T                      (point on quadric)
    degree 2   l (wedge_2 X) l^T            (tangent to a line)
    degree 3   h (wedge_3 X) h^T            (tangent to a plane)
    degree 12  disc_t det(U + t X)          (tangent to a quadric)

Programs evaluate over any commutative ring with integer division
(Fraction, complex, complex intervals, mpmath scalars) and carry
forward-mode first derivatives.  The quadric condition is never expanded
into monomials: the pencil coefficients come from determinant
interpolation at t in {0, +-1, +-2} and the discriminant from the
classical 16-monomial quartic formula, isobaric of weight 12.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    PAIRS,
    TRIPLES,
    TRIPLE_SIGNS,
    UPPER_INDICES,
    Flag,
    PluckerLine,
    ProjPlane,
    ProjPoint,
    SymQuadric,
    det4,
    plane_from_span,
    plucker_from_span,
    sym_from_upper,
    wedge,
)

__all__ = [
    "ConditionProgram",
    "MonomialCondition",
    "PencilDiscriminantCondition",
    "DegenerationFamily",
    "point_condition",
    "line_condition",
    "plane_condition",
    "quadric_condition",
    "coefficients_of_pencil",
    "quartic_discriminant",
    "leading_form",
    "DET_X_MONOMIALS",
]

# var index of entry (i, j) of the symmetric matrix, i <= j
_VAR_OF = {ij: v for v, ij in enumerate(UPPER_INDICES)}
_VAR_OF.update({(j, i): v for (i, j), v in list(_VAR_OF.items())})

# Quartic discriminant of c0 + c1 t + c2 t^2 + c3 t^3 + c4 t^4:
# (coefficient, exponents of (c0, c1, c2, c3, c4)).  Isobaric of weight 12.
_DISC4_TERMS = [
    (256, (3, 0, 0, 0, 3)),
    (-192, (2, 1, 0, 1, 2)),
    (-128, (2, 0, 2, 0, 2)),
    (144, (1, 2, 1, 0, 2)),
    (-27, (0, 4, 0, 0, 2)),
    (144, (2, 0, 1, 2, 1)),
    (-6, (1, 2, 0, 2, 1)),
    (-80, (1, 1, 2, 1, 1)),
    (18, (0, 3, 1, 1, 1)),
    (16, (1, 0, 4, 0, 1)),
    (-4, (0, 2, 3, 0, 1)),
    (-27, (2, 0, 0, 4, 0)),
    (18, (1, 1, 1, 3, 0)),
    (-4, (0, 3, 0, 3, 0)),
    (-4, (1, 0, 3, 2, 0)),
    (1, (0, 2, 2, 2, 0)),
]

_PENCIL_NODES = (0, 1, -1, 2, -2)


def quartic_discriminant(c):
    """Discriminant of a quartic from its coefficients (c0, ..., c4), any ring."""
    powers = [_power_list(ck, 4) for ck in c]
    total = 0
    for coeff, exps in _DISC4_TERMS:
        term = coeff
        for k in range(5):
            if exps[k]:
                term = term * powers[k][exps[k]]
        total = total + term
    return total


def _power_list(v, maxexp):
    out = [1, v]
    for _ in range(maxexp - 1):
        out.append(out[-1] * v)
    return out


def _quartic_discriminant_with_partials(c):
    """(disc, [d disc / d c_k for k in 0..4])."""
    powers = [_power_list(ck, 4) for ck in c]
    total = 0
    partials = [0, 0, 0, 0, 0]
    for coeff, exps in _DISC4_TERMS:
        term = coeff
        for k in range(5):
            if exps[k]:
                term = term * powers[k][exps[k]]
        total = total + term
        for k in range(5):
            e = exps[k]
            if not e:
                continue
            part = coeff * e
            for m in range(5):
                em = exps[m] - (1 if m == k else 0)
                if em:
                    part = part * powers[m][em]
            partials[k] = partials[k] + part
    return total, partials


def _combine_pencil(f):
    """Coefficients (c0..c4) from determinant values at t in (0, 1, -1, 2, -2)."""
    f0, f1, fm1, f2, fm2 = f
    s1 = (f1 + fm1) / 2
    d1 = (f1 - fm1) / 2
    s2 = (f2 + fm2) / 2
    d2 = (f2 - fm2) / 2
    c0 = f0
    c4 = (s2 - 4 * s1 + 3 * c0) / 12
    c2 = s1 - c0 - c4
    c3 = (d2 - 2 * d1) / 6
    c1 = d1 - c3
    return (c0, c1, c2, c3, c4)


class ConditionProgram:
    """A homogeneous polynomial condition on the 10 entries of X.

    Subclasses implement ``value`` and ``value_and_grad`` over generic
    scalars; ``xs`` is a sequence of 10 ring elements ordered like
    ``geometry.UPPER_INDICES``.
    """

    degree: int
    figure: object

    def value(self, xs):
        raise NotImplementedError

    def value_and_grad(self, xs):
        raise NotImplementedError


class MonomialCondition(ConditionProgram):
    """Condition stored as a sparse monomial list over the 10 variables."""

    def __init__(self, degree, figure, monomials):
        self.degree = degree
        self.figure = figure
        # monomials: dict {sorted var tuple: coeff}; keep a stable order
        self.monomials = [(k, v) for k, v in sorted(monomials.items()) if v != 0]
        self._grad_table = None

    def value(self, xs):
        total = 0
        for mono, coeff in self.monomials:
            term = coeff
            for v in mono:
                term = term * xs[v]
            total = total + term
        return total

    def _gradient_table(self):
        if self._grad_table is None:
            table = []
            for mono, coeff in self.monomials:
                parts = []
                for v in sorted(set(mono)):
                    rest = list(mono)
                    rest.remove(v)
                    parts.append((v, coeff * mono.count(v), tuple(rest)))
                table.append(parts)
            self._grad_table = table
        return self._grad_table

    def value_and_grad(self, xs):
        total = 0
        grad = [0] * 10
        for (mono, coeff), parts in zip(self.monomials, self._gradient_table()):
            term = coeff
            for v in mono:
                term = term * xs[v]
            total = total + term
            for v, dcoeff, rest in parts:
                part = dcoeff
                for w in rest:
                    part = part * xs[w]
                grad[v] = grad[v] + part
        return total, grad


def _point_monomials(p, dense=False):
    out = {}
    for i in range(4):
        for j in range(i, 4):
            c = p[i] * p[j]
            if i != j:
                c = 2 * c
            key = (_VAR_OF[(i, j)],)
            out[key] = out.get(key, 0) + c
    return out if dense else {k: v for k, v in out.items() if v != 0}


def point_condition(P) -> MonomialCondition:
    """Degree-1 program computing P X P^T."""
    p = P.p if isinstance(P, ProjPoint) else tuple(P)
    return MonomialCondition(1, P if isinstance(P, ProjPoint) else ProjPoint(p), _point_monomials(p))


def _add_mono(out, key, coeff):
    key = tuple(sorted(key))
    out[key] = out.get(key, 0) + coeff


def _line_monomials(l, dense=False):
    out = {}
    for a, (i, j) in enumerate(PAIRS):
        for b, (k, m) in enumerate(PAIRS):
            w = l[a] * l[b]
            # minor of X on rows (i, j), columns (k, m)
            _add_mono(out, (_VAR_OF[(i, k)], _VAR_OF[(j, m)]), w)
            _add_mono(out, (_VAR_OF[(i, m)], _VAR_OF[(j, k)]), -w)
    return out if dense else {k: v for k, v in out.items() if v != 0}


def line_condition(l) -> MonomialCondition:
    """Degree-2 program computing l (wedge_2 X) l^T = det(L X L^T)."""
    line = l if isinstance(l, PluckerLine) else PluckerLine(l, warn_off_grassmannian=False)
    return MonomialCondition(2, line, _line_monomials(line.l))


def _plane_monomials(h, dense=False):
    out = {}
    for a in range(4):
        for b in range(4):
            w = h[a] * h[b] * TRIPLE_SIGNS[a] * TRIPLE_SIGNS[b]
            rows, cols = TRIPLES[a], TRIPLES[b]
            # 3x3 minor expanded along the first row
            i, j, k = rows
            p, q, r = cols
            for col0, colrest, sgn in ((p, (q, r), 1), (q, (p, r), -1), (r, (p, q), 1)):
                c1, c2 = colrest
                _add_mono(out, (_VAR_OF[(i, col0)], _VAR_OF[(j, c1)], _VAR_OF[(k, c2)]), sgn * w)
                _add_mono(out, (_VAR_OF[(i, col0)], _VAR_OF[(j, c2)], _VAR_OF[(k, c1)]), -sgn * w)
    return out if dense else {k: v for k, v in out.items() if v != 0}


def plane_condition(h) -> MonomialCondition:
    """Degree-3 program computing h (wedge_3 X) h^T = det(H X H^T)."""
    plane = h if isinstance(h, ProjPlane) else ProjPlane(h)
    return MonomialCondition(3, plane, _plane_monomials(plane.h))


def _det_x_monomials():
    import itertools

    out = {}
    for perm in itertools.permutations(range(4)):
        sign = 1
        seen = list(perm)
        for i in range(4):  # parity by counting inversions
            for j in range(i + 1, 4):
                if seen[i] > seen[j]:
                    sign = -sign
        key = tuple(sorted(_VAR_OF[(i, perm[i])] for i in range(4)))
        out[key] = out.get(key, 0) + sign
    return {k: v for k, v in out.items() if v != 0}


DET_X_MONOMIALS = _det_x_monomials()


def det_x_condition() -> MonomialCondition:
    """det(X) as a degree-4 monomial program (used for the D equation)."""
    return MonomialCondition(4, None, DET_X_MONOMIALS)


class PencilDiscriminantCondition(ConditionProgram):
    """Degree-12 program Sigma(U, X) = disc_t det(U + t X).

    Evaluated as a straight-line program: five determinants along the
    pencil, exact interpolation to the quartic coefficients, then the
    16-term discriminant.  Derivatives use the adjugate chain rule
    d det(M)/d x_ij = (2 - delta_ij) * adj(M)_ij for symmetric M.
    """

    degree = 12

    def __init__(self, U):
        self.figure = U if isinstance(U, SymQuadric) else SymQuadric(U)
        self._u = self.figure.matrix()

    def _pencil_matrices(self, xs):
        xm = sym_from_upper(xs)
        u = self._u
        mats = []
        for t in _PENCIL_NODES:
            if t == 0:
                mats.append(u)
            else:
                mats.append([[u[i][j] + t * xm[i][j] for j in range(4)] for i in range(4)])
        return mats

    def pencil_coefficients(self, xs):
        mats = self._pencil_matrices(xs)
        return _combine_pencil([det4(m) for m in mats])

    def value(self, xs):
        return quartic_discriminant(self.pencil_coefficients(xs))

    def value_and_grad(self, xs):
        mats = self._pencil_matrices(xs)
        dets = [det4(m) for m in mats]
        c = _combine_pencil(dets)
        disc, dd = _quartic_discriminant_with_partials(c)
        # df(t)/dx_v for each pencil node
        dfdx = []
        for t, m in zip(_PENCIL_NODES, mats):
            if t == 0:
                dfdx.append(None)
                continue
            adj = wedge(m, 3)
            row = []
            for i, j in UPPER_INDICES:
                g = adj[i][j] * t
                row.append(g if i == j else 2 * g)
            dfdx.append(row)
        grad = []
        for v in range(10):
            df = [0 if dfdx[k] is None else dfdx[k][v] for k in range(5)]
            dc = _combine_pencil(df)
            g = 0
            for k in range(5):
                g = g + dd[k] * dc[k]
            grad.append(g)
        return disc, grad


def quadric_condition(U) -> PencilDiscriminantCondition:
    """Degree-12 tangency condition for a fixed quadric U."""
    return PencilDiscriminantCondition(U)


def coefficients_of_pencil(U, X):
    """Exact coefficients (c0, ..., c4) of det(U + t X); c0 = det U, c4 = det X."""
    cond = PencilDiscriminantCondition(U)
    xs = X.coords if isinstance(X, SymQuadric) else tuple(X)
    return cond.pencil_coefficients(xs)


# ---------------------------------------------------------------------------
# The flag degeneration U_eps = V^-1 diag(eps^3, eps^2, eps, 1) V^-T
# ---------------------------------------------------------------------------


class _RatPoly:
    """Univariate polynomial over Fraction, dense ascending coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @classmethod
    def const(cls, v):
        return cls([v])

    @classmethod
    def monomial(cls, coeff, power):
        return cls([0] * power + [coeff])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.c), len(other.c))
        a = self.c + [Fraction(0)] * (n - len(self.c))
        b = other.c + [Fraction(0)] * (n - len(other.c))
        return _RatPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return _RatPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.c or not other.c:
            return _RatPoly([])
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return _RatPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _RatPoly([x / other for x in self.c])

    @staticmethod
    def _coerce(v):
        return v if isinstance(v, _RatPoly) else _RatPoly.const(v)

    def order_and_lead(self):
        """(order of vanishing at 0, lowest nonzero coefficient)."""
        for k, v in enumerate(self.c):
            if v != 0:
                return k, v
        return None, Fraction(0)


def _fraction_matrix(V):
    return [[Fraction(v) for v in row] for row in V]


def _fraction_inverse(M):
    n = len(M)
    a = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class DegenerationFamily:
    """A flag (from the first three rows of V) and its quadric degeneration."""

    V: tuple

    def __post_init__(self):
        v = _fraction_matrix(self.V)
        if det4(v) == 0:
            raise ValueError("V must be invertible")
        object.__setattr__(self, "V", tuple(tuple(r) for r in v))

    @property
    def flag(self) -> Flag:
        rows = [list(r) for r in self.V]
        return Flag(
            P=ProjPoint(rows[0]),
            L=plucker_from_span(rows[:2]),
            H=plane_from_span(rows[:3]),
        )

    def u_epsilon(self, eps) -> SymQuadric:
        """The degenerating quadric V^-1 diag(eps^3, eps^2, eps, 1) V^-T at a rational eps."""
        eps = Fraction(eps)
        vinv = _fraction_inverse(_fraction_matrix(self.V))
        d = [eps**3, eps**2, eps, Fraction(1)]
        entries = []
        for i, j in UPPER_INDICES:
            entries.append(sum(vinv[i][k] * d[k] * vinv[j][k] for k in range(4)))
        return SymQuadric(entries)

    def predicted_leading_coefficient(self, X: SymQuadric) -> Fraction:
        """det(V)^-12 (P X P^T)^2 det(L X L^T)^2 det(H X H^T)^2, exactly."""
        v = [list(r) for r in self.V]
        xm = sym_from_upper([Fraction(c) for c in X.coords])
        dv = det4(v)

        def rows_times_x(rows):
            k = len(rows)
            lx = [[sum(rows[a][i] * xm[i][j] for i in range(4)) for j in range(4)] for a in range(k)]
            g = [[sum(lx[a][j] * rows[b][j] for j in range(4)) for b in range(k)] for a in range(k)]
            if k == 1:
                return g[0][0]
            if k == 2:
                return g[0][0] * g[1][1] - g[0][1] * g[1][0]
            return (
                g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
            )

        fac = rows_times_x(v[:1]) * rows_times_x(v[:2]) * rows_times_x(v[:3])
        return dv ** (-12) * fac**2


def leading_form(V, X):
    """Order and lowest coefficient in eps of Sigma(U_eps, X), computed exactly.

    The pencil coefficients are polynomials in eps; the discriminant is taken
    in the polynomial ring, so orders of vanishing are read off exactly.  For
    generic X the order is 8 with coefficient
    det(V)^-12 (P X P^T)^2 det(L X L^T)^2 det(H X H^T)^2.
    """
    if isinstance(V, DegenerationFamily):
        fam = V
    else:
        fam = DegenerationFamily(tuple(tuple(r) for r in V))
    if not X.is_exact:
        raise ValueError("leading_form requires exact rational X")
    vinv = _fraction_inverse(_fraction_matrix(fam.V))
    # U_eps entries as polynomials in eps: sum_k vinv[i][k] vinv[j][k] eps^(3-k)
    u = [
        [
            _RatPoly([0, 0, 0, 0])
            + sum(
                (_RatPoly.monomial(vinv[i][k] * vinv[j][k], 3 - k) for k in range(4)),
                _RatPoly([]),
            )
            for j in range(4)
        ]
        for i in range(4)
    ]
    xm = sym_from_upper([Fraction(c) for c in X.coords])
    dets = []
    for t in _PENCIL_NODES:
        m = [[u[i][j] + _RatPoly.const(t * xm[i][j]) for j in range(4)] for i in range(4)]
        dets.append(det4(m))
    c = _combine_pencil(dets)
    disc = quartic_discriminant(c)
    order, lead = disc.order_and_lead()
    if order is None:
        raise ValueError("discriminant vanishes identically along the degeneration")
    return order, lead
