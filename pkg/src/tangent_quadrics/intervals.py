"""Complex interval arithmetic in midpoint-radius form with outward rounding.

Intervals are rectangles: independent real and imaginary intervals, each
stored as (mid, rad).  Soundness is obtained by epsilon-inflation after
every floating operation (radii grow by a few ulps plus the unit roundoff
of the midpoint) instead of switching rounding modes, which keeps the
arithmetic portable.  The enclosure property - the exact result of an
operation on any members lies inside the result interval - is what the
Krawczyk certificates rest on, and is hammered by randomized tests
against exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "ComplexInterval",
    "ComplexRational",
    "interval_vec",
    "interval_mat_vec",
    "interval_mat_mat",
]

_U = 2.0**-53
_TINY = 5e-324  # absorbs underflow at the subnormal boundary
_GROW = 1.0 + 8.0 * _U


def _widen(rad, mid_abs):
    """Outward slack covering the float roundings of one midpoint-radius op."""
    return (rad + 4.0 * _U * mid_abs + _TINY) * _GROW


def _radd(m1, r1, m2, r2):
    m = m1 + m2
    return m, _widen(r1 + r2, abs(m))


def _rsub(m1, r1, m2, r2):
    m = m1 - m2
    return m, _widen(r1 + r2, abs(m))


def _rmul(m1, r1, m2, r2):
    m = m1 * m2
    r = abs(m1) * r2 + abs(m2) * r1 + r1 * r2
    return m, _widen(r, abs(m))


class ComplexInterval:
    """Rectangle (re_mid +- re_rad) + i (im_mid +- im_rad)."""

    __slots__ = ("re_mid", "re_rad", "im_mid", "im_rad")

    def __init__(self, re_mid=0.0, re_rad=0.0, im_mid=0.0, im_rad=0.0):
        if re_rad < 0 or im_rad < 0:
            raise ValueError("radii must be nonnegative")
        self.re_mid = float(re_mid)
        self.re_rad = float(re_rad)
        self.im_mid = float(im_mid)
        self.im_rad = float(im_rad)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_number(cls, z):
        """Exact enclosure of an int, float, complex or Fraction."""
        if isinstance(z, ComplexInterval):
            return z
        if isinstance(z, Fraction):
            m = float(z)
            # nearest rounding: |z - m| <= u|m| (+ subnormal guard)
            return cls(m, _U * abs(m) + _TINY, 0.0, 0.0)
        z = complex(z)
        return cls(z.real, 0.0, z.imag, 0.0)

    @property
    def mid(self) -> complex:
        return complex(self.re_mid, self.im_mid)

    @property
    def max_rad(self) -> float:
        return max(self.re_rad, self.im_rad)

    def __repr__(self):
        return (
            f"({self.re_mid} ± {self.re_rad:.4e}) + ({self.im_mid} ± {self.im_rad:.4e})im"
        )

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ComplexInterval):
            return other
        if isinstance(other, (int, float, complex, Fraction)):
            return ComplexInterval.from_number(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        rm, rr = _radd(self.re_mid, self.re_rad, o.re_mid, o.re_rad)
        im, ir = _radd(self.im_mid, self.im_rad, o.im_mid, o.im_rad)
        return ComplexInterval(rm, rr, im, ir)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        rm, rr = _rsub(self.re_mid, self.re_rad, o.re_mid, o.re_rad)
        im, ir = _rsub(self.im_mid, self.im_rad, o.im_mid, o.im_rad)
        return ComplexInterval(rm, rr, im, ir)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexInterval(-self.re_mid, self.re_rad, -self.im_mid, self.im_rad)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a + bi)(c + di) = (ac - bd) + (ad + bc)i over real intervals
        ac = _rmul(self.re_mid, self.re_rad, o.re_mid, o.re_rad)
        bd = _rmul(self.im_mid, self.im_rad, o.im_mid, o.im_rad)
        ad = _rmul(self.re_mid, self.re_rad, o.im_mid, o.im_rad)
        bc = _rmul(self.im_mid, self.im_rad, o.re_mid, o.re_rad)
        rm, rr = _rsub(*ac, *bd)
        im, ir = _radd(*ad, *bc)
        return ComplexInterval(rm, rr, im, ir)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by an exact scalar only (pencil interpolation constants)."""
        if isinstance(other, int):
            m1, r1 = self.re_mid / other, self.re_rad / abs(other)
            m2, r2 = self.im_mid / other, self.im_rad / abs(other)
            return ComplexInterval(m1, _widen(r1, abs(m1)), m2, _widen(r2, abs(m2)))
        if isinstance(other, Fraction):
            return self * ComplexInterval.from_number(1 / other)
        return NotImplemented

    def conj(self):
        return ComplexInterval(self.re_mid, self.re_rad, -self.im_mid, self.im_rad)

    # -- predicates (all conservative in the proving direction) -------------

    @staticmethod
    def _slack(*vals):
        return 4.0 * _U * sum(abs(v) for v in vals) + 4.0 * _TINY

    def contained_in_interior(self, other) -> bool:
        """True only if self is certainly inside the interior of other."""

        def inside(m1, r1, m2, r2):
            d = abs(m1 - m2)
            s = ComplexInterval._slack(m1, m2, r1, r2)
            return d + r1 + s < r2

        return inside(self.re_mid, self.re_rad, other.re_mid, other.re_rad) and inside(
            self.im_mid, self.im_rad, other.im_mid, other.im_rad
        )

    def disjoint_from(self, other) -> bool:
        """True only if the rectangles certainly do not intersect."""

        def apart(m1, r1, m2, r2):
            d = abs(m1 - m2)
            s = ComplexInterval._slack(m1, m2, r1, r2)
            return d > r1 + r2 + s

        return apart(self.re_mid, self.re_rad, other.re_mid, other.re_rad) or apart(
            self.im_mid, self.im_rad, other.im_mid, other.im_rad
        )

    def excludes_zero(self) -> bool:
        """True only if 0 is certainly not in the rectangle."""
        s_re = ComplexInterval._slack(self.re_mid, self.re_rad)
        s_im = ComplexInterval._slack(self.im_mid, self.im_rad)
        return abs(self.re_mid) > self.re_rad + s_re or abs(self.im_mid) > self.im_rad + s_im

    def hull(self, other) -> "ComplexInterval":
        def h(m1, r1, m2, r2):
            lo = min(m1 - r1, m2 - r2)
            hi = max(m1 + r1, m2 + r2)
            m = 0.5 * (lo + hi)
            r = _widen(max(hi - m, m - lo) + 2.0 * _U * (abs(lo) + abs(hi)), abs(m))
            return m, r

        rm, rr = h(self.re_mid, self.re_rad, other.re_mid, other.re_rad)
        im, ir = h(self.im_mid, self.im_rad, other.im_mid, other.im_rad)
        return ComplexInterval(rm, rr, im, ir)

    def widened(self, extra) -> "ComplexInterval":
        return ComplexInterval(
            self.re_mid, _widen(self.re_rad + extra, abs(self.re_mid)),
            self.im_mid, _widen(self.im_rad + extra, abs(self.im_mid)),
        )

    def contains_exact(self, re_q, im_q=0) -> bool:
        """Exact membership test for a rational point (used by soundness tests)."""
        re_q, im_q = Fraction(re_q), Fraction(im_q)
        return (
            abs(re_q - Fraction(self.re_mid)) <= Fraction(self.re_rad)
            and abs(im_q - Fraction(self.im_mid)) <= Fraction(self.im_rad)
        )

    def to_json(self) -> dict:
        return {
            "re_mid": self.re_mid,
            "re_rad": self.re_rad,
            "im_mid": self.im_mid,
            "im_rad": self.im_rad,
        }

    @classmethod
    def from_json(cls, obj) -> "ComplexInterval":
        return cls(obj["re_mid"], obj["re_rad"], obj["im_mid"], obj["im_rad"])


class ComplexRational:
    """Exact complex number with Fraction components.

    Floats are dyadic rationals, so midpoint residuals F(y) can be computed
    exactly in this ring and only then rounded into tight intervals; this
    removes the floating-point cancellation floor from the Krawczyk operator
    and is what lets ill-conditioned solutions certify in double precision.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def from_complex(cls, z):
        if isinstance(z, ComplexRational):
            return z
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    def _coerce(self, other):
        if isinstance(other, ComplexRational):
            return other
        if isinstance(other, (int, Fraction)):
            return ComplexRational(other)
        if isinstance(other, (float, complex)):
            return ComplexRational.from_complex(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return ComplexRational(self.re / other, self.im / other)
        return NotImplemented

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not None and self.re == o.re and self.im == o.im

    def __repr__(self):
        return f"ComplexRational({self.re}, {self.im})"

    def enclosure(self) -> ComplexInterval:
        """Tight ComplexInterval containing this exact value."""
        rm = float(self.re)
        im = float(self.im)
        return ComplexInterval(
            rm, abs(rm) * _U + _TINY if Fraction(rm) != self.re else 0.0,
            im, abs(im) * _U + _TINY if Fraction(im) != self.im else 0.0,
        )


def interval_vec(values) -> list:
    return [ComplexInterval.from_number(v) for v in values]


def interval_mat_vec(mat, vec) -> list:
    out = []
    for row in mat:
        acc = ComplexInterval()
        for a, b in zip(row, vec):
            acc = acc + (ComplexInterval.from_number(a) * b if not isinstance(a, ComplexInterval) else a * b)
        out.append(acc)
    return out


def interval_mat_mat(a, b) -> list:
    n = len(a)
    m = len(b[0])
    k = len(b)
    out = [[None] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for j in range(m):
            acc = ComplexInterval()
            for l in range(k):
                acc = acc + ai[l] * b[l][j]
            out[i][j] = acc
    return out
