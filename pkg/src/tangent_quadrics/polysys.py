"""Square tangency systems: nine conditions, an affine chart, optionally D = det X.

The solver works in the 10-variable system (conditions plus one random
affine chart), whose total degree is 1^alpha 2^beta 3^gamma 12^delta.
The determinant variable D is appended only for certification, which
makes nondegeneracy readable from the certified interval for D.

Systems are evaluated two ways: a compiled numpy path used by the path
tracker, and a generic-scalar path (Fractions, complex intervals,
mpmath) used by identity tests and certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import geometry
from .conditions import (
    ConditionProgram,
    MonomialCondition,
    PencilDiscriminantCondition,
    det_x_condition,
    line_condition,
    plane_condition,
    point_condition,
    quadric_condition,
)
from .geometry import (
    PluckerLine,
    ProjPlane,
    ProjPoint,
    SymQuadric,
    det4,
    figure_from_json,
    figure_to_json,
    sym_from_upper,
    wedge,
    UPPER_INDICES,
)

__all__ = [
    "TangencyInstance",
    "SlpSystem",
    "assemble",
    "with_det_variable",
    "evaluate",
    "jacobian",
    "extend_solution",
    "transport_to_chart",
    "random_real_instance",
]


@dataclass(frozen=True)
class TangencyInstance:
    """alpha points, beta lines, gamma planes, delta quadrics; nine figures total."""

    points: tuple = ()
    lines: tuple = ()
    planes: tuple = ()
    quadrics: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "planes", tuple(self.planes))
        object.__setattr__(self, "quadrics", tuple(self.quadrics))
        if sum(self.signature) != 9:
            raise ValueError(f"need exactly nine figures, got signature {self.signature}")

    @property
    def signature(self):
        return (len(self.points), len(self.lines), len(self.planes), len(self.quadrics))

    @property
    def figures(self):
        return (*self.points, *self.lines, *self.planes, *self.quadrics)

    def to_json(self) -> dict:
        return {
            "points": [figure_to_json(f) for f in self.points],
            "lines": [figure_to_json(f) for f in self.lines],
            "planes": [figure_to_json(f) for f in self.planes],
            "quadrics": [figure_to_json(f) for f in self.quadrics],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TangencyInstance":
        return cls(
            points=[figure_from_json(f) for f in obj.get("points", [])],
            lines=[figure_from_json(f) for f in obj.get("lines", [])],
            planes=[figure_from_json(f) for f in obj.get("planes", [])],
            quadrics=[figure_from_json(f) for f in obj.get("quadrics", [])],
        )


def random_real_instance(signature, rng) -> TangencyInstance:
    """Random real Gaussian figures for a census trial or a search seed."""
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    a, b, g, d = signature
    return TangencyInstance(
        points=[geometry.random_point(rng) for _ in range(a)],
        lines=[geometry.random_line(rng) for _ in range(b)],
        planes=[geometry.random_plane(rng) for _ in range(g)],
        quadrics=[geometry.random_quadric(rng) for _ in range(d)],
    )


# ---------------------------------------------------------------------------
# Compiled monomial block
# ---------------------------------------------------------------------------


def _bincount_complex(bins, vals, minlength):
    re = np.bincount(bins, weights=vals.real, minlength=minlength)
    im = np.bincount(bins, weights=vals.imag, minlength=minlength)
    return re + 1j * im


class CompiledPoly:
    """All monomial equations of a system flattened into gather tables.

    Rows are (equation index, monomial list); a monomial is a tuple of
    variable indices with multiplicity (length <= 4).  Index ``n_vars``
    addresses a constant-1 slot.  Coefficients may be overridden per call,
    which is how parameter homotopies sweep coefficient arrays.
    """

    def __init__(self, n_vars, n_eqs, rows):
        self.n_vars = n_vars
        self.n_eqs = n_eqs
        pad = n_vars
        coeff, idx, eq_of = [], [], []
        jac_src, jac_mult, jac_idx, jac_bin = [], [], [], []
        m = 0
        for eq, monomials in rows:
            for mono, c in monomials:
                coeff.append(complex(c))
                idx.append(list(mono) + [pad] * (4 - len(mono)))
                eq_of.append(eq)
                for v in set(mono):
                    mult = mono.count(v)
                    rest = list(mono)
                    rest.remove(v)
                    jac_src.append(m)
                    jac_mult.append(float(mult))
                    jac_idx.append(rest + [pad] * (3 - len(rest)))
                    jac_bin.append(eq * n_vars + v)
                m += 1
        self.coeff = np.asarray(coeff, dtype=complex)
        self.idx = np.asarray(idx, dtype=np.intp)
        self.eq_of = np.asarray(eq_of, dtype=np.intp)
        self.jac_src = np.asarray(jac_src, dtype=np.intp)
        self.jac_mult = np.asarray(jac_mult)
        self.jac_idx = np.asarray(jac_idx, dtype=np.intp)
        self.jac_bin = np.asarray(jac_bin, dtype=np.intp)

    def _ext(self, x):
        out = np.empty(self.n_vars + 1, dtype=complex)
        out[: self.n_vars] = x
        out[self.n_vars] = 1.0
        return out

    def values(self, x, coeff=None):
        c = self.coeff if coeff is None else coeff
        xe = self._ext(x)
        g = xe[self.idx]
        vals = c * g[:, 0] * g[:, 1] * g[:, 2] * g[:, 3]
        return _bincount_complex(self.eq_of, vals, self.n_eqs)

    def jacobian(self, x, coeff=None):
        c = self.coeff if coeff is None else coeff
        xe = self._ext(x)
        g = xe[self.jac_idx]
        vals = c[self.jac_src] * self.jac_mult * g[:, 0] * g[:, 1] * g[:, 2]
        return _bincount_complex(self.jac_bin, vals, self.n_eqs * self.n_vars).reshape(
            self.n_eqs, self.n_vars
        )


# ---------------------------------------------------------------------------
# SlpSystem
# ---------------------------------------------------------------------------


@dataclass
class SlpSystem:
    """A square system: condition programs, one affine chart, optional D equation.

    Variable order is (x11, ..., x44) for 10-variable systems and
    (D, x11, ..., x44) once the determinant variable is appended.
    """

    conditions: list
    chart_coefficients: np.ndarray
    has_det_variable: bool = False
    chart_seed: int | None = None
    instance: TangencyInstance | None = None
    _poly: CompiledPoly | None = field(default=None, repr=False, compare=False)
    _disc_rows: list = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return 11 if self.has_det_variable else 10

    @property
    def x_offset(self) -> int:
        return 1 if self.has_det_variable else 0

    @property
    def degrees(self):
        out = [c.degree for c in self.conditions] + [1]
        if self.has_det_variable:
            out.append(4)
        return out

    @property
    def total_degree(self) -> int:
        prod = 1
        for d in self.degrees:
            prod *= d
        return prod

    @property
    def n_equations(self) -> int:
        return len(self.conditions) + 1 + (1 if self.has_det_variable else 0)

    # -- compiled fast path ------------------------------------------------

    def _compile(self):
        if self._poly is not None:
            return
        off = self.x_offset
        n = self.n
        rows = []
        disc_rows = []
        for eq, cond in enumerate(self.conditions):
            if isinstance(cond, PencilDiscriminantCondition):
                disc_rows.append((eq, cond))
                continue
            rows.append(
                (eq, [(tuple(v + off for v in mono), c) for mono, c in cond.monomials])
            )
        chart_eq = len(self.conditions)
        chart_row = [((v + off,), c) for v, c in enumerate(self.chart_coefficients)]
        chart_row.append(((), -1.0))
        rows.append((chart_eq, chart_row))
        if self.has_det_variable:
            det_row = [
                (tuple(v + off for v in mono), c) for mono, c in det_x_condition().monomials
            ]
            det_row.append(((0,), -1.0))
            rows.append((chart_eq + 1, det_row))
        self._poly = CompiledPoly(n, self.n_equations, rows)
        self._disc_rows = disc_rows

    def evaluate(self, x) -> np.ndarray:
        """Residual vector at a complex coordinate vector."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.n,):
            raise ValueError(f"expected {self.n} coordinates, got {x.shape}")
        self._compile()
        out = self._poly.values(x)
        if self._disc_rows:
            xs = list(x[self.x_offset :])
            for eq, cond in self._disc_rows:
                out[eq] = cond.value(xs)
        return out

    def jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.n,):
            raise ValueError(f"expected {self.n} coordinates, got {x.shape}")
        self._compile()
        jac = self._poly.jacobian(x)
        if self._disc_rows:
            xs = list(x[self.x_offset :])
            for eq, cond in self._disc_rows:
                _, grad = cond.value_and_grad(xs)
                jac[eq, self.x_offset :] = grad
        return jac

    # -- generic path (Fractions, intervals, mpmath) ------------------------

    def evaluate_exact(self, xs):
        xs = list(xs)
        xe = xs[self.x_offset :]
        out = []
        for cond in self.conditions:
            out.append(cond.value(xe))
        chart = 0
        for c, v in zip(self.chart_coefficients, xe):
            chart = chart + c * v
        out.append(chart - 1)
        if self.has_det_variable:
            out.append(det4(sym_from_upper(xe)) - xs[0])
        return out

    def jacobian_exact(self, xs):
        xs = list(xs)
        off = self.x_offset
        xe = xs[off:]
        n = self.n
        rows = []
        for cond in self.conditions:
            _, grad = cond.value_and_grad(xe)
            rows.append([0] * off + list(grad))
        rows.append([0] * off + list(self.chart_coefficients))
        if self.has_det_variable:
            adj = wedge(sym_from_upper(xe), 3)
            grad = []
            for i, j in UPPER_INDICES:
                grad.append(adj[i][j] if i == j else 2 * adj[i][j])
            rows.append([-1] + grad)
        assert len(rows) == n
        return rows


def assemble(instance: TangencyInstance, chart_seed: int = 0, real_chart: bool = False) -> SlpSystem:
    """Build the 10-variable system for an instance; deterministic in chart_seed.

    The chart is one random affine equation sum c_v x_v = 1 whose
    coefficients are unit-modulus complex numbers (or unit-norm reals when
    ``real_chart`` is set, which certification uses so that conjugation
    symmetry of the solution set is preserved).
    """
    conds: list[ConditionProgram] = []
    conds += [point_condition(p) for p in instance.points]
    conds += [line_condition(l) for l in instance.lines]
    conds += [plane_condition(h) for h in instance.planes]
    conds += [quadric_condition(u) for u in instance.quadrics]
    rng = np.random.default_rng(chart_seed)
    if real_chart:
        c = rng.standard_normal(10)
        c = c / np.linalg.norm(c)
        chart = c.astype(complex)
    else:
        chart = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, size=10))
    return SlpSystem(
        conditions=conds,
        chart_coefficients=chart,
        chart_seed=chart_seed,
        instance=instance,
    )


def with_det_variable(s: SlpSystem) -> SlpSystem:
    """Append the variable D and the equation det(X) - D = 0 (11 x 11 system)."""
    if s.has_det_variable:
        raise ValueError("system already has the determinant variable")
    return SlpSystem(
        conditions=s.conditions,
        chart_coefficients=s.chart_coefficients,
        has_det_variable=True,
        chart_seed=s.chart_seed,
        instance=s.instance,
    )


def evaluate(s: SlpSystem, x):
    """Residual vector; numpy fast path for numeric input, generic otherwise."""
    if isinstance(x, np.ndarray) and x.dtype != object:
        return s.evaluate(x)
    xs = list(x)
    if all(isinstance(v, (int, float, complex, np.floating, np.complexfloating)) for v in xs):
        return s.evaluate(np.asarray(xs, dtype=complex))
    return s.evaluate_exact(xs)


def jacobian(s: SlpSystem, x):
    if isinstance(x, np.ndarray) and x.dtype != object:
        return s.jacobian(x)
    xs = list(x)
    if all(isinstance(v, (int, float, complex, np.floating, np.complexfloating)) for v in xs):
        return s.jacobian(np.asarray(xs, dtype=complex))
    return s.jacobian_exact(xs)


def exact_residual(s: SlpSystem, x) -> np.ndarray:
    """Residual evaluated exactly over rationals, then rounded to complex.

    Floats are dyadic rationals, so this is free of cancellation error;
    Newton with exact residuals (iterative refinement) pushes solutions to
    a few ulps even when the Jacobian is badly conditioned.
    """
    from .intervals import ComplexRational

    xs = [ComplexRational.from_complex(v) for v in np.asarray(x, dtype=complex)]
    return np.array([complex(v) for v in s.evaluate_exact(xs)])


def refine_exact(s: SlpSystem, x, iters: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """A few Newton steps with exact residuals; returns (x, last step sizes)."""
    x = np.asarray(x, dtype=complex)
    err = np.full(s.n, np.inf)
    for _ in range(iters):
        try:
            delta = np.linalg.solve(s.jacobian(x), -exact_residual(s, x))
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        x = x + delta
        err = np.abs(delta)
        if float(np.max(err)) < 4e-16 * (1.0 + float(np.max(np.abs(x)))):
            break
    return x, err


def extend_solution(x10) -> np.ndarray:
    """Extend a 10-vector solution by D = det(X) to the 11-variable system."""
    x10 = np.asarray(x10, dtype=complex)
    d = np.linalg.det(np.asarray(sym_from_upper(list(x10)), dtype=complex))
    return np.concatenate(([d], x10))


def transport_to_chart(x10, chart_coefficients) -> np.ndarray:
    """Rescale a projective representative onto the chart sum c_v x_v = 1."""
    x10 = np.asarray(x10, dtype=complex)
    denom = np.dot(np.asarray(chart_coefficients, dtype=complex), x10)
    if abs(denom) < 1e-12 * np.linalg.norm(x10):
        raise ZeroDivisionError("solution lies on the chart hyperplane; pick another chart")
    return x10 / denom


def projective_normalize(x) -> np.ndarray:
    """Unit norm with the largest-magnitude coordinate rotated to be real positive."""
    x = np.asarray(x, dtype=complex)
    v = x / np.linalg.norm(x)
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    return v / phase
