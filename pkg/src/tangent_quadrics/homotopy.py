"""Path tracking: total-degree homotopies with the gamma trick, plus
parameter homotopies for warm-started re-solves.

The predictor is classical RK4 on the Davidenko equation
dx/dt = -J_x^{-1} dH/dt, the corrector is Newton at fixed t.  Steps are
accepted when the corrector contracts, expanded after three consecutive
accepts and contracted on failure; a path that stalls below the minimum
step is classified from the condition number of the target Jacobian.
There is no endgame: singular endpoints are reported, not refined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from .conditions import (
    PencilDiscriminantCondition,
    _line_monomials,
    _plane_monomials,
    _point_monomials,
)
from .geometry import sym_from_upper
from .polysys import CompiledPoly, SlpSystem, TangencyInstance, assemble

__all__ = [
    "TrackerSettings",
    "TrackedSolution",
    "solve_total_degree",
    "track_path",
    "parameter_homotopy",
    "count_real",
    "count_nondegenerate",
    "phase_aligned_imag_norm",
    "is_projectively_real",
]

_NEAR_END = 0.1  # below this t, steps are capped to half the remaining arc
_FINAL_JUMP = 1e-6  # below this t, the tracker may jump straight to t = 0
_SNAP_START = 1e-3  # below this t, endpoint snapping is attempted after each step


@dataclass(frozen=True)
class TrackerSettings:
    initial_step: float = 0.1
    min_step: float = 1e-7
    newton_tol: float = 1e-10
    max_newton_iters: int = 3
    step_expansion: float = 1.5
    step_contraction: float = 0.5
    endpoint_tol: float = 1e-9
    singular_condition_threshold: float = 1e12
    real_tol: float = 1e-6
    rng_seed: int = 0
    # artifact knobs beyond the core contract
    max_steps: int = 4000
    divergence_threshold: float = 1e8
    dedup_tol: float = 1e-8
    corrector_tol: float = 1e-9
    det_tol: float = 1e-12
    gamma_retry_threshold: float = 0.05
    retrack_tightened: bool = True

    def __post_init__(self):
        if not (0 < self.min_step < self.initial_step):
            raise ValueError("need 0 < min_step < initial_step")
        for name in ("newton_tol", "endpoint_tol", "real_tol", "corrector_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_json(cls, obj: dict) -> "TrackerSettings":
        return cls(**obj)


@dataclass
class TrackedSolution:
    x: np.ndarray
    path_index: int
    residual: float
    condition_estimate: float
    status: str  # converged | singular_endpoint | diverged | failed
    det_value: complex
    is_real_estimate: bool
    t_stalled: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def nondegenerate(self) -> bool:
        """Heuristic: certification decides rigorously via the D interval."""
        return self.converged and abs(self.det_value) > 1e-12

    def to_json(self) -> dict:
        return {
            "path_index": self.path_index,
            "status": self.status,
            "x": [[v.real, v.imag] for v in self.x],
            "det": [self.det_value.real, self.det_value.imag],
            "residual": self.residual,
            "condition": self.condition_estimate,
            "real_estimate": bool(self.is_real_estimate),
        }


def phase_aligned_imag_norm(x) -> float:
    """Minimum of ||Im(e^{i phi} x / ||x||)|| over unit phases phi.

    Zero exactly when the projective point has a real representative; the
    minimizer is phi = -arg(sum x_v^2)/2.
    """
    x = np.asarray(x, dtype=complex)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        return 0.0
    v = x / nrm
    s = np.sum(v * v)
    if abs(s) < 1e-300:
        return float(np.sqrt(0.5))
    w = v * np.exp(-0.5j * np.angle(s))
    return float(np.linalg.norm(w.imag))


def is_projectively_real(x, real_tol: float = 1e-6) -> bool:
    return phase_aligned_imag_norm(x) <= real_tol


def count_real(solutions, real_tol: float = 1e-6) -> int:
    """Converged solutions whose projective point is real within tolerance."""
    return sum(
        1
        for s in solutions
        if s.converged and phase_aligned_imag_norm(s.x) <= real_tol
    )


def count_nondegenerate(solutions, det_tol: float = 1e-12) -> int:
    """Converged solutions with |det X| above tolerance (the tangency count).

    A heuristic count; census-grade results use the certified D interval.
    """
    return sum(1 for s in solutions if s.converged and abs(s.det_value) > det_tol)


# ---------------------------------------------------------------------------
# Homotopies
# ---------------------------------------------------------------------------


class _StartSystem:
    """x_i^{d_i} - r_i with random unit constants r_i."""

    def __init__(self, degrees, roots):
        self.degrees = np.asarray(degrees)
        self.roots = np.asarray(roots, dtype=complex)
        self.n = len(degrees)

    def evaluate(self, x):
        return x**self.degrees - self.roots

    def jacobian(self, x):
        return np.diag(self.degrees * x ** (self.degrees - 1))

    def start_points(self):
        per_var = []
        for d, r in zip(self.degrees, self.roots):
            base = r ** (1.0 / d)
            per_var.append([base * np.exp(2j * np.pi * k / d) for k in range(d)])
        for combo in itertools.product(*per_var):
            yield np.asarray(combo, dtype=complex)


class PairHomotopy:
    """H(x, t) = gamma * t * A(x) + (1 - t) * B(x), tracked from t=1 to t=0."""

    def __init__(self, start, target, gamma):
        self.start = start
        self.target = target
        self.gamma = complex(gamma)
        self.n = target.n

    def eval(self, x, t, need_ht=True):
        a = self.start.evaluate(x)
        b = self.target.evaluate(x)
        ja = self.start.jacobian(x)
        jb = self.target.jacobian(x)
        h = self.gamma * t * a + (1 - t) * b
        j = self.gamma * t * ja + (1 - t) * jb
        ht = self.gamma * a - b if need_ht else None
        return h, j, ht


_PARAM_NODES = (0.0, 0.25, 0.5, 0.75, 1.0)
# exact inverse Vandermonde for those nodes, as floats
_PARAM_VINV = np.array(
    [
        [1, 0, 0, 0, 0],
        [-25 / 3, 16, -12, 16 / 3, -1],
        [70 / 3, -208 / 3, 76, -112 / 3, 22 / 3],
        [-80 / 3, 96, -128, 224 / 3, -16],
        [32 / 3, -128 / 3, 64, -128 / 3, 32 / 3],
    ],
    dtype=float,
)

_DENSE_BUILDERS = {
    "point": _point_monomials,
    "line": _line_monomials,
    "plane": _plane_monomials,
}


class ParameterHomotopy:
    """Straight-segment homotopy between two instances of the same signature.

    Figure coordinates move along a + s(b - a) + s(1-s)d with a random
    complex detour d, so the real discriminant locus is avoided with
    probability one.  Condition coefficients are degree <= 4 polynomials
    in s and are swept exactly through precomputed power-basis tables;
    quadric (discriminant) rows are rebuilt per step.
    """

    def __init__(self, instance0, instance1, chart_coefficients, rng, detour_scale=0.25):
        if instance0.signature != instance1.signature:
            raise ValueError("parameter homotopy needs matching signatures")
        self.instance0 = instance0
        self.instance1 = instance1
        self.chart = np.asarray(chart_coefficients, dtype=complex)
        self.n = 10

        specs = []  # (kind, a, b, d) raw coordinate arrays per figure
        for kind, f0s, f1s in (
            ("point", instance0.points, instance1.points),
            ("line", instance0.lines, instance1.lines),
            ("plane", instance0.planes, instance1.planes),
            ("quadric", instance0.quadrics, instance1.quadrics),
        ):
            for f0, f1 in zip(f0s, f1s):
                a = np.asarray([complex(v) for v in f0.coords])
                b = np.asarray([complex(v) for v in f1.coords])
                scale = detour_scale * 0.5 * (np.linalg.norm(a) + np.linalg.norm(b))
                d = scale * (rng.standard_normal(len(a)) + 1j * rng.standard_normal(len(a)))
                d /= np.sqrt(len(a))
                specs.append((kind, a, b, d))
        self._specs = specs

        # canonical monomial keys per polynomial row
        self._poly_keys = []
        rows = []
        eq = 0
        disc_specs = []
        for kind, a, b, d in specs:
            if kind == "quadric":
                disc_specs.append((eq, a, b, d))
                self._poly_keys.append(None)
                eq += 1
                continue
            dense = _DENSE_BUILDERS[kind](list(a), dense=True)
            keys = sorted(dense)
            self._poly_keys.append(keys)
            rows.append((eq, [(k, dense[k]) for k in keys]))
            eq += 1
        chart_row = [((v,), c) for v, c in enumerate(self.chart)] + [((), -1.0)]
        rows.append((eq, chart_row))
        self._n_eqs = eq + 1
        self._poly = CompiledPoly(10, self._n_eqs, rows)
        self._disc_specs = disc_specs

        # coefficient tables at the interpolation nodes -> power basis
        c_nodes = np.stack([self._coeffs_at(s) for s in _PARAM_NODES])
        self._power = _PARAM_VINV.astype(complex) @ c_nodes
        self._dpower = np.stack(
            [k * self._power[k] for k in range(1, 5)]
        )

    def _figure_coords(self, spec, s):
        _, a, b, d = spec
        return a + s * (b - a) + s * (1 - s) * d

    def _coeffs_at(self, s):
        out = []
        for spec, keys in zip(self._specs, self._poly_keys):
            kind = spec[0]
            if kind == "quadric":
                continue
            coords = list(self._figure_coords(spec, s))
            dense = _DENSE_BUILDERS[kind](coords, dense=True)
            out.extend(complex(dense[k]) for k in keys)
        out.extend(self.chart)
        out.append(-1.0)
        return np.asarray(out, dtype=complex)

    def _coeff_arrays(self, s):
        p = self._power
        c = p[4]
        for k in (3, 2, 1, 0):
            c = c * s + p[k]
        dp = self._dpower
        dc = dp[3]
        for k in (2, 1, 0):
            dc = dc * s + dp[k]
        return c, dc

    def _disc_conditions(self, s):
        out = []
        for eq, a, b, d in self._disc_specs:
            u = a + s * (b - a) + s * (1 - s) * d
            out.append((eq, PencilDiscriminantCondition(list(u))))
        return out

    def eval(self, x, t, need_ht=True):
        s = 1.0 - t
        c, dc = self._coeff_arrays(s)
        h = self._poly.values(x, c)
        j = self._poly.jacobian(x, c)
        ht = None
        if need_ht:
            ht = -self._poly.values(x, dc)  # dH/dt = -dF/ds
        if self._disc_specs:
            xs = list(x)
            for eq, cond in self._disc_conditions(s):
                val, grad = cond.value_and_grad(xs)
                h[eq] = val
                j[eq, :] = grad
            if need_ht:
                eps = 1e-6
                lo = self._disc_conditions(max(0.0, s - eps))
                hi = self._disc_conditions(min(1.0, s + eps))
                span = min(1.0, s + eps) - max(0.0, s - eps)
                for (eq, clo), (_, chi) in zip(lo, hi):
                    ht[eq] = -(chi.value(xs) - clo.value(xs)) / span
        return h, j, ht

    def target_system(self, chart_seed=None) -> SlpSystem:
        s = assemble(self.instance1, chart_seed if chart_seed is not None else 0)
        return SlpSystem(
            conditions=s.conditions,
            chart_coefficients=self.chart,
            chart_seed=chart_seed,
            instance=self.instance1,
        )


# ---------------------------------------------------------------------------
# Core tracker
# ---------------------------------------------------------------------------


def _newton_polish(system_eval, x, residual_floor, max_iters):
    """Newton driven by the residual norm; keeps the best iterate seen.

    Returns (x_best, residual_best).  Stops early once the residual is at
    the floor or stops improving (machine-precision plateau).
    """
    best_x = x
    best_res = float(np.max(np.abs(system_eval(x)[0])))
    for _ in range(max_iters):
        f, j = system_eval(x)
        try:
            delta = np.linalg.solve(j, -f)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        x = x + delta
        res = float(np.max(np.abs(system_eval(x)[0])))
        if res < best_res:
            best_x, best_res = x, res
        if res <= residual_floor:
            break
        if res > 0.5 * best_res and best_res < 1e-12:
            break
    return best_x, best_res


def _track_one(hom, target, x0, settings, path_index):
    """Track one path of H from t=1 to t=0 and classify the endpoint."""
    x = np.asarray(x0, dtype=complex)
    t = 1.0
    dt = settings.initial_step
    streak = 0
    stalled = False

    def corrector(xc, tc, moved):
        """Newton at fixed t.  Acceptance is relative to the predictor
        displacement: the total correction must stay below a tenth of the
        step taken, which keeps the iterate glued to its own path when
        solutions crowd together near t = 0.  In the end zone a plateaued
        iteration is additionally accepted at a loose absolute tolerance;
        plain Newton bottoms out near u * cond there, and the endpoint
        polish recovers full accuracy with exact residuals."""
        x_in = xc
        scale = 1.0 + float(np.max(np.abs(xc)))
        limit = 0.1 * moved + 1e-12 * scale
        prev = None
        for it in range(settings.max_newton_iters):
            h, j, _ = hom.eval(xc, tc, need_ht=False)
            try:
                delta = np.linalg.solve(j, -h)
            except np.linalg.LinAlgError:
                return xc, False
            if not np.all(np.isfinite(delta)):
                return xc, False
            xc = xc + delta
            nd = float(np.max(np.abs(delta)))
            scale = 1.0 + float(np.max(np.abs(xc)))
            total = float(np.max(np.abs(xc - x_in)))
            plateau = (
                tc < 1e-4
                and it >= 1
                and nd <= 1e-6 * scale
                and prev is not None
                and nd <= prev
                and total <= 1e-5 * scale
            )
            if plateau:
                return xc, True
            if total > limit:
                return xc, False
            if nd <= max(settings.corrector_tol * scale, 0.02 * limit):
                return xc, True
            if prev is not None and nd > 0.25 * prev:
                return xc, False
            prev = nd
        return xc, False

    for _ in range(settings.max_steps):
        if t <= 0.0:
            break
        cap = t
        if _FINAL_JUMP < t < _NEAR_END:
            cap = max(0.5 * t, _FINAL_JUMP)
        step = min(dt, cap)
        target_t = t - step
        if target_t < 1e-14:
            target_t = 0.0

        # RK4 predictor on dx/dt = -J^{-1} Ht
        try:
            xp = _rk4_step(hom, x, t, -step)
        except np.linalg.LinAlgError:
            xp = None
        if xp is None or not np.all(np.isfinite(xp)):
            accepted = False
        else:
            moved = float(np.max(np.abs(xp - x)))
            xc, accepted = corrector(xp, target_t, moved)

        if accepted:
            speed = float(np.max(np.abs(xc - x))) / max(step, 1e-300)
            x, t = xc, target_t
            if float(np.max(np.abs(x))) > settings.divergence_threshold:
                return _classify(target, x, t, settings, path_index, forced="diverged")
            if 0.0 < t < _SNAP_START:
                # endpoint snap: Newton against the target system, accepted only
                # if the move stays within the remaining estimated arc length
                snapped, res = _newton_polish(
                    lambda xx: (target.evaluate(xx), target.jacobian(xx)),
                    x,
                    0.01 * settings.endpoint_tol,
                    6,
                )
                arc = speed * t + 1e3 * settings.corrector_tol * (1.0 + float(np.max(np.abs(x))))
                if res < 0.01 * settings.endpoint_tol and float(np.max(np.abs(snapped - x))) <= 3.0 * arc:
                    return _classify(target, snapped, 0.0, settings, path_index)
            streak += 1
            if streak >= 3:
                dt = min(dt * settings.step_expansion, settings.initial_step)
                streak = 0
        else:
            streak = 0
            dt *= settings.step_contraction
            if dt < settings.min_step:
                stalled = True
                break

    return _classify(target, x, t, settings, path_index, stalled=stalled)


def _rk4_step(hom, x, t, dt):
    cap = 1e5 * (1.0 + float(np.max(np.abs(x))))

    def phi(xx, tt):
        _, j, ht = hom.eval(xx, tt)
        k = np.linalg.solve(j, -ht)
        if float(np.max(np.abs(k))) > cap:
            # near-singular Jacobian along the path; force a step rejection
            # rather than predict garbage
            raise np.linalg.LinAlgError("predictor blow-up")
        return k

    k1 = phi(x, t)
    k2 = phi(x + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = phi(x + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = phi(x + dt * k3, t + dt)
    return x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _classify(target, x, t, settings, path_index, stalled=False, forced=None):
    """Polish (when warranted) and classify an endpoint against the target system."""

    def sys_eval(xx):
        return target.evaluate(xx), target.jacobian(xx)

    status = forced
    if status is None and float(np.max(np.abs(x))) > settings.divergence_threshold:
        status = "diverged"

    polished = x
    residual = float("inf")
    if status is None:
        floor = 0.01 * settings.endpoint_tol
        if t <= 1e-5:
            polished, residual = _newton_polish(sys_eval, x, floor, 15)
            if residual > floor and residual < 1e-3 and isinstance(target, SlpSystem):
                # plain Newton is precision-limited near ill-conditioned
                # endpoints; exact-residual refinement goes to a few ulps
                from .polysys import exact_residual, refine_exact

                refined, _ = refine_exact(target, polished, iters=5)
                res2 = float(np.max(np.abs(exact_residual(target, refined))))
                if res2 < residual and np.all(np.isfinite(refined)):
                    polished, residual = refined, res2
        else:
            # stalled well before the end; a cautious polish can still land on
            # a regular endpoint, but large moves are rejected (no jumping)
            polished, residual = _newton_polish(sys_eval, x, floor, 8)
            if float(np.max(np.abs(polished - x))) > 0.05 * (1.0 + float(np.max(np.abs(x)))):
                polished, residual = x, float(np.max(np.abs(target.evaluate(x))))
        if not np.all(np.isfinite(polished)):
            polished = x
            residual = float("inf")
    else:
        fx = target.evaluate(x)
        residual = float(np.max(np.abs(fx))) if np.all(np.isfinite(fx)) else float("inf")

    try:
        cond = float(np.linalg.cond(target.jacobian(polished)))
    except np.linalg.LinAlgError:
        cond = float("inf")
    if not np.isfinite(cond):
        cond = 1e308

    if status is None:
        if residual < settings.endpoint_tol and cond < settings.singular_condition_threshold:
            status = "converged"
        elif cond >= settings.singular_condition_threshold or (stalled and t < _NEAR_END):
            status = "singular_endpoint"
        else:
            status = "failed"

    xv = polished if status == "converged" else x
    if np.all(np.isfinite(xv)):
        det_value = complex(np.linalg.det(np.asarray(sym_from_upper(list(xv[-10:])), dtype=complex)))
    else:
        det_value = complex("nan")
    return TrackedSolution(
        x=xv,
        path_index=path_index,
        residual=residual,
        condition_estimate=cond,
        status=status,
        det_value=det_value,
        is_real_estimate=is_projectively_real(xv, settings.real_tol),
        t_stalled=0.0 if status == "converged" else t,
    )


def _tightened(settings: TrackerSettings) -> TrackerSettings:
    return replace(
        settings,
        initial_step=min(settings.initial_step, 0.02),
        corrector_tol=max(settings.corrector_tol * 1e-3, 1e-13),
        min_step=max(settings.min_step * 1e-3, 1e-11),
        max_steps=5 * settings.max_steps,
        retrack_tightened=False,
    )


def _retrack_suspects(hom, target, starts, results, settings):
    """Re-track suspicious paths with tightened tolerances, in place.

    Suspects are the non-converged paths and every member of a cluster of
    paths sharing one endpoint: for a square system an endpoint reached by
    several paths is either a genuinely multiple (singular) point or the
    trace of a path that jumped; tight tracking separates the two.
    """
    tight = _tightened(settings)
    for i, r in enumerate(results):
        if r.status != "converged":
            redo = _track_one(hom, target, starts[r.path_index], tight, r.path_index)
            if redo.status == "converged":
                results[i] = redo
    for _ in range(2):
        conv = [(i, r) for i, r in enumerate(results) if r.converged]
        suspects = set()
        for a in range(len(conv)):
            ia, ra = conv[a]
            for b in range(a + 1, len(conv)):
                ib, rb = conv[b]
                scale = max(1.0, float(np.max(np.abs(ra.x))))
                if float(np.max(np.abs(ra.x - rb.x))) <= 100 * settings.dedup_tol * scale:
                    suspects.add(ia)
                    suspects.add(ib)
        if not suspects:
            break
        changed = False
        for i in sorted(suspects):
            r = results[i]
            redo = _track_one(hom, target, starts[r.path_index], tight, r.path_index)
            if redo.status == "converged":
                moved = float(np.max(np.abs(redo.x - r.x))) > 1e-6 * (
                    1.0 + float(np.max(np.abs(r.x)))
                )
                changed = changed or moved
                results[i] = redo
        if not changed:
            break


def _demote_multiple_endpoints(solutions, tol: float = 1e-5):
    """Converged endpoints shared by several paths are multiple points of the
    square system, hence singular; relabel every member of such a cluster.
    (Certification still sees them as candidates and keeps what is real.)"""
    conv = [s for s in solutions if s.converged]
    for i, a in enumerate(conv):
        for b in conv[i + 1 :]:
            scale = max(1.0, float(np.max(np.abs(a.x))))
            if float(np.max(np.abs(a.x - b.x))) <= tol * scale:
                a.status = "singular_endpoint"
                b.status = "singular_endpoint"
    return solutions


def _dedup(solutions, tol):
    kept = []
    out = []
    for s in solutions:
        if s.converged:
            dup = False
            for k in kept:
                scale = max(1.0, float(np.max(np.abs(k.x))))
                if float(np.max(np.abs(k.x - s.x))) <= tol * scale:
                    dup = True
                    break
            if dup:
                continue
            kept.append(s)
        out.append(s)
    return out


def track_path(s_start, s_target, x0, gamma, settings: TrackerSettings, path_index: int = 0):
    """Track one path of gamma*t*F_start + (1-t)*F_target from a start solution."""
    hom = PairHomotopy(s_start, s_target, gamma)
    return _track_one(hom, s_target, x0, settings, path_index)


def solve_total_degree(s: SlpSystem, settings: TrackerSettings | None = None):
    """Track all total-degree paths of the 10-variable system.

    Returns one TrackedSolution per path (converged endpoints deduplicated),
    sorted by path index.  Deterministic given settings.rng_seed.
    """
    if settings is None:
        settings = TrackerSettings()
    if s.has_det_variable:
        raise ValueError("track the 10-variable system; append D only for certification")
    rng = np.random.default_rng(settings.rng_seed)

    def one_solve():
        gamma = np.exp(2j * np.pi * rng.uniform())
        roots = np.exp(2j * np.pi * rng.uniform(size=s.n_equations))
        start = _StartSystem(s.degrees, roots)
        hom = PairHomotopy(start, s, gamma)
        starts = list(start.start_points())
        results = [_track_one(hom, s, x0, settings, idx) for idx, x0 in enumerate(starts)]
        if settings.retrack_tightened:
            _retrack_suspects(hom, s, starts, results, settings)
        return results

    results = one_solve()
    n_failed = sum(1 for r in results if r.status == "failed")
    if n_failed > settings.gamma_retry_threshold * len(results):
        retry = one_solve()
        if sum(1 for r in retry if r.status == "failed") < n_failed:
            results = retry
    results = _demote_multiple_endpoints(results)
    results = _dedup(results, settings.dedup_tol)
    results.sort(key=lambda r: r.path_index)
    return results


def parameter_homotopy(
    instance0: TangencyInstance,
    solutions0,
    instance1: TangencyInstance,
    settings: TrackerSettings | None = None,
    chart_seed: int = 0,
):
    """Carry converged solutions of instance0 over to instance1.

    Both instances must share a signature and the chart seed used for the
    original solve, so warm solutions stay on the chart throughout.
    """
    if settings is None:
        settings = TrackerSettings()
    rng = np.random.default_rng(settings.rng_seed)
    chart = assemble(instance0, chart_seed).chart_coefficients
    hom = ParameterHomotopy(instance0, instance1, chart, rng)
    target = hom.target_system(chart_seed)
    starts = [sol.x for sol in solutions0 if sol.converged]
    results = [_track_one(hom, target, x0, settings, idx) for idx, x0 in enumerate(starts)]
    if settings.retrack_tightened:
        _retrack_suspects(hom, target, starts, results, settings)
    results = _demote_multiple_endpoints(results)
    results = _dedup(results, settings.dedup_tol)
    results.sort(key=lambda r: r.path_index)
    return results
