"""A-posteriori certification with the Krawczyk operator.

Given an approximate solution of the 11-variable system (determinant
variable first), a box B around it is certified when

    K(B) = y - Y F(y) + (I - Y J_F(B)) (B - y),   y = mid(B),

lands in the interior of B; the box then provably contains a unique
solution.  Disjointness of certified boxes proves distinctness; a box
whose conjugate meets no other box, re-certified on the hull of the box
and its conjugate, proves reality (the system has real coefficients, so
solutions come in conjugate pairs); an interval for D excluding zero
proves the quadric is nondegenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .intervals import ComplexInterval, ComplexRational
from .polysys import SlpSystem

__all__ = [
    "CertificateBox",
    "krawczyk_certify",
    "verdicts",
    "nondegeneracy_check",
    "VerdictSummary",
]

_INFLATION_SCHEDULE = (1.0, 4.0, 16.0, 0.5, 64.0, 0.25, 256.0, 0.125)


@dataclass
class CertificateBox:
    """Per-solution certificate: 11 complex intervals (D first) plus verdicts."""

    intervals: list
    certified: bool
    solution_approx: np.ndarray
    real: bool | None = None
    distinct: bool | None = None
    nondegenerate: bool | None = None

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "real": self.real,
            "distinct": self.distinct,
            "nondegenerate": self.nondegenerate,
            "intervals": [iv.to_json() for iv in self.intervals],
            "solution": [[v.real, v.imag] for v in self.solution_approx],
        }


@dataclass
class VerdictSummary:
    given: int
    certified: int
    distinct: int
    real: int
    nondegenerate: int
    real_unknown: int = 0
    distinct_nondegenerate: int = 0

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _interval_F(s11: SlpSystem, point) -> list:
    """Rigorous enclosure of F at an exact floating point.

    Floats are dyadic rationals, so the residual is computed exactly and
    rounded into a one-ulp interval; without this the cancellation floor
    of double-precision evaluation dominates the Krawczyk image.
    """
    xs = [ComplexRational.from_complex(v) for v in point]
    return [v.enclosure() for v in s11.evaluate_exact(xs)]


def _exact_residual(s11: SlpSystem, x) -> np.ndarray:
    xs = [ComplexRational.from_complex(v) for v in x]
    return np.array([complex(v) for v in s11.evaluate_exact(xs)])


def _interval_J(s11: SlpSystem, box) -> list:
    return s11.jacobian_exact(box)


def _krawczyk_image(s11: SlpSystem, box, y, Y):
    n = s11.n
    fy = _interval_F(s11, y)
    jb = _interval_J(s11, box)
    # rows of I - Y * J_F(B)
    out = []
    for i in range(n):
        yi = Y[i]
        # (Y F(y))_i
        acc = ComplexInterval()
        for k in range(n):
            acc = acc + ComplexInterval.from_number(yi[k]) * fy[k]
        ki = ComplexInterval.from_number(y[i]) - acc
        for j in range(n):
            # (I - Y J)_ij
            m = ComplexInterval()
            for k in range(n):
                m = m + ComplexInterval.from_number(yi[k]) * jb[k][j]
            m = -m
            if i == j:
                m = m + 1
            bj = box[j]
            diff = ComplexInterval(bj.re_mid - y[j].real, bj.re_rad, bj.im_mid - y[j].imag, bj.im_rad)
            ki = ki + m * diff
        out.append(ki)
    return out


def _contained(image, box) -> bool:
    return all(k.contained_in_interior(b) for k, b in zip(image, box))


def krawczyk_certify(
    s11: SlpSystem,
    x,
    inflation: float | None = None,
    max_attempts: int = 8,
) -> CertificateBox:
    """Certify an approximate solution of the 11-variable system.

    The box radius starts at 100x the Newton error estimate (floor 1e-12,
    or ``inflation`` if given) and is adapted x2 up / x0.5 down for up to
    ``max_attempts`` tries.  Failure returns certified=False, never raises.
    """
    if not s11.has_det_variable:
        raise ValueError("certification expects the system with the determinant variable")
    x = np.asarray(x, dtype=complex)
    if x.shape != (s11.n,):
        raise ValueError(f"expected a {s11.n}-vector (D first)")

    # plain Newton to the float limit, then iterative refinement with exact
    # rational residuals; the latter converges at rate u*cond, reaching
    # coordinate errors of a few ulps even for badly conditioned solutions
    for _ in range(6):
        f = s11.evaluate(x)
        try:
            delta = np.linalg.solve(s11.jacobian(x), -f)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        x = x + delta
        if float(np.max(np.abs(delta))) < 1e-13 * (1.0 + float(np.max(np.abs(x)))):
            break
    err = np.full(s11.n, np.inf)
    for _ in range(5):
        try:
            delta = np.linalg.solve(s11.jacobian(x), -_exact_residual(s11, x))
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        x = x + delta
        err = np.abs(delta)
        if float(np.max(err)) < 4e-16 * (1.0 + float(np.max(np.abs(x)))):
            break

    scale = 1.0 + float(np.max(np.abs(x)))
    if inflation is None and not float(np.max(err)) < 1e-8 * scale:
        # refinement did not converge (singular or junk point); the operator
        # cannot contract, so skip the attempts
        return CertificateBox(
            intervals=[ComplexInterval(v.real, 1e-8, v.imag, 1e-8) for v in x],
            certified=False,
            solution_approx=x,
        )

    try:
        Y = np.linalg.inv(s11.jacobian(x))
    except np.linalg.LinAlgError:
        r0 = float(inflation) if inflation is not None else 1e-10
        return CertificateBox(
            intervals=[ComplexInterval(v.real, r0, v.imag, r0) for v in x],
            certified=False,
            solution_approx=x,
        )

    if inflation is None:
        floor = 8e-16 * (1.0 + np.abs(x))
        base = np.maximum(np.minimum(32.0 * err, 1e-8), floor)
    else:
        base = np.full(s11.n, float(inflation))

    last_box = None
    for scale in _INFLATION_SCHEDULE[:max_attempts]:
        radii = base * scale
        box = [ComplexInterval(v.real, r, v.imag, r) for v, r in zip(x, radii)]
        last_box = box
        image = _krawczyk_image(s11, box, x, Y)
        if _contained(image, box):
            return CertificateBox(intervals=image, certified=True, solution_approx=x)
    return CertificateBox(intervals=last_box, certified=False, solution_approx=x)


def nondegeneracy_check(box: CertificateBox) -> bool:
    """True iff the certified interval for D provably excludes zero."""
    return bool(box.certified and box.intervals[0].excludes_zero())


def _certify_hull(s11: SlpSystem, box: CertificateBox) -> bool:
    """Krawczyk test on a widened hull of the box and its conjugate.

    Success proves the unique solution in the widened hull equals its own
    conjugate, i.e. is real (the system has real coefficients, so the
    conjugate of the boxed solution is also a solution and also lies in
    the hull).  Widening gives the operator interior room to contract
    into; the argument only needs the hull to contain box and conjugate.
    """
    hull = []
    for iv in box.intervals:
        hb = iv.hull(iv.conj())
        hull.append(hb.widened(8.0 * max(hb.max_rad, 1e-300)))
    y = np.array([iv.mid for iv in hull])
    # re-center on the real representative
    y = y.real.astype(complex)
    try:
        Y = np.linalg.inv(s11.jacobian(y))
    except np.linalg.LinAlgError:
        return False
    image = _krawczyk_image(s11, hull, y, Y)
    return _contained(image, hull)


def verdicts(boxes, s11: SlpSystem | None = None) -> VerdictSummary:
    """Distinctness, reality and nondegeneracy verdicts over a set of boxes.

    Reality follows the conjugate-box criterion (the only box intersecting
    conj(B) is B itself), strengthened by re-running Krawczyk on the hull
    of B and conj(B); if the criterion holds but the hull test fails the
    flag stays None ("unknown") rather than becoming a false verdict.
    Requires the system for the hull test; without it reality is left
    unknown for all candidates.
    """
    certified = [b for b in boxes if b.certified]

    # distinctness: greedy pairwise disjointness
    kept = []
    for b in certified:
        dup = any(
            not all(x.disjoint_from(y) for x, y in zip(b.intervals, k.intervals))
            for k in kept
        )
        b.distinct = not dup
        if not dup:
            kept.append(b)

    for b in certified:
        b.nondegenerate = nondegeneracy_check(b)

    n_real = 0
    n_unknown = 0
    for b in certified:
        conj = [iv.conj() for iv in b.intervals]
        meets_self = not any(c.disjoint_from(iv) for c, iv in zip(conj, b.intervals))
        if not meets_self:
            b.real = False
            continue
        meets_other = False
        for o in certified:
            if o is b:
                continue
            if not any(c.disjoint_from(iv) for c, iv in zip(conj, o.intervals)):
                meets_other = True
                break
        if meets_other:
            b.real = False
            continue
        if s11 is not None and _certify_hull(s11, b):
            b.real = True
            if b.distinct:
                n_real += 1
        else:
            b.real = None
            if b.distinct:
                n_unknown += 1

    return VerdictSummary(
        given=len(boxes),
        certified=len(certified),
        distinct=len(kept),
        real=n_real,
        nondegenerate=sum(1 for b in certified if b.nondegenerate),
        real_unknown=n_unknown,
        distinct_nondegenerate=sum(1 for b in kept if b.nondegenerate),
    )
