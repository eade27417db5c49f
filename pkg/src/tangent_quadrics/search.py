"""Hill climbing over real instance space to maximize real tangent quadrics.

The move rule follows the greedy heuristic: re-solve Gaussian
perturbations of the current instance by parameter homotopy, move to a
neighbor with strictly more real solutions, otherwise to one with the
same count whose nonreal solutions are closest to becoming real.  That
distance ("nearness") is the phase-aligned imaginary norm, which is a
projective quantity, unlike raw imaginary parts in a fixed chart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import homotopy as _homotopy
from . import polysys as _polysys
from .fixtures import (
    coordinate_lines_instance,
    coordinate_planes_instance,
    twisted_cubic_lines_instance,
)
from .geometry import (
    PluckerLine,
    ProjPlane,
    ProjPoint,
    SymQuadric,
    plucker_from_span,
    span_from_plucker,
)
from .polysys import TangencyInstance

__all__ = ["SearchState", "hill_climb", "seed_instance", "perturb_instance"]


@dataclass
class SearchState:
    instance: TangencyInstance
    solutions: list
    real_count: int
    nearness: float
    iteration: int
    rng_seed: int
    certified_real: int | None = None
    history: list = field(default_factory=list)

    def log_line(self) -> dict:
        return {
            "iteration": self.iteration,
            "real_count": self.real_count,
            "nearness": self.nearness,
        }


def seed_instance(sig, strategy: str, seed: int = 0, perturbation: float = 1e-3) -> TangencyInstance:
    """Starting instances: random Gaussian figures or the sparse
    coordinate-figure configurations (six coordinate lines, four
    coordinate planes, twisted-cubic tangent lines)."""
    sig = tuple(sig)
    a, b, g, d = sig
    if strategy == "random":
        return _polysys.random_real_instance(sig, np.random.default_rng(seed))
    if strategy == "coordinate_lines":
        if b < 6 or d > 0:
            raise ValueError("coordinate_lines seeding needs beta >= 6 and delta = 0")
        inst = coordinate_lines_instance(
            n_points=min(a, 3), n_planes=min(g, 3 - min(a, 3)), perturbation=perturbation, seed=seed
        )
        return _pad_instance(inst, sig, seed)
    if strategy == "coordinate_planes":
        if g < 4 or d > 0:
            raise ValueError("coordinate_planes seeding needs gamma >= 4 and delta = 0")
        inst = coordinate_planes_instance(n_points=a, seed=seed)
        return _pad_instance(inst, sig, seed)
    if strategy == "twisted_cubic":
        if sig != (0, 9, 0, 0):
            raise ValueError("twisted_cubic seeding is for signature (0,9,0,0)")
        return twisted_cubic_lines_instance(perturbation=perturbation, seed=seed)
    raise ValueError(f"unknown strategy {strategy!r}")


def _pad_instance(inst: TangencyInstance, sig, seed: int) -> TangencyInstance:
    """Fill whatever figures the strategy did not provide with random ones."""
    rng = np.random.default_rng((seed, 0xFE11))
    from . import geometry as ge

    points = list(inst.points)
    lines = list(inst.lines)
    planes = list(inst.planes)
    quadrics = list(inst.quadrics)
    a, b, g, d = sig
    while len(points) < a:
        points.append(ge.random_point(rng))
    while len(lines) < b:
        lines.append(ge.random_line(rng))
    while len(planes) < g:
        planes.append(ge.random_plane(rng))
    while len(quadrics) < d:
        quadrics.append(ge.random_quadric(rng))
    return TangencyInstance(points=points[:a], lines=lines[:b], planes=planes[:g], quadrics=quadrics[:d])


def _perturb_figure(fig, scale: float, rng) -> object:
    if isinstance(fig, PluckerLine):
        # move a spanning pair of points, so the figure stays a line
        try:
            span = span_from_plucker([complex(v).real for v in fig.l])
        except ValueError:
            coords = np.asarray([complex(v).real for v in fig.l])
            return PluckerLine(
                (coords + scale * rng.standard_normal(6)).tolist(), warn_off_grassmannian=False
            )
        span = span + scale * rng.standard_normal(span.shape)
        return plucker_from_span(span.tolist())
    coords = np.asarray([complex(v).real for v in fig.coords])
    new = coords + scale * rng.standard_normal(len(coords))
    if isinstance(fig, ProjPoint):
        return ProjPoint(new.tolist())
    if isinstance(fig, ProjPlane):
        return ProjPlane(new.tolist())
    if isinstance(fig, SymQuadric):
        return SymQuadric(new.tolist())
    raise TypeError(type(fig))


def perturb_instance(inst: TangencyInstance, scale: float, rng) -> TangencyInstance:
    return TangencyInstance(
        points=[_perturb_figure(f, scale, rng) for f in inst.points],
        lines=[_perturb_figure(f, scale, rng) for f in inst.lines],
        planes=[_perturb_figure(f, scale, rng) for f in inst.planes],
        quadrics=[_perturb_figure(f, scale, rng) for f in inst.quadrics],
    )


def _metrics(solutions, settings):
    """(real count, nearness) over nondegenerate converged solutions."""
    hits = [
        s
        for s in solutions
        if s.converged and abs(s.det_value) > settings.det_tol
    ]
    real = [s for s in hits if _homotopy.is_projectively_real(s.x, settings.real_tol)]
    nonreal = [s for s in hits if s not in real]
    nearness = min(
        (_homotopy.phase_aligned_imag_norm(s.x) for s in nonreal), default=0.0
    )
    return len(real), nearness, hits


def hill_climb(
    sig,
    seed_inst: TangencyInstance,
    iters: int = 100,
    neighborhood_scale: float = 0.05,
    settings: _homotopy.TrackerSettings | None = None,
    k_neighbors: int = 32,
    stagnation_limit: int = 50,
    anneal_after: int = 10,
    target_real: int | None = None,
    chart_seed: int = 0,
    checkpoint_dir=None,
    verify: bool = True,
) -> SearchState:
    """Greedy search for instances with many real solutions.

    Deterministic in settings.rng_seed.  Stops at ``iters``, at
    ``target_real`` (full reality for the signature, when known), or
    after ``stagnation_limit`` non-improving rounds; the neighborhood
    scale is halved after every ``anneal_after`` stagnant rounds (floor
    1e-6), and a fresh random restart is taken when stagnation persists.
    Ill-conditioned neighbors (path failures above 10%, or solutions
    closer than 1e-7) are discarded.  The returned state's real count is
    re-verified by a from-scratch solve plus certification when
    ``verify`` is set.
    """
    sig = tuple(sig)
    if seed_inst.signature != sig:
        raise ValueError("seed instance signature mismatch")
    if settings is None:
        settings = _homotopy.TrackerSettings()
    rng = np.random.default_rng((settings.rng_seed, 0x5EA2C4))

    ckpt = Path(checkpoint_dir) if checkpoint_dir else None
    if ckpt:
        ckpt.mkdir(parents=True, exist_ok=True)
        log_file = (ckpt / "run_log.jsonl").open("a")

    def solve_fresh(inst):
        s10 = _polysys.assemble(inst, chart_seed=chart_seed)
        return _homotopy.solve_total_degree(s10, settings)

    current = seed_inst
    solutions = solve_fresh(current)
    real_count, nearness, hits = _metrics(solutions, settings)
    best = SearchState(
        instance=current,
        solutions=solutions,
        real_count=real_count,
        nearness=nearness,
        iteration=0,
        rng_seed=settings.rng_seed,
    )
    best.history.append(best.log_line())
    scale = neighborhood_scale
    stagnant = 0

    for it in range(1, iters + 1):
        if target_real is not None and best.real_count >= target_real:
            break
        if stagnant >= stagnation_limit:
            # restart from a fresh random instance, keeping the best state
            current = _polysys.random_real_instance(sig, rng)
            solutions = solve_fresh(current)
            real_count, nearness, hits = _metrics(solutions, settings)
            scale = neighborhood_scale
            stagnant = 0
        candidates = []
        for _ in range(k_neighbors):
            neighbor = perturb_instance(current, scale, rng)
            moved = _homotopy.parameter_homotopy(
                current, solutions, neighbor, settings, chart_seed=chart_seed
            )
            n_paths = max(1, len(moved))
            n_failed = sum(1 for s in moved if s.status == "failed")
            if n_failed > 0.1 * n_paths:
                continue
            r, near, nhits = _metrics(moved, settings)
            if len(nhits) >= 2:
                sep = min(
                    float(np.max(np.abs(a.x - b.x)))
                    for i, a in enumerate(nhits)
                    for b in nhits[i + 1 :]
                )
                if sep < 1e-7:
                    continue
            candidates.append((r, near, neighbor, moved))
        if not candidates:
            stagnant += 1
            continue
        candidates.sort(key=lambda c: (-c[0], c[1]))
        r, near, neighbor, moved = candidates[0]
        improved = r > real_count or (r == real_count and near < nearness)
        if improved:
            current, solutions = neighbor, moved
            real_count, nearness = r, near
            stagnant = 0
            if r > best.real_count or (r == best.real_count and near < best.nearness):
                best = SearchState(
                    instance=current,
                    solutions=solutions,
                    real_count=real_count,
                    nearness=nearness,
                    iteration=it,
                    rng_seed=settings.rng_seed,
                    history=best.history,
                )
            if ckpt:
                (ckpt / "best_instance.json").write_text(json.dumps(current.to_json(), indent=1))
                log_file.write(json.dumps({"iteration": it, "real_count": r, "nearness": near}) + "\n")
                log_file.flush()
        else:
            stagnant += 1
            if stagnant % anneal_after == 0:
                scale = max(scale * 0.5, 1e-6)
        best.history.append({"iteration": it, "real_count": real_count, "nearness": nearness})

    if verify:
        from .schubert import solve_and_certify

        _, _, summary = solve_and_certify(best.instance, settings, chart_seed=chart_seed)
        best.certified_real = summary.real
    if ckpt:
        log_file.close()
    return best
