"""The combinatorial layer: Bezout counts, the tangency-count triangle for
(points, lines, planes), its extension by tangent quadrics (the pyramid
recurrence count(a,b,g,d) = 2*(count over the three children at d-1)),
aggregation to the nine-quadrics number, and flag-selector systems.

Counts carry provenance: quoted values, the Bezout-region formula
2^beta 3^gamma (valid for alpha >= 4, gamma <= 2), numerical census, or
the recurrence.  A census solves several random real instances and
requires the certified distinct nondegenerate counts to agree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import certify as _certify
from . import homotopy as _homotopy
from . import polysys as _polysys
from .geometry import Flag

__all__ = [
    "Signature",
    "CountTable",
    "bezout_count",
    "pyramid_entry",
    "q9_aggregate",
    "flag_power_aggregate",
    "census",
    "flag_systems",
    "all_psi_selectors",
    "UnknownDependencyError",
    "InconsistentCensusError",
    "solve_and_certify",
    "default_table",
]

Q9_FACTOR = 512  # 2^9: each flag tangency condition splits in two


class UnknownDependencyError(KeyError):
    """A pyramid entry depends on a signature that is not in the table."""


class InconsistentCensusError(RuntimeError):
    """Census trials disagreed, or too many paths failed."""


@dataclass(frozen=True)
class Signature:
    alpha: int
    beta: int
    gamma: int
    delta: int = 0

    def __post_init__(self):
        vals = (self.alpha, self.beta, self.gamma, self.delta)
        if any(v < 0 for v in vals) or sum(vals) != 9:
            raise ValueError(f"signature must be nonnegative and sum to 9, got {vals}")

    @classmethod
    def of(cls, sig) -> "Signature":
        if isinstance(sig, Signature):
            return sig
        if isinstance(sig, str):
            parts = [int(v) for v in sig.replace(" ", "").split(",")]
        else:
            parts = list(sig)
        if len(parts) == 3:
            parts.append(0)
        return cls(*parts)

    @property
    def tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta)

    @property
    def dual(self) -> "Signature":
        return Signature(self.gamma, self.beta, self.alpha, self.delta)

    @property
    def total_degree(self) -> int:
        return 2**self.beta * 3**self.gamma * 12**self.delta

    def __str__(self):
        return ",".join(str(v) for v in self.tuple)


def bezout_count(sig) -> int | None:
    """2^beta 3^gamma when alpha >= 4, gamma <= 2 and delta = 0; else None."""
    sig = Signature.of(sig)
    if sig.delta != 0:
        return None
    if sig.alpha >= 4 and sig.gamma <= 2:
        return 2**sig.beta * 3**sig.gamma
    return None


def triangle_signatures():
    """All 55 signatures with delta = 0."""
    for a in range(9, -1, -1):
        for b in range(9 - a, -1, -1):
            yield Signature(a, b, 9 - a - b, 0)


class CountTable:
    """Counts indexed by signature, with provenance per entry."""

    PROVENANCES = ("paper", "bezout", "census", "recurrence")

    def __init__(self):
        self.entries: dict[tuple, dict] = {}

    def get(self, sig):
        sig = Signature.of(sig)
        e = self.entries.get(sig.tuple)
        return None if e is None else e["count"]

    def provenance(self, sig):
        e = self.entries.get(Signature.of(sig).tuple)
        return None if e is None else e["provenance"]

    def set(self, sig, count: int, provenance: str):
        if provenance not in self.PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        sig = Signature.of(sig)
        self.entries[sig.tuple] = {"count": int(count), "provenance": provenance}

    def fill_bezout(self):
        for sig in triangle_signatures():
            b = bezout_count(sig)
            if b is not None and sig.tuple not in self.entries:
                self.set(sig, b, "bezout")

    def missing_triangle(self):
        return [s for s in triangle_signatures() if s.tuple not in self.entries]

    def to_json(self) -> dict:
        return {
            ",".join(str(v) for v in k): dict(v) for k, v in sorted(self.entries.items())
        }

    @classmethod
    def from_json(cls, obj) -> "CountTable":
        t = cls()
        for k, v in obj.items():
            t.set(Signature.of(k), v["count"], v["provenance"])
        return t

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path) -> "CountTable":
        return cls.from_json(json.loads(Path(path).read_text()))

    # consistency checks used by the report path
    def duality_violations(self):
        out = []
        for sig in triangle_signatures():
            a, b = self.get(sig), self.get(sig.dual)
            if a is not None and b is not None and a != b:
                out.append((sig, a, b))
        return out

    def bezout_violations(self):
        out = []
        for sig in triangle_signatures():
            c = self.get(sig)
            if c is not None and c > sig.total_degree:
                out.append((sig, c, sig.total_degree))
            b = bezout_count(sig)
            if b is not None and c is not None and c != b:
                out.append((sig, c, b))
        return out


def default_table() -> CountTable:
    """The count table shipped with the package (all 55 base entries)."""
    from importlib import resources

    with resources.files("tangent_quadrics.data").joinpath("triangle.json").open() as f:
        return CountTable.from_json(json.load(f))


def pyramid_entry(table: CountTable, sig) -> int:
    """Entry of the pyramid; level d is twice the sum of its three children
    at level d-1.  Computed entries are memoized with provenance
    'recurrence'; missing base entries raise UnknownDependencyError."""
    sig = Signature.of(sig)
    known = table.get(sig)
    if known is not None:
        return known
    if sig.delta == 0:
        raise UnknownDependencyError(str(sig))
    a, b, g, d = sig.tuple
    total = 0
    for child in ((a + 1, b, g, d - 1), (a, b + 1, g, d - 1), (a, b, g + 1, d - 1)):
        total += pyramid_entry(table, child)
    total *= 2
    table.set(sig, total, "recurrence")
    return total


def _trinomial(a, b, g) -> int:
    return math.factorial(9) // (math.factorial(a) * math.factorial(b) * math.factorial(g))


def flag_power_aggregate(table: CountTable) -> int:
    """sum over the triangle of trinomial(9; a,b,g) * count(a,b,g)."""
    missing = table.missing_triangle()
    if missing:
        raise UnknownDependencyError(", ".join(str(s) for s in missing))
    return sum(
        _trinomial(*s.tuple[:3]) * table.get(s) for s in triangle_signatures()
    )


def q9_aggregate(table: CountTable) -> int:
    """2^9 times the flag-power aggregate: the nine-quadrics count."""
    return Q9_FACTOR * flag_power_aggregate(table)


def aggregate_term(table: CountTable, sig) -> int:
    """One summand trinomial * count of the aggregation, for partial checks."""
    sig = Signature.of(sig)
    c = table.get(sig)
    if c is None:
        raise UnknownDependencyError(str(sig))
    return _trinomial(*sig.tuple[:3]) * c


# ---------------------------------------------------------------------------
# Census: numerical determination of a count
# ---------------------------------------------------------------------------


def solve_and_certify(
    instance,
    settings=None,
    chart_seed: int = 0,
    cert_chart_seed: int | None = None,
    include_singular: bool = True,
    extra_solves: int = 0,
):
    """Solve an instance and certify its endpoints.

    Returns (solutions, boxes, summary) where ``solutions`` is the primary
    solve.  Certification runs on a real chart (so the conjugation-based
    reality test is sound); endpoints from the singular bucket are offered
    to the certifier as well when ``include_singular`` - candidates can
    only add true solutions, and duplicates are removed by the
    distinctness check.  ``extra_solves`` pools endpoints from additional
    independent (chart, gamma) solves into the same certification, which
    makes counts robust against per-gamma path losses.
    """
    if settings is None:
        settings = _homotopy.TrackerSettings()
    runs = []
    for k in range(1 + max(0, extra_solves)):
        cs = chart_seed + 7919 * k
        st = settings if k == 0 else _homotopy.TrackerSettings(
            **{**settings.to_json(), "rng_seed": settings.rng_seed + 104729 * k}
        )
        s10 = _polysys.assemble(instance, chart_seed=cs)
        runs.append((s10, _homotopy.solve_total_degree(s10, st)))
    sols = runs[0][1]
    if cert_chart_seed is None:
        cert_chart_seed = chart_seed + 1
    s10r = _polysys.assemble(instance, chart_seed=cert_chart_seed, real_chart=True)
    s11 = _polysys.with_det_variable(s10r)
    candidates = []
    for _, run_sols in runs:
        candidates += [s for s in run_sols if s.converged]
        if include_singular:
            candidates += [
                s
                for s in run_sols
                if s.status == "singular_endpoint" and np.all(np.isfinite(s.x))
            ]
    boxes = []
    for sol in candidates:
        try:
            x10 = _polysys.transport_to_chart(sol.x, s10r.chart_coefficients)
        except ZeroDivisionError:
            continue
        boxes.append(_certify.krawczyk_certify(s11, _polysys.extend_solution(x10)))
    summary = _certify.verdicts(boxes, s11)
    return sols, boxes, summary


def census(
    sig,
    trials: int = 3,
    settings=None,
    table: CountTable | None = None,
    base_seed: int = 0,
    path_budget: int = 50_000,
    max_failure_rate: float = 0.05,
    solves_per_trial: int = 2,
) -> int:
    """Count solutions by solving ``trials`` random real instances.

    Returns the certified distinct nondegenerate count; all trials must
    agree exactly, otherwise InconsistentCensusError.  Each trial uses an
    independent instance, chart and homotopy seed, all derived
    deterministically from ``base_seed``, and pools ``solves_per_trial``
    independent-gamma solves of its instance before certification.
    """
    sig = Signature.of(sig)
    if sig.total_degree * max(1, solves_per_trial) > path_budget:
        raise InconsistentCensusError(
            f"signature {sig} needs {sig.total_degree * solves_per_trial} paths, "
            f"over the budget {path_budget}"
        )
    if settings is None:
        settings = _homotopy.TrackerSettings()
    counts = []
    for trial in range(trials):
        ss = np.random.SeedSequence((base_seed, *sig.tuple, trial))
        inst_seed, rng_seed, chart_seed = [int(v) for v in ss.generate_state(3) >> 1]
        instance = _polysys.random_real_instance(sig.tuple, np.random.default_rng(inst_seed))
        trial_settings = _homotopy.TrackerSettings(
            **{**settings.to_json(), "rng_seed": rng_seed}
        )
        sols, boxes, summary = solve_and_certify(
            instance,
            trial_settings,
            chart_seed=chart_seed,
            extra_solves=max(0, solves_per_trial - 1),
        )
        n_failed = sum(1 for s in sols if s.status == "failed")
        if n_failed > max_failure_rate * max(1, len(sols)):
            raise InconsistentCensusError(
                f"{sig} trial {trial}: {n_failed} failed paths of {len(sols)}"
            )
        counts.append(summary.distinct_nondegenerate)
    if len(set(counts)) != 1:
        raise InconsistentCensusError(f"{sig}: census trials disagree: {counts}")
    if table is not None:
        table.set(sig, counts[0], "census")
    return counts[0]


# ---------------------------------------------------------------------------
# Flag-selector systems
# ---------------------------------------------------------------------------


def flag_systems(flags, psi) -> "_polysys.TangencyInstance":
    """Instance selecting from flag i its point, line or plane per psi.

    ``psi`` maps {1..9} (or indices 0..8) to 'P' | 'L' | 'H'; a sequence of
    nine letters is accepted too.  Iterating over all 3^9 selectors gives
    the family of systems whose solution counts sum to the flag-power
    aggregate.
    """
    flags = list(flags)
    if len(flags) != 9 or not all(isinstance(f, Flag) for f in flags):
        raise ValueError("need nine flags")
    if isinstance(psi, dict):
        selectors = [psi.get(i + 1, psi.get(i)) for i in range(9)]
    else:
        selectors = list(psi)
    if len(selectors) != 9 or any(s not in ("P", "L", "H") for s in selectors):
        raise ValueError("selector must assign P, L or H to each of the nine flags")
    points, lines, planes = [], [], []
    for f, sel in zip(flags, selectors):
        if sel == "P":
            points.append(f.P)
        elif sel == "L":
            lines.append(f.L)
        else:
            planes.append(f.H)
    return _polysys.TangencyInstance(points=points, lines=lines, planes=planes)


def all_psi_selectors():
    """All 3^9 selector strings."""
    import itertools

    for combo in itertools.product("PLH", repeat=9):
        yield "".join(combo)


def expected_flag_power(table: CountTable) -> int:
    """Sum of expected counts over all 3^9 selectors via the triangle."""
    total = 0
    for a in range(10):
        for b in range(10 - a):
            g = 9 - a - b
            total += _trinomial(a, b, g) * table.get(Signature(a, b, g, 0))
    return total
