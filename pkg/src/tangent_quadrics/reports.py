"""Run reports: solver/certification text blocks, machine-readable JSON,
and the triangle/pyramid report path (CSV tables plus rendered figures)."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .homotopy import TrackedSolution, phase_aligned_imag_norm
from .schubert import (
    CountTable,
    Signature,
    aggregate_term,
    flag_power_aggregate,
    pyramid_entry,
    q9_aggregate,
    triangle_signatures,
)

__all__ = [
    "RunReport",
    "solver_block",
    "certification_block",
    "instance_digest",
    "write_triangle_report",
    "write_pyramid_report",
]

_PROVENANCE_COLORS = {
    "paper": "#1f77b4",
    "bezout": "#7f7f7f",
    "census": "#d62728",
    "recurrence": "#2ca02c",
    None: "#000000",
}


def instance_digest(instance) -> str:
    blob = json.dumps(instance.to_json(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def solver_block(solutions, real_tol: float = 1e-6) -> str:
    """Text block mirroring the solver summary layout."""
    tracked = len(solutions)
    nonsing = [s for s in solutions if s.converged]
    sing = [s for s in solutions if s.status == "singular_endpoint"]
    nreal = sum(1 for s in nonsing if phase_aligned_imag_norm(s.x) <= real_tol)
    sreal = sum(1 for s in sing if phase_aligned_imag_norm(s.x) <= real_tol)
    total = len(nonsing) + len(sing)
    lines = [
        f"# paths tracked:                  {tracked}",
        f"# non-singular solutions (real):  {len(nonsing)} ({nreal})",
        f"# singular endpoints (real):      {len(sing)} ({sreal})",
        f"# total solutions (real):         {total} ({nreal + sreal})",
    ]
    return "\n".join(lines)


def certification_block(summary) -> str:
    lines = [
        "CertificationResult",
        "===================",
        f"• {summary.given} solutions given",
        f"• {summary.certified} certified solutions ({summary.real} real)",
        f"• {summary.distinct} distinct certified solutions ({summary.real} real)",
    ]
    if summary.nondegenerate != summary.certified:
        lines.append(f"• {summary.nondegenerate} nondegenerate certified solutions")
    if summary.real_unknown:
        lines.append(f"• {summary.real_unknown} with undecided reality")
    return "\n".join(lines)


@dataclass
class RunReport:
    command: str
    instance_digest: str = ""
    path_counts: dict = field(default_factory=dict)
    certified: int = 0
    distinct: int = 0
    real: int = 0
    nondegenerate: int = 0
    wall_time: float = 0.0
    settings: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.distinct > self.certified or self.real < 0:
            raise ValueError("inconsistent counts")

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "instance_digest": self.instance_digest,
            "path_counts": self.path_counts,
            "certified": self.certified,
            "distinct": self.distinct,
            "real": self.real,
            "nondegenerate": self.nondegenerate,
            "wall_time": self.wall_time,
            "settings": self.settings,
            "seeds": self.seeds,
            **self.extra,
        }

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))


# ---------------------------------------------------------------------------
# Triangle / pyramid reports: delimited tables plus rendered figures
# ---------------------------------------------------------------------------


def _triangle_positions():
    """(x, y) layout: row alpha descending, gamma increasing to the right."""
    pos = {}
    for sig in triangle_signatures():
        a, b, g, _ = sig.tuple
        row = 9 - a
        pos[sig.tuple] = (g - row / 2.0, -row)
    return pos


def write_triangle_csv(table: CountTable, path):
    lines = ["alpha,beta,gamma,delta,count,provenance"]
    for sig in triangle_signatures():
        c = table.get(sig)
        p = table.provenance(sig)
        lines.append(
            f"{sig.alpha},{sig.beta},{sig.gamma},{sig.delta},"
            f"{'' if c is None else c},{p or ''}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def _draw_triangle(ax, table: CountTable, delta: int = 0, annotate_corner=True):
    pos = _triangle_positions()
    for sig in triangle_signatures():
        a, b, g, _ = sig.tuple
        key = (a, b, g, delta)
        c = table.get(key)
        prov = table.provenance(key)
        x, y = pos[sig.tuple]
        ax.text(
            x,
            y,
            "?" if c is None else str(c),
            ha="center",
            va="center",
            fontsize=7,
            color=_PROVENANCE_COLORS.get(prov, "#000000"),
        )
    if annotate_corner:
        ax.text(-5.2, 0.6, "points", fontsize=8, style="italic")
        ax.text(-6.2, -9.6, "lines", fontsize=8, style="italic")
        ax.text(4.8, -9.6, "planes", fontsize=8, style="italic")
    ax.set_xlim(-7, 7)
    ax.set_ylim(-10.5, 1.5)
    ax.axis("off")


def write_triangle_report(table: CountTable, out_dir, basename: str = "triangle"):
    """CSV plus a rendered triangle figure; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{basename}.csv"
    write_triangle_csv(table, csv_path)
    fig, ax = plt.subplots(figsize=(7, 6))
    _draw_triangle(ax, table)
    handles = [
        plt.Line2D([], [], marker="s", linestyle="", color=c, label=p)
        for p, c in _PROVENANCE_COLORS.items()
        if p
    ]
    ax.legend(handles=handles, loc="upper right", fontsize=7, frameon=False)
    ax.set_title("Tangency counts for quadric surfaces (delta = 0)")
    png_path = out / f"{basename}.png"
    fig.savefig(png_path, dpi=180, bbox_inches="tight")
    plt.close(fig)
    return csv_path, png_path


def write_pyramid_csv(table: CountTable, path, max_delta: int = 9):
    lines = ["alpha,beta,gamma,delta,count,provenance"]
    for d in range(max_delta + 1):
        for a in range(9 - d, -1, -1):
            for b in range(9 - d - a, -1, -1):
                g = 9 - d - a - b
                key = (a, b, g, d)
                c = table.get(key)
                p = table.provenance(key)
                lines.append(f"{a},{b},{g},{d},{'' if c is None else c},{p or ''}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_pyramid_report(table: CountTable, out_dir, levels: int = 3, basename: str = "pyramid"):
    """Fill levels by the recurrence, then write CSV and a level diagram."""
    complete = not table.missing_triangle()
    max_d = levels if not complete else 9
    if complete:
        for d in range(1, levels + 1):
            for a in range(9 - d, -1, -1):
                for b in range(9 - d - a, -1, -1):
                    pyramid_entry(table, (a, b, 9 - d - a - b, d))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{basename}.csv"
    write_pyramid_csv(table, csv_path, max_delta=levels)
    fig, axes = plt.subplots(1, levels + 1, figsize=(6 * (levels + 1), 6))
    if levels == 0:
        axes = [axes]
    for d, ax in enumerate(axes):
        pos = {}
        for a in range(9 - d, -1, -1):
            for b in range(9 - d - a, -1, -1):
                g = 9 - d - a - b
                row = 9 - d - a
                x, y = g - row / 2.0, -row
                c = table.get((a, b, g, d))
                prov = table.provenance((a, b, g, d))
                ax.text(
                    x, y, "?" if c is None else str(c),
                    ha="center", va="center", fontsize=7,
                    color=_PROVENANCE_COLORS.get(prov, "#000000"),
                )
        ax.set_title(f"level delta = {d}", fontsize=10)
        ax.set_xlim(-7, 7)
        ax.set_ylim(-10.5, 1.5)
        ax.axis("off")
    png_path = out / f"{basename}.png"
    fig.savefig(png_path, dpi=160, bbox_inches="tight")
    plt.close(fig)
    return csv_path, png_path


def triangle_text_report(table: CountTable) -> str:
    lines = []
    missing = table.missing_triangle()
    lines.append(f"triangle entries known: {55 - len(missing)} / 55")
    dual = table.duality_violations()
    bez = table.bezout_violations()
    lines.append(f"duality violations: {len(dual)}")
    lines.append(f"Bezout-region violations: {len(bez)}")
    if not missing:
        fp = flag_power_aggregate(table)
        lines.append(f"flag-power aggregate (p+l+h)^9 = {fp}")
        lines.append(f"nine-quadrics aggregate q^9 = {q9_aggregate(table)}")
    else:
        lines.append("missing: " + ", ".join(str(s) for s in missing))
        for sig in ((3, 3, 3, 0), (2, 5, 2, 0)):
            if table.get(sig) is not None:
                lines.append(
                    f"partial aggregation term at {Signature.of(sig)}: {aggregate_term(table, sig)}"
                )
    return "\n".join(lines)
