"""Figure rendering for the command-line report paths.

The rest of the package is exact; this module is the one place rationals
are collapsed to floats, right before drawing. Files are written through
the Agg backend so no display is needed.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .iet import Iet
from .rauzy import RauzyClass
from .whirly import ClaimsReport, ProbeReport, TowerStack


def save_iet_map(t: Iet, path: str) -> None:
    """Graph of the exchange: each piece is one translated segment."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for lo, hi, shift in t.translation_pieces():
        xs = [float(lo), float(hi)]
        ys = [float(lo + shift), float(hi + shift)]
        ax.plot(xs, ys, linewidth=2)
    top = float(t.total)
    ax.plot([0, top], [0, top], linestyle=":", color="gray", linewidth=0.8)
    ax.set_xlim(0, top)
    ax.set_ylim(0, top)
    ax.set_xlabel("x")
    ax.set_ylabel("T(x)")
    ax.set_title(f"exchange of {t.size} intervals")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_orbit(points, path: str) -> None:
    """Orbit positions against iteration count."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(range(len(points)), [float(p) for p in points], marker=".", linewidth=0.6)
    ax.set_xlabel("step")
    ax.set_ylabel("position")
    ax.set_title("orbit")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_rauzy_diagram(rc: RauzyClass, path: str) -> None:
    """Induction move graph with one node per permutation."""
    import math

    n = len(rc.perms)
    angles = [2 * math.pi * i / n for i in range(n)]
    pos = [(math.cos(a), math.sin(a)) for a in angles]
    fig, ax = plt.subplots(figsize=(5, 5))
    style = {"a": ("tab:blue", "-"), "b": ("tab:red", "--")}
    for src, move, dst in rc.edges:
        color, dash = style[str(move)]
        x0, y0 = pos[src]
        x1, y1 = pos[dst]
        if src == dst:
            ax.annotate(
                str(move),
                xy=(x0 * 1.28, y0 * 1.28),
                ha="center",
                color=color,
            )
            circle = plt.Circle(
                (x0 * 1.15, y0 * 1.15), 0.09, fill=False, color=color, linestyle=dash
            )
            ax.add_patch(circle)
        else:
            # Bend paired directions apart so both arrows stay readable.
            off = 0.08
            dx, dy = y1 - y0, x0 - x1
            ax.annotate(
                "",
                xy=(x1, y1),
                xytext=(x0, y0),
                arrowprops={
                    "arrowstyle": "-|>",
                    "color": color,
                    "linestyle": dash,
                    "connectionstyle": f"arc3,rad={off}",
                },
            )
            ax.annotate(
                str(move),
                xy=((x0 + x1) / 2 + dx * 0.12, (y0 + y1) / 2 + dy * 0.12),
                ha="center",
                color=color,
            )
    for (x, y), perm in zip(pos, rc.perms):
        ax.plot(x, y, "o", markersize=28, color="white", markeredgecolor="black")
        ax.annotate(str(perm), xy=(x, y), ha="center", va="center", fontsize=8)
    ax.set_xlim(-1.6, 1.6)
    ax.set_ylim(-1.6, 1.6)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title("induction moves")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_tower_stack(stack: TowerStack, path: str) -> None:
    """Floors drawn as horizontal bars, one row per iteration level."""
    fig, ax = plt.subplots(figsize=(7, 4))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for idx, tower in enumerate(stack.towers):
        color = colors[idx % len(colors)]
        for level, floor in enumerate(tower.floors):
            spans = [
                (float(part.lo), float(part.measure)) for part in floor.intervals
            ]
            ax.broken_barh(spans, (level, 0.9), facecolors=color, alpha=0.75)
    heights = [tower.height for tower in stack.towers]
    ax.set_xlabel("domain position")
    ax.set_ylabel("iterations above the base")
    ax.set_title(f"return towers, heights {heights}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_claims(report: ClaimsReport, path: str) -> None:
    """Computed quantities next to their bounds."""
    rows = report.rows
    fig, ax = plt.subplots(figsize=(7, 0.9 * len(rows) + 1.5))
    ys = range(len(rows))
    ax.barh(
        [y + 0.2 for y in ys],
        [float(r.computed) for r in rows],
        height=0.35,
        label="computed",
    )
    ax.barh(
        [y - 0.2 for y in ys],
        [float(r.bound) for r in rows],
        height=0.35,
        label="bound",
    )
    ax.set_yticks(list(ys))
    ax.set_yticklabels([f"{r.quantity} ({r.relation})" for r in rows], fontsize=8)
    ax.invert_yaxis()
    ax.set_xscale("symlog", linthresh=1e-6)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title(f"overlap claims, l={report.l}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_probe_scan(
    report: ProbeReport, distances: dict, total, path: str
) -> None:
    """Normalized distance per tried power, with the acceptance line."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ns = sorted(distances)
    vals = [float(distances[n] / total) for n in ns]
    ax.stem(ns, vals, basefmt=" ")
    ax.axhline(float(report.eps), color="tab:red", linestyle="--", label="eps")
    if report.success:
        ax.plot(
            [report.power],
            [float(report.distance)],
            "o",
            color="tab:green",
            markersize=10,
            fillstyle="none",
            label=f"accepted n={report.power}",
        )
    ax.set_xlabel("power n")
    ax.set_ylabel("truncated weak distance / total length")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.set_title(f"probe scan ({report.mode})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_length_decay(totals, path: str) -> None:
    """Total interval length along an induction run."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(range(len(totals)), [float(v) for v in totals], marker=".")
    ax.set_xlabel("induction step")
    ax.set_ylabel("total length")
    ax.set_yscale("log")
    ax.set_title("length decay along induction")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
