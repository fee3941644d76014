"""Render report figures to files.

Each explanation report maps to one figure: belief-bar charts for the
reasoning questions, a scenario card for MPE/MAP, a ranked bar chart for
MRE, and a gauge plus branch table for the decision questions. Figures
echo payload numbers only, using the same four-decimal display rounding
as the narratives.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .jsonio import display_number

_BAR_COLOR = "#4878a8"
_ACCENT = "#c44e52"


def render_report_figures(report: dict, outdir: str | Path) -> list[Path]:
    """Write the figures for a serialized explanation report.

    ``report`` is the JSON-ready envelope result produced by the explain
    operation ({"plan": ..., "payload": ..., ...}). Returns the paths
    written.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    operation = report["plan"]["operation"]
    payload = report["payload"]
    renderer = _RENDERERS.get(operation)
    if renderer is None:
        return []
    return renderer(payload, outdir)


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _render_belief(payload: dict, outdir: Path) -> list[Path]:
    states = list(payload["posterior_marginal"])
    values = [payload["posterior_marginal"][s] for s in states]
    fig, ax = plt.subplots(figsize=(5, 3))
    bars = ax.barh(states[::-1], values[::-1], color=_BAR_COLOR)
    ax.set_xlim(0, 1)
    ax.set_xlabel("posterior probability")
    ax.set_title(f"{payload['target']} given evidence ({payload['kind']})")
    for bar, v in zip(bars, values[::-1]):
        ax.text(bar.get_width() + 0.01, bar.get_y() + bar.get_height() / 2,
                display_number(v), va="center", fontsize=9)
    return [_save(fig, outdir / "beliefs.png")]


def _render_explaining_away(payload: dict, outdir: Path) -> list[Path]:
    labels = [
        "effect only",
        f"+ {payload['competing_cause']}={payload['competing_state']}",
    ]
    values = [payload["before"], payload["after"]]
    fig, ax = plt.subplots(figsize=(5, 3))
    bars = ax.bar(labels, values, color=[_BAR_COLOR, _ACCENT])
    ax.set_ylim(0, 1)
    ax.set_ylabel(f"P({payload['cause']}={payload['cause_state']})")
    title = "explained away" if payload["active"] else "no explaining away"
    ax.set_title(title)
    for bar, v in zip(bars, values):
        ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height() + 0.02,
                display_number(v), ha="center", fontsize=9)
    return [_save(fig, outdir / "explaining_away.png")]


def _render_scenario(payload: dict, outdir: Path) -> list[Path]:
    assignment = payload["assignment"]
    fig, ax = plt.subplots(figsize=(5, 0.4 * len(assignment) + 1.2))
    ax.axis("off")
    rows = [[var, state] for var, state in assignment.items()]
    table = ax.table(
        cellText=rows,
        colLabels=["variable", "state"],
        loc="center",
        cellLoc="left",
    )
    table.auto_set_font_size(False)
    table.set_fontsize(9)
    ax.set_title(
        f"most probable scenario (score {display_number(payload['score'])})"
    )
    return [_save(fig, outdir / "scenario.png")]


def _render_ranking(payload: dict, outdir: Path) -> list[Path]:
    entries = payload["entries"]
    labels = [
        ", ".join(f"{v}={s}" for v, s in e["assignment"].items())
        for e in entries
    ]
    scores = [e["score"] for e in entries]
    fig, ax = plt.subplots(figsize=(6, 0.4 * len(entries) + 1.5))
    bars = ax.barh(range(len(entries)), scores, color=_BAR_COLOR)
    ax.set_yticks(range(len(entries)))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("generalised Bayes factor")
    ax.set_title("most relevant explanations")
    for bar, v in zip(bars, scores):
        ax.text(bar.get_width() * 1.01, bar.get_y() + bar.get_height() / 2,
                display_number(v), va="center", fontsize=8)
    return [_save(fig, outdir / "relevance.png")]


def _render_sdp(payload: dict, outdir: Path) -> list[Path]:
    import numpy as np

    sdp_value = payload["sdp"]
    fig, (gauge, tbl) = plt.subplots(
        1, 2, figsize=(9, 3.2), gridspec_kw={"width_ratios": [1, 1.6]}
    )
    theta = np.linspace(np.pi, np.pi * (1 - sdp_value), 50)
    gauge.plot(np.cos(np.linspace(np.pi, 0, 50)),
               np.sin(np.linspace(np.pi, 0, 50)), color="#cccccc", lw=8)
    gauge.plot(np.cos(theta), np.sin(theta), color=_BAR_COLOR, lw=8)
    gauge.text(0, 0.1, display_number(sdp_value), ha="center", fontsize=16)
    gauge.set_xlim(-1.2, 1.2)
    gauge.set_ylim(-0.1, 1.2)
    gauge.axis("off")
    gauge.set_title("same-decision probability")

    tbl.axis("off")
    rows = []
    for b in payload["branches"][:12]:
        rows.append([
            ", ".join(f"{v}={s}" for v, s in b["assignment"].items()) or "(none)",
            display_number(b["weight"]),
            "-" if b["posterior"] is None else display_number(b["posterior"]),
            "yes" if b["same_decision"] else "no",
        ])
    table = tbl.table(
        cellText=rows,
        colLabels=["branch", "weight", "posterior", "same"],
        loc="center",
        cellLoc="left",
    )
    table.auto_set_font_size(False)
    table.set_fontsize(7)
    tbl.set_title("branches")
    return [_save(fig, outdir / "decision.png")]


def _render_sweep(payload: dict, outdir: Path) -> list[Path]:
    candidates = payload["candidates"]
    labels = [c["variable"] for c in candidates]
    values = [c["sdp"] for c in candidates]
    fig, ax = plt.subplots(figsize=(6, 0.4 * len(candidates) + 1.5))
    colors = [
        _ACCENT if c["would_change_decision"] else _BAR_COLOR
        for c in candidates
    ]
    bars = ax.barh(range(len(candidates)), values, color=colors)
    ax.set_yticks(range(len(candidates)))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlim(0, 1.15)
    ax.set_xlabel("same-decision probability if observed")
    ax.set_title("information value of candidate observations")
    for bar, v in zip(bars, values):
        ax.text(bar.get_width() + 0.01, bar.get_y() + bar.get_height() / 2,
                display_number(v), va="center", fontsize=8)
    return [_save(fig, outdir / "what_more_info.png")]


_RENDERERS = {
    "posterior": _render_belief,
    "explaining_away": _render_explaining_away,
    "mpe": _render_scenario,
    "map": _render_scenario,
    "mre": _render_ranking,
    "sdp": _render_sdp,
    "sdp_sweep": _render_sweep,
}
