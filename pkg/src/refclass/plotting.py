"""Figures for verdicts: one horizontal bar per candidate interval."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .model import Label, Verdict  # noqa: E402

LABEL_COLORS = {
    Label.IN: "#2b7bba",
    Label.UNDECIDED: "#e69f00",
    Label.OUT: "#b0b0b0",
}
POINT_WIDTH = 0.006


def plot_verdict(verdict: Verdict, path, title=None):
    """Draw candidates as interval bars, shaded by fixpoint label, over the verdict cover.

    Returns the figure so callers can adjust it before it is closed.
    """
    n = max(len(verdict.candidates), 1)
    fig, ax = plt.subplots(figsize=(7, 1.2 + 0.45 * n))
    ax.axvspan(float(verdict.interval.lo), float(verdict.interval.hi),
               color="#d8ecd0", zorder=0, label=f"verdict {verdict.interval}")
    if verdict.interval.is_point:
        ax.axvline(float(verdict.interval.lo), color="#4a9a3a", lw=1.5, zorder=1)
    seen = set()
    for row, cand in enumerate(verdict.candidates):
        label = verdict.labels[cand]
        lo, hi = float(cand.interval.lo), float(cand.interval.hi)
        ax.barh(
            row, max(hi - lo, POINT_WIDTH), left=lo if hi > lo else lo - POINT_WIDTH / 2,
            height=0.5, color=LABEL_COLORS[label],
            label=label.value.upper() if label not in seen else None, zorder=2,
        )
        seen.add(label)
        ax.annotate(str(cand.interval), (hi, row), xytext=(4, 0), textcoords="offset points",
                    va="center", fontsize=8)
    ax.set_yticks(range(len(verdict.candidates)))
    ax.set_yticklabels([f"{c.reference}\n({c.subject} in {c.target})" for c in verdict.candidates],
                       fontsize=8)
    ax.invert_yaxis()
    ax.set_xlim(0, 1.08)
    ax.set_xlabel("probability")
    ax.set_title(title or str(verdict.query), fontsize=10)
    ax.legend(loc="lower right", fontsize=7, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return fig
