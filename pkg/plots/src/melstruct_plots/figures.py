"""Render analysis-report sections as figures.

The renderer consumes only the published report JSON; it never computes
statistics of its own.  Vocabulary figures draw distinct-pattern counts as
solid lines and unique-pattern counts dashed.  The timeline and the
generated-corpus cross-entropy figures flip the y axis so that "more
repetition" and "more predictable" point the same way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

FIGURE_IDS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10")

# Report sections each figure needs, by key inside the analysis block.
REQUIRED_SECTIONS: dict[str, tuple[str, ...]] = {
    "fig3": ("phrase_vocabulary",),
    "fig4": ("within_phrase_curve",),
    "fig5": ("fg_bg_sweep",),
    "fig6": ("positional_cross_entropy",),
    "fig7": ("repetition_timeline", "over_song_curve"),
    "fig8": ("phrase_position_pitch_stats",),
    "fig9": ("song_vocabulary",),
    "fig10": ("over_song_curve",),
}

INVERTED_Y_FIGURES = frozenset({"fig7", "fig10"})

POSITION_ORDER = (
    "section_start",
    "phrase_start",
    "phrase_middle",
    "phrase_end",
    "section_end",
)

REAL_COLOR = "#1f77b4"
BASELINE_COLOR = "#ff7f0e"


class MissingSectionError(Exception):
    """The report lacks a section the requested figure needs."""

    def __init__(self, figure_id: str, section: str):
        super().__init__(f"{figure_id} needs report section {section!r}, which is missing")
        self.section = section


class UnknownFigureError(Exception):
    pass


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    report_path: Path
    out_path: Path
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise UnknownFigureError(
                f"unknown figure id {self.figure_id!r}; expected one of {FIGURE_IDS}"
            )


def figure_metadata(figure_id: str, style: dict | None = None) -> dict:
    """Static facts about a figure id, including the inverted-axis flag."""
    if figure_id not in FIGURE_IDS:
        raise UnknownFigureError(f"unknown figure id {figure_id!r}")
    style = style or {}
    return {
        "figure_id": figure_id,
        "required_sections": REQUIRED_SECTIONS[figure_id],
        "inverted_y": bool(style.get("invert_y", figure_id in INVERTED_Y_FIGURES)),
    }


def _analysis_block(report: dict, figure_id: str, style: dict) -> dict:
    if "analysis" in report:
        return report["analysis"]
    # comparison report: fig10 defaults to the generated corpus, others reference
    default = "generated" if figure_id == "fig10" else "reference"
    which = style.get("section", default)
    if which not in report:
        raise MissingSectionError(figure_id, which)
    return report[which]


def _require(analysis: dict, figure_id: str) -> None:
    for section in REQUIRED_SECTIONS[figure_id]:
        if section not in analysis:
            raise MissingSectionError(figure_id, section)


def _plot_vocab_pair(ax, real: dict, baseline: dict, title: str) -> None:
    for series, color, label in ((real, REAL_COLOR, "real"), (baseline, BASELINE_COLOR, "baseline")):
        points = series["points"]
        lengths = [p["length"] for p in points]
        ax.plot(lengths, [p["mean_distinct"] for p in points], "-o", color=color, label=f"{label} distinct", markersize=3)
        ax.plot(lengths, [p["mean_unique"] for p in points], "--o", color=color, label=f"{label} unique", markersize=3)
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("length (half notes)")
    ax.set_ylabel("patterns")
    ax.legend(fontsize=6)


def _binned_xy(curve: dict):
    num_bins = curve["num_bins"]
    xs, ys = [], []
    for b, mean in enumerate(curve["means"]):
        if mean is not None:
            xs.append((b + 0.5) / num_bins)
            ys.append(mean)
    return xs, ys


def _fig3(analysis: dict, style: dict):
    fig, axes = plt.subplots(1, 2, figsize=(8, 3))
    vocab = analysis["phrase_vocabulary"]
    _plot_vocab_pair(axes[0], vocab["onset"]["real"], vocab["onset"]["baseline"], "onset patterns in phrases")
    _plot_vocab_pair(axes[1], vocab["pitch"]["real"], vocab["pitch"]["baseline"], "pitch patterns in phrases")
    return fig


def _fig4(analysis: dict, style: dict):
    fig, ax = plt.subplots(figsize=(5, 3))
    xs, ys = _binned_xy(analysis["within_phrase_curve"])
    ax.plot(xs, ys, "-o", color=REAL_COLOR, markersize=3)
    ax.set_xlabel("position within phrase")
    ax.set_ylabel("cross-entropy (bits)")
    ax.set_title("prediction cost over the phrase", fontsize=9)
    return fig


def _fig5(analysis: dict, style: dict):
    sweep = analysis["fg_bg_sweep"]
    fig, axes = plt.subplots(1, 2, figsize=(8, 3), sharey=True)
    titles = {
        "include_duplicates": "duplicates in foreground",
        "holdout_repeats": "repeats held out",
    }
    for ax, variant in zip(axes, ("include_duplicates", "holdout_repeats")):
        rows = sweep[variant]
        lambdas = [r["lambda"] for r in rows]
        ax.plot(lambdas, [r["entropy"] for r in rows], "-s", label="entropy", markersize=3)
        ax.plot(lambdas, [r["cross_entropy"] for r in rows], "-o", label="cross-entropy", markersize=3)
        ax.set_xlabel("foreground weight")
        ax.set_ylabel("bits")
        ax.set_title(titles[variant], fontsize=9)
        twin = ax.twinx()
        twin.plot(lambdas, [r["accuracy"] for r in rows], "--^", color="green", label="accuracy", markersize=3)
        twin.set_ylim(0, 1)
        twin.set_ylabel("accuracy")
        ax.legend(fontsize=6, loc="upper left")
    return fig


def _fig6(analysis: dict, style: dict):
    table = analysis["positional_cross_entropy"]
    fig, ax = plt.subplots(figsize=(6, 3))
    width = 0.35
    xs = range(len(POSITION_ORDER))
    for offset, kind, color in ((0.0, "background", REAL_COLOR), (width, "foreground", BASELINE_COLOR)):
        values = [table[kind].get(pos) for pos in POSITION_ORDER]
        ax.bar(
            [x + offset for x in xs],
            [0 if v is None else v for v in values],
            width=width,
            color=color,
            label=kind,
        )
    ax.set_xticks([x + width / 2 for x in xs])
    ax.set_xticklabels([p.replace("_", "\n") for p in POSITION_ORDER], fontsize=7)
    ax.set_ylabel("cross-entropy (bits)")
    ax.legend(fontsize=7)
    return fig


def _fig7(analysis: dict, style: dict):
    fig, (left, right) = plt.subplots(1, 2, figsize=(8, 3))
    timeline = analysis["repetition_timeline"]
    num_bins = timeline["num_bins"]
    xs = [(b + 0.5) / num_bins for b in range(num_bins)]
    left.bar(xs, [100 * f for f in timeline["fraction_repeating"]], width=0.9 / num_bins, color="green")
    left.set_xlabel("song position")
    left.set_ylabel("% repeating")
    xs, ys = _binned_xy(analysis["over_song_curve"])
    right.plot(xs, ys, "-o", color=REAL_COLOR, markersize=3)
    right.set_xlabel("song position")
    right.set_ylabel("cross-entropy (bits)")
    return fig


def _fig8(analysis: dict, style: dict):
    stats = analysis["phrase_position_pitch_stats"]
    keys = ("start", "middle", "end")
    fig, (left, right) = plt.subplots(1, 2, figsize=(7, 3))
    left.bar(keys, [stats[k]["entropy_bits"] or 0 for k in keys], color=REAL_COLOR)
    left.set_ylabel("degree entropy (bits)")
    right.bar(keys, [stats[k]["tonic_probability"] or 0 for k in keys], color=BASELINE_COLOR)
    right.set_ylabel("P(tonic)")
    for ax in (left, right):
        ax.set_xlabel("phrase position")
    return fig


def _fig9(analysis: dict, style: dict):
    fig, ax = plt.subplots(figsize=(5, 3))
    vocab = analysis["song_vocabulary"]
    _plot_vocab_pair(ax, vocab["real"], vocab["baseline"], "onset vocabulary vs song length")
    return fig


def _fig10(analysis: dict, style: dict):
    fig, ax = plt.subplots(figsize=(5, 3))
    xs, ys = _binned_xy(analysis["over_song_curve"])
    ax.plot(xs, ys, "-o", color=REAL_COLOR, markersize=3)
    ax.axhline(1.0, color="gray", linewidth=0.8, linestyle=":")
    ax.set_xlabel("song position")
    ax.set_ylabel("cross-entropy (bits)")
    return fig


_BUILDERS = {
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9": _fig9,
    "fig10": _fig10,
}


def build_figure(report: dict, figure_id: str, style: dict | None = None):
    """Build (but do not save) the matplotlib figure for a report."""
    if figure_id not in FIGURE_IDS:
        raise UnknownFigureError(f"unknown figure id {figure_id!r}")
    style = style or {}
    analysis = _analysis_block(report, figure_id, style)
    _require(analysis, figure_id)
    fig = _BUILDERS[figure_id](analysis, style)
    meta = figure_metadata(figure_id, style)
    if meta["inverted_y"]:
        for ax in fig.axes:
            if ax.get_ylabel().startswith("cross-entropy"):
                ax.invert_yaxis()
    fig.suptitle(style.get("title", figure_id), fontsize=10)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Render a figure spec to its output image file."""
    report = json.loads(Path(spec.report_path).read_text())
    fig = build_figure(report, spec.figure_id, spec.style)
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, dpi=int(spec.style.get("dpi", 110)))
    plt.close(fig)
    return spec.out_path
