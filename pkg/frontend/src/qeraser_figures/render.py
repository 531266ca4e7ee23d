"""Render sweep CSVs into annotated publication-style figures.

Input files follow the producer's schema (header ``x,y`` or ``x,y,series``).
The renderer never recomputes any physics: curves, legends and the optional
maximum marker all come straight from the CSV rows.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

FORMATS = ("png", "svg")


class FigureInputError(ValueError):
    """Raised for missing, malformed or empty input CSVs."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input CSV path(s), labels, marker switch, output stem."""

    inputs: tuple[str, ...]
    output: str
    title: str = ""
    xlabel: str = "x"
    ylabel: str = "y"
    annotate_max: bool = True
    annotation: tuple[float, float] | None = None
    legend: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, path: str | Path) -> "FigureSpec":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        inputs = raw.get("inputs") or [raw["input"]]
        annotation = raw.get("annotation")
        return cls(
            inputs=tuple(str(p) for p in inputs),
            output=str(raw["output"]),
            title=raw.get("title", ""),
            xlabel=raw.get("xlabel", "x"),
            ylabel=raw.get("ylabel", "y"),
            annotate_max=bool(raw.get("annotate_max", True)),
            annotation=tuple(annotation) if annotation else None,
            legend=dict(raw.get("legend", {})),
        )


@dataclass(frozen=True)
class RenderResult:
    outputs: tuple[str, ...]
    marker: tuple[float, float] | None
    series: tuple[str, ...]


def read_sweep_csv(path: str | Path) -> dict[str, list[tuple[float, float]]]:
    """Parse one producer CSV into {series label: [(x, y), ...]}."""
    path = Path(path)
    if not path.exists():
        raise FigureInputError(f"input CSV {path} does not exist")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FigureInputError(f"input CSV {path} is empty")
    header = rows[0]
    if header not in (["x", "y"], ["x", "y", "series"]):
        raise FigureInputError(f"input CSV {path} has unexpected header {header!r}")
    if len(rows) < 2:
        raise FigureInputError(f"input CSV {path} carries no data rows")
    series: dict[str, list[tuple[float, float]]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FigureInputError(f"{path}:{lineno}: expected {len(header)} fields")
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError as exc:
            raise FigureInputError(f"{path}:{lineno}: non-numeric value ({exc})") from exc
        label = row[2] if len(row) == 3 else ""
        series.setdefault(label, []).append((x, y))
    return series


def _argmax_point(series: dict[str, list[tuple[float, float]]]) -> tuple[float, float]:
    return max((pt for pts in series.values() for pt in pts), key=lambda pt: pt[1])


def _theme():
    return plt.style.context(
        str(resources.files("qeraser_figures").joinpath("theme.mplstyle")))


def render(spec: FigureSpec) -> RenderResult:
    """Draw one figure and write PNG + SVG next to the output stem."""
    merged: dict[str, list[tuple[float, float]]] = {}
    for path in spec.inputs:
        for label, points in read_sweep_csv(path).items():
            key = label or (Path(path).stem if len(spec.inputs) > 1 else "")
            merged.setdefault(key, []).extend(points)

    marker = None
    if spec.annotation is not None:
        marker = spec.annotation
    elif spec.annotate_max:
        marker = _argmax_point(merged)

    stem = Path(spec.output)
    stem.parent.mkdir(parents=True, exist_ok=True)
    with _theme():
        fig, ax = plt.subplots()
        for label, points in sorted(merged.items()):
            xs, ys = zip(*points)
            ax.plot(xs, ys, label=spec.legend.get(label, label) or None)
        if marker is not None:
            ax.plot([marker[0]], [marker[1]], marker="o", markersize=7,
                    markerfacecolor="none", markeredgecolor="black", zorder=5)
            ax.annotate(f"({marker[0]:g}, {marker[1]:.3g})", xy=marker,
                        xytext=(8, 8), textcoords="offset points", fontsize=9)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title)
        if any(label for label in merged):
            ax.legend()
        outputs = []
        for fmt in FORMATS:
            target = stem.with_suffix(f".{fmt}")
            fig.savefig(target, format=fmt, metadata=_stable_metadata(fmt))
            outputs.append(str(target))
        plt.close(fig)
    return RenderResult(tuple(outputs), marker, tuple(sorted(merged)))


def _stable_metadata(fmt: str) -> dict:
    # Strip timestamps so re-rendering identical inputs yields identical bytes.
    if fmt == "svg":
        return {"Date": None}
    return {"Software": "qeraser-figures"}
