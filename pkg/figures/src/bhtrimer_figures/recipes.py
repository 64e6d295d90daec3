"""Figure recipes: which CSV artifacts feed each figure and how.

A recipe is a pure description — input paths, series labels, axis
labels, output path. The preset recipes map one-to-one onto the CSV
sets that `bhtrimer reproduce fig1..fig4` writes into an artifact
directory.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    kind: str                      # "curves" (moments) or "histograms" (distributions)
    inputs: tuple[Path, ...]
    labels: tuple[str, ...]
    xlabel: str
    ylabel: str
    output: Path

    def __post_init__(self):
        if self.kind not in ("curves", "histograms"):
            raise ValueError(f"unknown recipe kind {self.kind!r}")
        if len(self.inputs) != len(self.labels):
            raise ValueError("inputs and labels must pair up")


FIGURE_NAMES = ("fig1", "fig2", "fig3", "fig4")

_STATE_LABELS = {
    "fock": "Fock",
    "coherent": "coherent",
    "squeezed": "squeezed",
    "coherent_pi2": "coherent, pi/2 phase",
}

_SERIES = {
    "fig1": ("fock", "coherent", "squeezed"),
    "fig2": ("fock", "coherent", "squeezed"),
    "fig3": ("fock", "coherent", "squeezed"),
    "fig4": ("fock", "coherent_pi2"),
}


def preset_recipe(name: str, artifact_dir: str | Path, out_dir: str | Path) -> FigureRecipe:
    """The recipe that renders one preset's artifact set."""
    if name not in FIGURE_NAMES:
        raise ValueError(
            f"unknown figure {name!r}; valid figures: {', '.join(FIGURE_NAMES)}"
        )
    artifact_dir = Path(artifact_dir)
    series = _SERIES[name]
    if name == "fig1":
        kind = "curves"
        inputs = tuple(artifact_dir / f"fig1_{s}_moments.csv" for s in series)
        xlabel, ylabel = "Jt", "N2"
    else:
        kind = "histograms"
        inputs = tuple(artifact_dir / f"{name}_{s}_dist.csv" for s in series)
        xlabel, ylabel = "n", "P(n)"
    return FigureRecipe(
        name=name,
        kind=kind,
        inputs=inputs,
        labels=tuple(_STATE_LABELS[s] for s in series),
        xlabel=xlabel,
        ylabel=ylabel,
        output=Path(out_dir) / f"{name}.svg",
    )
