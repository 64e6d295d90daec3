"""Deterministic CSV-to-image rendering.

The checked-in style file fixes every visual parameter and the SVG
hash salt; together with a cleared Date metadata field the output is
byte-identical for identical inputs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .readers import read_distribution, read_moments
from .recipes import FigureRecipe

STYLE_FILE = Path(__file__).with_name("figures.mplstyle")


def build_figure(recipe: FigureRecipe):
    """Assemble the matplotlib figure for a recipe (one series per input)."""
    with plt.style.context(str(STYLE_FILE)):
        fig, ax = plt.subplots()
        for path, label in zip(recipe.inputs, recipe.labels):
            if recipe.kind == "curves":
                table = read_moments(path)
                ax.plot(table.times, table.mean[:, 1], label=label)
            else:
                dist = read_distribution(path)
                ax.step(dist.centers, dist.probs, where="mid", label=label)
        ax.set_xlabel(recipe.xlabel)
        ax.set_ylabel(recipe.ylabel)
        ax.legend()
        fig.tight_layout()
    return fig


def render_figure(recipe: FigureRecipe) -> Path:
    """Render a recipe to its vector-format output file."""
    fig = build_figure(recipe)
    try:
        recipe.output.parent.mkdir(parents=True, exist_ok=True)
        # the style context must also cover the save so the SVG hash salt
        # applies; a cleared Date keeps the output byte-stable
        with plt.style.context(str(STYLE_FILE)):
            fig.savefig(recipe.output, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return recipe.output
