"""Publication-style figures from the trimer simulator's CSV artifacts."""

from .readers import (
    DistributionTable,
    FigureInputError,
    MomentsTable,
    read_distribution,
    read_moments,
)
from .recipes import FIGURE_NAMES, FigureRecipe, preset_recipe
from .render import build_figure, render_figure

__version__ = "0.1.0"
