"""Figure and report renderer for ring-cascade simulation manifests."""

__version__ = "0.1.0"

from .reader import Bundle, load_bundle, marginal_deviation, recompute_marginals
from .render import FigureJob, render_report, render_twf_figure

__all__ = ["Bundle", "load_bundle", "marginal_deviation", "recompute_marginals",
           "FigureJob", "render_report", "render_twf_figure"]
