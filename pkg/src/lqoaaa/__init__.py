"""Data-driven reduced models of linear systems with quadratic output.

Fits coupled barycentric rational forms to samples of the linear transfer
function ``H1(s)`` and the quadratic transfer function ``H2(s, z)``, and
turns the fit into an explicit state-space model.
"""

from .barycentric import LqoInterpolant, eval_r1, eval_r2, poles, realize
from .errors import LqoError
from .fitting import FitConfig, FitReport, SampleSet, fit_linear_aaa, fit_lqo_aaa, solve_weights
from .io import sample_model
from .model import LqoModel, TimeSignal, eval_h1, eval_h2, make_benchmark, simulate

__version__ = "0.1.0"

__all__ = [
    "FitConfig",
    "FitReport",
    "LqoError",
    "LqoInterpolant",
    "LqoModel",
    "SampleSet",
    "TimeSignal",
    "eval_h1",
    "eval_h2",
    "eval_r1",
    "eval_r2",
    "fit_linear_aaa",
    "fit_lqo_aaa",
    "make_benchmark",
    "poles",
    "realize",
    "sample_model",
    "simulate",
    "solve_weights",
]
