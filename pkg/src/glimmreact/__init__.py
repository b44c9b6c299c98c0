"""Glimm fractional-step scheme for steady supersonic reacting flow past a wall."""

__version__ = "0.1.0"

from .errors import (ConfigError, DegenerateJacobian, DomainError, GlimmError, GridMismatch,
                     IntegrationError, MaxIterations, MissingWaveData, NoContraction,
                     NoConvergence, NoRootError, ParseError, RangeError, SonicError,
                     StepTooLarge, ValidationError)
from .gas import GasModel, State, eigenvalues, entropy, fluxes, kappa, right_eigenvector
from .waves import compose, rarefaction, shock, wave_curve
from .riemann import WaveFan, sample_fan, solve_boundary, solve_strong_contact, solve_weak
from .reaction import ReactionOutcome, react
from .scheme import MeshColumn, PiecewiseData, SchemeConfig, SolutionField, run
from .diagnostics import (FunctionalWeights, default_weights, glimm_functional,
                          slab_conservation, total_variation)
from .quasi1d import DuctGeometry, Quasi1DSolution, compare, solve_q1d

__all__ = [
    "ConfigError", "DegenerateJacobian", "DomainError", "GlimmError", "GridMismatch",
    "IntegrationError", "MaxIterations", "MissingWaveData", "NoContraction", "NoConvergence",
    "NoRootError", "ParseError", "RangeError", "SonicError", "StepTooLarge", "ValidationError",
    "GasModel", "State", "eigenvalues", "entropy", "fluxes", "kappa", "right_eigenvector",
    "compose", "rarefaction", "shock", "wave_curve",
    "WaveFan", "sample_fan", "solve_boundary", "solve_strong_contact", "solve_weak",
    "ReactionOutcome", "react",
    "MeshColumn", "PiecewiseData", "SchemeConfig", "SolutionField", "run",
    "FunctionalWeights", "default_weights", "glimm_functional", "slab_conservation",
    "total_variation",
    "DuctGeometry", "Quasi1DSolution", "compare", "solve_q1d",
]
