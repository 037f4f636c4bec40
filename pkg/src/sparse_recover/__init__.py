"""Sparse measure recovery by particle descent on the energy distance."""

from .energy import Trajectory, energy_distance, gd_step, particle_gd, subgradient
from .errors import AssumptionViolation, NumericalFailure
from .fourier import MomentVector, moments, sign_series_coeffs, truncated_sign
from .highdim import beta_of, recover_nd_deterministic, recover_nd_randomized
from .measures import MatchResult, SparseMeasure1D, match_particles, min_separation, winf_distance
from .neural import population_loss_analytic, population_loss_mc
from .superres import RecoveryConfig, default_params, empirical_params, recover_1d

__version__ = "0.1.0"
