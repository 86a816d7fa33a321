"""Exact optimal (partial) transport, linearized LOT/LOPT embeddings and interpolation curves."""

from .analysis import PcaResult, ot_barycenter, pca
from .embeddings import LoptEmbedding, LotEmbedding, lopt_discrepancy, lopt_embed, lot_discrepancy, lot_embed
from .errors import InputError, NumericalError
from .interpolation import curve, lopt_interpolate, lot_geodesic, opt_interpolate, ot_geodesic
from .measures import (
    CostParams,
    DiscreteMeasure,
    TransportPlan,
    plan_cost_opt,
    plan_cost_ot,
    total_mass,
    truncated_norm_sq,
)
from .projections import ProjectedMeasure, opt_barycentric_projection, ot_barycentric_projection
from .solver_opt import OptSolution, brute_force_opt, solve_opt
from .solver_ot import OtSolution, brute_force_ot, solve_ot

__version__ = "0.1.0"
