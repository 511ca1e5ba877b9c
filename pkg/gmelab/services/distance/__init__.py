"""
Distance bounds, sum criterion, GME witness and activatability
"""
from .activatability import activatable_via_npt
from .criterion import distance_bounds, first_firing_copy, sum_criterion, sum_threshold
from .evidence import basis_mixture, recheck_evidence, separability_evidence, transport_evidence
from .gilbert import GilbertApproximator, GilbertOptions, gilbert_upper_bound, split_order
from .ppt_bound import t_ppt_copy_trend, t_ppt_lower_bound, t_ppt_problem
from .sampling import random_biseparable
from .witness import audit_witness, ppt_mixture_witness

__all__ = [
    "activatable_via_npt",
    "distance_bounds",
    "first_firing_copy",
    "sum_criterion",
    "sum_threshold",
    "basis_mixture",
    "recheck_evidence",
    "separability_evidence",
    "transport_evidence",
    "GilbertApproximator",
    "GilbertOptions",
    "gilbert_upper_bound",
    "split_order",
    "t_ppt_copy_trend",
    "t_ppt_lower_bound",
    "t_ppt_problem",
    "random_biseparable",
    "audit_witness",
    "ppt_mixture_witness",
]
