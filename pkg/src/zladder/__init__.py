"""Disconnected-set correlation integrals of Hardy's Z function on the critical line."""

__version__ = "0.1.0"

from .rs_zeta import ShiftTriple, ZEval, theta1, theta1_deriv, theta_rs, z, z_triple, z_values
from .nodes import NodeQuery, node, nodes_in_window, spacing_estimate
from .sets import DisjointSet, Interval, build_set, measure, validate_window
from .quad import QuadResult, integrate, sign_partition
from .ladder import disjointness_report, ladder_image, map_set, phi_half, prime_pi

__all__ = [
    "ShiftTriple", "ZEval", "theta1", "theta1_deriv", "theta_rs", "z", "z_triple", "z_values",
    "NodeQuery", "node", "nodes_in_window", "spacing_estimate",
    "DisjointSet", "Interval", "build_set", "measure", "validate_window",
    "QuadResult", "integrate", "sign_partition",
    "disjointness_report", "ladder_image", "map_set", "phi_half", "prime_pi",
]
