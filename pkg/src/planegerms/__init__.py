"""Invariants of plane curve germs: Puiseux roots, Kuo-Lu trees, polar arcs and canyons."""
from .analysis import GermAnalysis, InvariantViolation, NotAGerm, analyze
from .canyons import compare_lipschitz, group_canyons, hp_invariants, lipschitz_signature
from .clusters import cluster_partition, compare_topo, topo_signature
from .parser import ParseError, format_poly, parse_poly
from .polar import loj_grad, milnor_number, polar_quotients, rho0, tangent_cone
from .puiseux import PuiseuxSeries, Unresolved
from .tree import KuoLuTree

__all__ = [
    "GermAnalysis", "InvariantViolation", "KuoLuTree", "NotAGerm", "ParseError", "PuiseuxSeries",
    "Unresolved", "analyze", "cluster_partition", "compare_lipschitz", "compare_topo",
    "format_poly", "group_canyons", "hp_invariants", "lipschitz_signature", "loj_grad",
    "milnor_number", "parse_poly", "polar_quotients", "rho0", "tangent_cone", "topo_signature",
]
