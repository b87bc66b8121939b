"""Fractal graph generators and the coherence of noisy consensus dynamics on them."""

__version__ = "0.1.0"

from .coherence import CoherenceReport, h_fo, h_so
from .consensus_sim import LtiConsensusSystem, SimConfig, SimEstimate, lyapunov_h2, simulate_variance
from .generators import FamilySpec, analytic_dimensions, path, ring, star, torus2d, tree_like, vicsek
from .graph import Graph, GraphError, build_graph, laplacian, read_edgelist, write_edgelist
from .scaling import ScalingFit, fit_exponent
from .spectral import SpectrumSummary, spectrum
from .tree_recursion import tree_S, tree_S2
from .vicsek_recursion import vicsek_S, vicsek_S2

__all__ = [
    "CoherenceReport", "FamilySpec", "Graph", "GraphError", "LtiConsensusSystem", "ScalingFit",
    "SimConfig", "SimEstimate", "SpectrumSummary", "analytic_dimensions", "build_graph",
    "fit_exponent", "h_fo", "h_so", "laplacian", "lyapunov_h2", "path", "read_edgelist", "ring",
    "simulate_variance", "spectrum", "star", "torus2d", "tree_S", "tree_S2", "tree_like", "vicsek",
    "vicsek_S", "vicsek_S2", "write_edgelist",
]
