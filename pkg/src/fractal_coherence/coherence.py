"""Coherence formulas and the resistance / random-walk / Wiener identities.

Each identity has a brute-force counterpart computed directly from the
graph (pseudo-inverse, linear hitting-time solves, breadth-first search) so
the spectral formulas can be checked against it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Graph, GraphError, bfs_distances, laplacian, require_connected


ROUTES = ("eigen", "tree_recursion", "vicsek_recursion", "lyapunov", "montecarlo")


def h_fo(S: float, beta: float, N: int) -> float:
    """First-order coherence ``S / (2 beta N)``."""
    _check_args(beta, N)
    return S / (2.0 * beta * N)


def h_so(S2: float, beta: float, N: int) -> float:
    """Second-order coherence ``S2 / (2 beta**2 N)``."""
    _check_args(beta, N)
    return S2 / (2.0 * beta * beta * N)


def h_fo_exact(S: Fraction, beta: Fraction | int, N: int) -> Fraction:
    return Fraction(S) / (2 * Fraction(beta) * N)


def h_so_exact(S2: Fraction, beta: Fraction | int, N: int) -> Fraction:
    return Fraction(S2) / (2 * Fraction(beta) ** 2 * N)


def _check_args(beta: float, N: int) -> None:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if N < 2:
        raise ValueError(f"coherence needs N >= 2, got {N}")


def laplacian_pinv(g: Graph) -> np.ndarray:
    """Moore-Penrose inverse of the Laplacian of a connected graph.

    Uses ``(L + J/N)^{-1} - J/N`` with ``J`` the all-ones matrix: the null
    space is known exactly, so no singular-value threshold is involved.
    """
    require_connected(g)
    n = g.num_nodes
    ones = np.full((n, n), 1.0 / n)
    return np.linalg.inv(laplacian(g) + ones) - ones


def resistance_matrix(g: Graph) -> np.ndarray:
    Lp = laplacian_pinv(g)
    d = np.diag(Lp)
    return d[:, None] + d[None, :] - 2.0 * Lp


def effective_resistance_total(g: Graph) -> float:
    """Kirchhoff index summed over ordered pairs (equals ``2 N S``)."""
    return float(np.sum(resistance_matrix(g)))


def hitting_time_matrix(g: Graph) -> np.ndarray:
    """Expected first-passage steps ``f[i, j]`` of the simple random walk from i to j.

    For each target ``j`` this solves ``f_ij = 1 + (1/d_i) sum_{k~i} f_kj``
    with ``f_jj = 0``; multiplying through by ``d_i`` turns the system into the
    Laplacian with row and column ``j`` removed.
    """
    require_connected(g)
    n = g.num_nodes
    L = laplacian(g)
    deg = np.diag(L).copy()
    F = np.zeros((n, n))
    idx = np.arange(n)
    for j in range(n):
        keep = idx != j
        F[keep, j] = np.linalg.solve(L[np.ix_(keep, keep)], deg[keep])
    return F


def gmfpt(g: Graph, S: float) -> float:
    """Global mean first passage time ``2 M S / (N - 1)``."""
    if g.num_nodes < 2:
        raise GraphError("GMFPT needs at least two nodes")
    return 2.0 * g.num_edges * S / (g.num_nodes - 1)


def mean_hitting_time(g: Graph) -> float:
    """Average of :func:`hitting_time_matrix` over ordered pairs ``i != j``."""
    n = g.num_nodes
    return float(np.sum(hitting_time_matrix(g)) / (n * (n - 1)))


def wiener_index(g: Graph) -> int:
    """Sum of shortest-path lengths over unordered node pairs."""
    require_connected(g)
    total = sum(int(bfs_distances(g, s).sum()) for s in range(g.num_nodes))
    return total // 2


@dataclass
class CoherenceReport:
    """Coherence figures of one graph, tagged with the route that produced them.

    ``exact`` carries ``"num/den"`` strings for quantities that the recursion
    routes produce as rationals.
    """

    N: int
    M: int
    beta: float
    S: float
    S2: float
    H_FO: float
    H_SO: float
    R_total: float
    F_gmfpt: float
    wiener: float
    route: str
    label: str = ""
    exact: dict[str, str] = field(default_factory=dict)
    extra: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def report_from_sums(
    N: int,
    M: int,
    beta: float,
    S: float,
    S2: float,
    route: str,
    label: str = "",
) -> CoherenceReport:
    """Assemble a report from the two spectral sums.

    ``R_total``, ``F_gmfpt`` and ``wiener`` are the spectral identities
    ``2NS``, ``2MS/(N-1)`` and ``N S`` (the last is the Wiener index only
    for trees).
    """
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}")
    return CoherenceReport(
        N=N,
        M=M,
        beta=beta,
        S=S,
        S2=S2,
        H_FO=h_fo(S, beta, N),
        H_SO=h_so(S2, beta, N),
        R_total=2.0 * N * S,
        F_gmfpt=2.0 * M * S / (N - 1),
        wiener=N * S,
        route=route,
        label=label,
    )
