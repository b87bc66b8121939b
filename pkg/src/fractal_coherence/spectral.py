"""Dense Laplacian eigensolves and the reciprocal eigenvalue sums built on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import CapExceededError, Graph, GraphError, laplacian, max_eigen_nodes


class SpectrumError(GraphError):
    pass


def eigenvalues(L: np.ndarray, check: bool = False) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix.

    With ``check=True`` the full decomposition is computed and the
    reconstruction residual ``max |L V - V diag(w)|`` must stay below
    ``1e-8 * max|w|``.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise SpectrumError(f"expected a square matrix, got shape {L.shape}")
    n = L.shape[0]
    if n > max_eigen_nodes():
        raise CapExceededError(
            f"dense eigensolve of size {n} exceeds the cap of {max_eigen_nodes()} "
            "(set FRACTAL_COHERENCE_MAX_EIGEN_NODES to raise it)"
        )
    if not np.array_equal(L, L.T):
        raise SpectrumError("matrix is not symmetric")
    if not check:
        return np.linalg.eigvalsh(L)
    w, V = np.linalg.eigh(L)
    residual = np.max(np.abs(L @ V - V * w)) if n else 0.0
    scale = max(np.max(np.abs(w)), 1.0)
    if residual > 1e-8 * scale:
        raise SpectrumError(f"eigendecomposition residual {residual:.3e} too large")
    return w


@dataclass(frozen=True)
class SpectrumSummary:
    """Sorted Laplacian spectrum with the sums ``S = sum 1/lam`` and ``S2 = sum 1/lam**2``.

    Both sums run over the eigenvalues above ``zero_tolerance``; construction
    fails unless exactly one eigenvalue is below it.
    """

    eigenvalues: np.ndarray
    zero_tolerance: float
    S: float
    S2: float

    @property
    def num_nodes(self) -> int:
        return len(self.eigenvalues)

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[self.eigenvalues > self.zero_tolerance]

    @property
    def algebraic_connectivity(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])


def default_zero_tolerance(ev: np.ndarray) -> float:
    """``1e-12 * N * max|lam|``.

    Eigensolver noise on the null eigenvalue is ~1e-14 here, while the
    algebraic connectivity of a 5000-node path is ~4e-7.
    """
    n = len(ev)
    return 1e-12 * n * max(float(np.max(np.abs(ev))), 1.0)


def summarize(ev: np.ndarray, zero_tolerance: float | None = None) -> SpectrumSummary:
    ev = np.sort(np.asarray(ev, dtype=float))
    tol = default_zero_tolerance(ev) if zero_tolerance is None else zero_tolerance
    nz = ev[ev > tol]
    n_zero = len(ev) - len(nz)
    if n_zero != 1:
        raise SpectrumError(
            f"{n_zero} eigenvalues below tolerance {tol:.3e}: "
            "disconnected or tolerance misconfigured"
        )
    return SpectrumSummary(ev, tol, float(np.sum(1.0 / nz)), float(np.sum(1.0 / nz**2)))


def spectrum(g: Graph, zero_tolerance: float | None = None) -> SpectrumSummary:
    """Eigensolve the Laplacian of ``g`` and summarize it."""
    return summarize(eigenvalues(laplacian(g)), zero_tolerance)


def inverse_sum(spec: SpectrumSummary) -> float:
    return spec.S


def inverse_square_sum(spec: SpectrumSummary) -> float:
    return spec.S2


def counting_function(spec: SpectrumSummary | np.ndarray, x: float) -> int:
    """Number of eigenvalues of magnitude ``<= x`` (the zero eigenvalue included)."""
    ev = spec.eigenvalues if isinstance(spec, SpectrumSummary) else np.sort(np.asarray(spec))
    if isinstance(spec, SpectrumSummary):
        # eigensolver noise can put the null eigenvalue slightly below zero
        mags = np.where(ev <= spec.zero_tolerance, 0.0, np.abs(ev))
    else:
        mags = np.abs(ev)
    return int(np.count_nonzero(mags <= x))
