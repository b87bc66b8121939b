"""Dynamical oracles for coherence: steady-state Lyapunov solves and
Euler-Maruyama simulation of the noisy consensus dynamics.

First order:   dx = -beta L x dt + dW
Second order:  dx1 = x2 dt,  dx2 = -beta L (x1 + x2) dt + dW

Coherence is the steady-state mean over nodes of the variance of the
deviation from the current average, ``E ||J x||^2 / N`` with
``J = I - 11^T / N`` (``x1`` in the second-order case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .graph import Graph, laplacian, require_connected


class StabilityError(RuntimeError):
    """The deflated system is not asymptotically stable, or a simulation diverged."""


LYAPUNOV_MAX_NODES = 200


def consensus_projector(n: int) -> np.ndarray:
    return np.eye(n) - np.full((n, n), 1.0 / n)


def orthogonal_complement_basis(n: int) -> np.ndarray:
    """Orthonormal ``n x (n-1)`` basis of the vectors orthogonal to all-ones.

    Built from a QR factorization, independent of any Laplacian.
    """
    M = np.eye(n)[:, : n - 1] - 1.0 / n
    Q, _ = np.linalg.qr(np.hstack([np.ones((n, 1)) / math.sqrt(n), M]))
    return Q[:, 1:]


@dataclass(frozen=True)
class LtiConsensusSystem:
    """Noisy consensus dynamics on a fixed graph."""

    order: str
    beta: float
    laplacian: np.ndarray

    def __post_init__(self) -> None:
        if self.order not in ("first", "second"):
            raise ValueError(f"order must be 'first' or 'second', got {self.order!r}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    @classmethod
    def from_graph(cls, g: Graph, order: str, beta: float) -> "LtiConsensusSystem":
        require_connected(g)
        return cls(order, float(beta), laplacian(g))

    @property
    def num_nodes(self) -> int:
        return self.laplacian.shape[0]

    @property
    def state_dimension(self) -> int:
        return self.num_nodes * (1 if self.order == "first" else 2)

    @property
    def output_projector(self) -> np.ndarray:
        return consensus_projector(self.num_nodes)

    def matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Full state-space ``(A, B, C)`` with ``C`` projecting onto the disagreement."""
        n, L, b = self.num_nodes, self.laplacian, self.beta
        J = self.output_projector
        if self.order == "first":
            return -b * L, np.eye(n), J
        A = np.block([[np.zeros((n, n)), np.eye(n)], [-b * L, -b * L]])
        B = np.vstack([np.zeros((n, n)), np.eye(n)])
        C = np.hstack([J, np.zeros((n, n))])
        return A, B, C


def lyapunov_h2(system: LtiConsensusSystem) -> float:
    """Coherence as the squared H2 norm per node, from a Lyapunov solve.

    The dynamics are restricted to coordinates ``z = U^T x`` where ``U`` spans
    the complement of the all-ones vector; the consensus mode (and, for the
    second-order system, the average velocity) is unobservable through ``J``
    and is dropped.  The reduced system is Hurwitz for a connected graph,
    and ``A S + S A^T + B B^T = 0`` yields the stationary covariance ``S``.
    """
    n = system.num_nodes
    if n > LYAPUNOV_MAX_NODES:
        raise ValueError(f"dense Lyapunov route is limited to N <= {LYAPUNOV_MAX_NODES}, got {n}")
    U = orthogonal_complement_basis(n)
    Lr = U.T @ system.laplacian @ U
    k = n - 1
    b = system.beta
    if system.order == "first":
        A = -b * Lr
        B = np.eye(k)
    else:
        A = np.block([[np.zeros((k, k)), np.eye(k)], [-b * Lr, -b * Lr]])
        B = np.vstack([np.zeros((k, k)), np.eye(k)])
    spectral_abscissa = np.max(np.linalg.eigvals(A).real)
    # a disconnected graph leaves a zero mode that roundoff can push just below 0
    if spectral_abscissa >= -1e-10 * max(1.0, b * np.abs(Lr).max()):
        raise StabilityError(
            f"deflated system has spectral abscissa {spectral_abscissa:.3e} >= 0; graph disconnected?"
        )
    Sigma = sla.solve_continuous_lyapunov(A, -B @ B.T)
    return float(np.trace(Sigma[:k, :k]) / n)


@dataclass(frozen=True)
class SimConfig:
    """Euler-Maruyama settings.

    ``dt``, ``burn_in`` and ``horizon`` default (``None``) to
    ``dt_factor / (beta lam_max)``, ``burn_in_factor / (beta lam_2)`` and
    ``horizon_factor / (beta lam_2)``.  ``noise_scale = 0`` switches the
    disturbance off.
    """

    dt: float | None = None
    burn_in: float | None = None
    horizon: float | None = None
    dt_factor: float = 0.05
    burn_in_factor: float = 10.0
    horizon_factor: float = 200.0
    replicates: int = 32
    seed: int = 0
    noise_scale: float = 1.0
    chunk_steps: int = 4096
    overflow_guard: float = 1e150


@dataclass(frozen=True)
class SimEstimate:
    h_hat: float
    stderr: float
    samples: int
    dt: float
    burn_in_steps: int
    measure_steps: int
    replicate_means: tuple[float, ...]

    def z_score(self, analytic: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.h_hat == analytic else math.inf
        return (self.h_hat - analytic) / self.stderr


def resolve_config(system: LtiConsensusSystem, config: SimConfig) -> tuple[float, int, int]:
    """Return ``(dt, burn_in_steps, measure_steps)`` after filling defaults."""
    ev = np.linalg.eigvalsh(system.laplacian)
    lam2, lam_max = ev[1], ev[-1]
    b = system.beta
    dt = config.dt if config.dt is not None else config.dt_factor / (b * lam_max)
    if dt * b * lam_max >= 0.1:
        raise StabilityError(
            f"dt * beta * lam_max = {dt * b * lam_max:.3g} >= 0.1; reduce dt below {0.1 / (b * lam_max):.3g}"
        )
    burn_in = config.burn_in if config.burn_in is not None else config.burn_in_factor / (b * lam2)
    horizon = config.horizon if config.horizon is not None else config.horizon_factor / (b * lam2)
    if horizon < 20.0 / (b * lam2):
        raise ValueError(f"horizon {horizon:.3g} is shorter than 20 / (beta lam_2) = {20 / (b * lam2):.3g}")
    return dt, int(math.ceil(burn_in / dt)), int(math.ceil(horizon / dt))


def replicate_seeds(seed: int, replicates: int) -> list[np.random.SeedSequence]:
    """Independent per-replicate streams; replicate ``r`` never depends on the count."""
    return [np.random.SeedSequence(entropy=seed, spawn_key=(r,)) for r in range(replicates)]


def simulate_variance(system: LtiConsensusSystem, config: SimConfig = SimConfig()) -> SimEstimate:
    """Monte-Carlo estimate of the coherence.

    All replicates advance together as the columns of one state matrix, each
    column drawing its increments from its own generator, so results do not
    depend on how replicates are batched.  Each replicate contributes the
    time average of ``||J x||^2 / N`` after burn-in; the estimate is the mean
    over replicates and ``stderr`` their standard error.
    """
    n = system.num_nodes
    R = config.replicates
    if R < 2:
        raise ValueError("need at least two replicates for a standard error")
    dt, n_burn, n_meas = resolve_config(system, config)
    gens = [np.random.Generator(np.random.PCG64(s)) for s in replicate_seeds(config.seed, R)]
    drift = -system.beta * system.laplacian
    sq = math.sqrt(dt) * config.noise_scale
    second = system.order == "second"

    x = np.zeros((n, R))
    vel = np.zeros((n, R))
    acc = np.zeros(R)
    total = n_burn + n_meas
    step = 0
    while step < total:
        chunk = min(config.chunk_steps, total - step)
        noise = np.stack([gen.standard_normal((chunk, n)) for gen in gens], axis=2)
        noise *= sq
        for t in range(chunk):
            if second:
                force = drift @ (x + vel)
                x = x + dt * vel
                vel = vel + dt * force + noise[t]
            else:
                x = x + dt * (drift @ x) + noise[t]
            if step + t >= n_burn:
                dev = x - x.mean(axis=0)
                acc += np.einsum("ij,ij->j", dev, dev)
        step += chunk
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > config.overflow_guard:
            raise StabilityError(
                f"state norm exceeded {config.overflow_guard:g} at step {step}; "
                f"dt={dt:.3g}, beta={system.beta}"
            )
    per_rep = acc / (n_meas * n)
    mean = float(per_rep.mean())
    stderr = float(per_rep.std(ddof=1) / math.sqrt(R))
    return SimEstimate(mean, stderr, R, dt, n_burn, n_meas, tuple(float(v) for v in per_rep))


def consensus_average_drift(system: LtiConsensusSystem, x0: np.ndarray, steps: int, dt: float) -> float:
    """Largest per-step change of the node average under noise-free first-order Euler steps."""
    x = np.array(x0, dtype=float)
    drift = -system.beta * system.laplacian
    worst = 0.0
    avg = x.mean()
    for _ in range(steps):
        x = x + dt * (drift @ x)
        new = x.mean()
        worst = max(worst, abs(new - avg))
        avg = new
    return worst
