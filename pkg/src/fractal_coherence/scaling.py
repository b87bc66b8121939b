"""Power-law exponent fits and empirical dimension estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, GraphError, bfs_distances, require_connected
from .spectral import SpectrumSummary


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line through ``(log N, log value)``."""

    exponent: float
    log_prefactor: float
    r_squared: float
    points: tuple[tuple[float, float], ...]

    def predict(self, n: float) -> float:
        return math.exp(self.log_prefactor) * n**self.exponent

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "log_prefactor": self.log_prefactor,
            "r_squared": self.r_squared,
            "points": [list(p) for p in self.points],
        }


def _r_squared(y: np.ndarray, yhat: np.ndarray) -> float:
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return max(0.0, 1.0 - ss_res / ss_tot)


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept), _r_squared(y, slope * x + intercept)


def fit_exponent(points: Iterable[tuple[float, float]]) -> ScalingFit:
    """Fit ``value ~ C * N**exponent`` by ordinary least squares in log-log space.

    Raises
    ------
    ValueError
        With fewer than three points or any nonpositive coordinate.
    """
    pts = tuple((float(n), float(val)) for n, val in points)
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points for an exponent fit, got {len(pts)}")
    arr = np.array(pts)
    if np.any(arr <= 0):
        raise ValueError("exponent fit needs strictly positive N and values")
    slope, intercept, r2 = _linear_fit(np.log(arr[:, 0]), np.log(arr[:, 1]))
    return ScalingFit(slope, intercept, r2, pts)


def leave_one_out_spread(points: Sequence[tuple[float, float]]) -> float:
    """Max minus min exponent over the fits that each drop one point."""
    if len(points) < 4:
        raise ValueError("leave-one-out spread needs at least 4 points")
    ex = [fit_exponent([p for j, p in enumerate(points) if j != i]).exponent for i in range(len(points))]
    return max(ex) - min(ex)


@dataclass(frozen=True)
class LogLinearFit:
    """Least-squares line ``value = slope * log N + intercept``."""

    slope: float
    intercept: float
    r_squared: float


def fit_log_linear(points: Iterable[tuple[float, float]]) -> LogLinearFit:
    arr = np.array([(float(n), float(v)) for n, v in points])
    if len(arr) < 3:
        raise ValueError("need at least 3 points")
    slope, intercept, r2 = _linear_fit(np.log(arr[:, 0]), arr[:, 1])
    return LogLinearFit(slope, intercept, r2)


@dataclass(frozen=True)
class GrowthComparison:
    """Power-law versus logarithmic fit of the same data.

    Both fits are scored by the relative RMS error of their predicted values,
    so the comparison is made on a common scale.
    """

    power: ScalingFit
    log_linear: LogLinearFit
    power_rel_rms: float
    log_rel_rms: float

    @property
    def prefers_logarithmic(self) -> bool:
        return self.log_rel_rms < self.power_rel_rms


def compare_power_vs_log(points: Sequence[tuple[float, float]]) -> GrowthComparison:
    pf = fit_exponent(points)
    lf = fit_log_linear(points)
    n = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    pow_pred = np.exp(pf.log_prefactor) * n**pf.exponent
    log_pred = lf.slope * np.log(n) + lf.intercept
    rms = lambda pred: float(np.sqrt(np.mean(((pred - y) / y) ** 2)))  # noqa: E731
    return GrowthComparison(pf, lf, rms(pow_pred), rms(log_pred))


# -- fractal dimension from ball growth --------------------------------------


@dataclass(frozen=True)
class BallGrowthProfile:
    """``sizes[r]`` is the number of nodes within hop distance ``r`` of ``center``."""

    center: int
    radii: np.ndarray
    sizes: np.ndarray
    diameter: int

    @property
    def num_nodes(self) -> int:
        return int(self.sizes[-1])


def default_center(g: Graph) -> int:
    """Lowest-labelled node of maximum degree."""
    return int(np.argmax(g.degrees()))


def graph_diameter(g: Graph) -> int:
    """Exact diameter by breadth-first search from every node (``O(N M)``).

    For trees a double sweep is exact and is used instead.
    """
    require_connected(g)
    if g.num_edges == g.num_nodes - 1:
        far = int(np.argmax(bfs_distances(g, 0)))
        return int(bfs_distances(g, far).max())
    return max(int(bfs_distances(g, s).max()) for s in range(g.num_nodes))


def ball_growth(g: Graph, center: int | None = None) -> BallGrowthProfile:
    require_connected(g)
    c = default_center(g) if center is None else int(center)
    dist = bfs_distances(g, c)
    counts = np.bincount(dist)
    sizes = np.cumsum(counts)
    return BallGrowthProfile(c, np.arange(len(sizes)), sizes, graph_diameter(g))


def estimate_fractal_dimension(profile: BallGrowthProfile, r_min: int = 2, r_max: int | None = None) -> float:
    """Slope of ``log |B(r)|`` against ``log r`` over ``r_min <= r <= diameter/2``."""
    hi = profile.diameter // 2 if r_max is None else r_max
    hi = min(hi, len(profile.sizes) - 1)
    if profile.diameter < 8 or hi - r_min < 2:
        raise GraphError(
            f"insufficient scaling range: diameter {profile.diameter}, window [{r_min}, {hi}]"
        )
    r = profile.radii[r_min : hi + 1].astype(float)
    b = profile.sizes[r_min : hi + 1].astype(float)
    slope, _, _ = _linear_fit(np.log(r), np.log(b))
    return slope


def fractal_dimension_sensitivity(g: Graph, centers: int = 3, seed: int = 0) -> list[float]:
    """Ball-growth estimates from ``centers`` random centers."""
    rng = np.random.default_rng(seed)
    picks = rng.choice(g.num_nodes, size=min(centers, g.num_nodes), replace=False)
    diam = graph_diameter(g)
    out = []
    for c in picks:
        dist = bfs_distances(g, int(c))
        sizes = np.cumsum(np.bincount(dist))
        prof = BallGrowthProfile(int(c), np.arange(len(sizes)), sizes, diam)
        out.append(estimate_fractal_dimension(prof))
    return out


# -- spectral dimension from the eigenvalue counting function ----------------


@dataclass(frozen=True)
class SpectralDimensionFit:
    d_s: float
    x_low: float
    x_high: float
    window_points: int
    r_squared: float


def spectral_dimension_fit(spec: SpectrumSummary, fraction: float = 0.05) -> SpectralDimensionFit:
    """Fit ``log rho(x)`` against ``log x`` on ``[lam_2, lam_k]``, ``k = ceil(fraction N)``.

    The counting function is sampled at the distinct eigenvalues in the
    window, where it jumps; ``d_s`` is twice the slope.
    """
    ev = spec.eigenvalues
    n = len(ev)
    k = max(2, math.ceil(fraction * n))
    lo, hi = ev[1], ev[k - 1]
    window = ev[1:k]
    xs = np.unique(np.round(window, 12))
    if len(xs) < 3 or hi <= lo:
        raise GraphError(f"degenerate spectral window [{lo:.3g}, {hi:.3g}] with {len(xs)} distinct values")
    mags = np.where(ev <= spec.zero_tolerance, 0.0, ev)
    rho = np.searchsorted(mags, xs + 1e-9 * max(1.0, hi), side="right").astype(float)
    slope, _, r2 = _linear_fit(np.log(xs), np.log(rho))
    return SpectralDimensionFit(2.0 * slope, float(lo), float(hi), len(xs), r2)


def estimate_spectral_dimension(spec: SpectrumSummary, fraction: float = 0.05) -> float:
    return spectral_dimension_fit(spec, fraction).d_s


# -- coherence scaling table --------------------------------------------------


def predicted_exponents_from_df(d_f: float) -> tuple[float, float]:
    return 1.0 / d_f, 1.0 + 2.0 / d_f


def predicted_exponents_from_ds(d_s: float) -> tuple[float, float]:
    return 2.0 / d_s - 1.0, 4.0 / d_s - 1.0


@dataclass
class TableRow:
    network: str
    family: str
    param: int | None
    d_f: float
    d_s: float
    h_fo_exponent_df: float | None
    h_so_exponent_df: float | None
    h_fo_exponent_ds: float | None
    h_so_exponent_ds: float | None
    h_fo_fit: float | None = None
    h_so_fit: float | None = None
    h_fo_r2: float | None = None
    h_so_r2: float | None = None
    note: str = ""
    generations: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)
