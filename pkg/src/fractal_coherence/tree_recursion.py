"""Generation recursions for the Laplacian characteristic polynomials of
tree-like fractals, carried out exactly on the low-order coefficients.

Three polynomials are tracked per generation:

``Pbar``
    ``det(L - xI) / x``; its coefficients give ``S = -c1/c0`` and
    ``S2 = (c1/c0)**2 - 2 c2/c0``.
``Q``
    characteristic polynomial of ``L`` with one hub (an original seed node)
    removed.
``R``
    characteristic polynomial of ``L`` with both hubs removed.

Only coefficients of ``x**0 .. x**2`` are needed, so everything lives in
:class:`~fractal_coherence.truncpoly.TruncPoly`.  No floating point is used
in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .truncpoly import TruncPoly


class RecursionMismatch(AssertionError):
    """Two exact routes for the same coefficient disagree."""


@dataclass(frozen=True)
class TreeRecursionState:
    m: int
    g: int
    Pbar: TruncPoly
    Q: TruncPoly
    R: TruncPoly

    @property
    def num_nodes(self) -> int:
        return (self.m + 2) ** self.g + 1

    @property
    def S(self) -> Fraction:
        return -self.Pbar.c1 / self.Pbar.c0

    @property
    def S2(self) -> Fraction:
        ratio = self.Pbar.c1 / self.Pbar.c0
        return ratio * ratio - 2 * self.Pbar.c2 / self.Pbar.c0


def init_generation1(m: int) -> TreeRecursionState:
    """State of the star ``K_{1, m+2}``.

    ``Pbar = (x - (m+3)) (1-x)^(m+1)``, ``Q = (1 - (m+3)x + x^2)(1-x)^m``,
    ``R = (2 - (m+3)x + x^2)(1-x)^(m-1)``, expanded modulo ``x**3``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    one_minus_x = TruncPoly(1, -1)
    Pbar = TruncPoly(-(m + 3), 1) * one_minus_x ** (m + 1)
    Q = TruncPoly(1, -(m + 3), 1) * one_minus_x**m
    R = TruncPoly(2, -(m + 3), 1) * one_minus_x ** (m - 1)
    return TreeRecursionState(m, 1, Pbar, Q, R)


def advance_generation(state: TreeRecursionState) -> TreeRecursionState:
    """Apply the polynomial recursions once: generation ``g`` -> ``g + 1``."""
    m, P, Q, R = state.m, state.Pbar, state.Q, state.R
    Qm1 = Q ** (m - 1)  # Q**0 == 1 when m == 1
    Qm = Qm1 * Q
    Qm_1 = Qm * Q
    Qm_2 = Qm_1 * Q
    xR = R.times_x()
    P_next = (m + 2) * Qm_1 * P + (m + 1) * Qm_2
    Q_next = Qm_2 + (m + 1) * xR * Qm_1 + (m + 1) * xR * Qm * P
    R_next = 2 * R * Qm_1 + (m + 1) * xR * R * Qm + m * xR * R * Qm1 * P
    return TreeRecursionState(m, state.g + 1, P_next, Q_next, R_next)


def tree_states(m: int, g: int) -> list[TreeRecursionState]:
    """States for generations ``1..g`` (inclusive)."""
    if g < 1:
        raise ValueError(f"recursion starts at generation 1, got g={g}")
    states = [init_generation1(m)]
    while states[-1].g < g:
        states.append(advance_generation(states[-1]))
    return states


def tree_state(m: int, g: int) -> TreeRecursionState:
    if g < 1:
        raise ValueError(f"recursion starts at generation 1, got g={g}")
    state = init_generation1(m)
    while state.g < g:
        state = advance_generation(state)
    return state


def tree_S(m: int, g: int) -> Fraction:
    """Exact ``sum 1/lambda`` over the nonzero Laplacian eigenvalues."""
    if g == 0:
        return Fraction(1, 2)
    return tree_state(m, g).S


def tree_S2(m: int, g: int) -> Fraction:
    """Exact ``sum 1/lambda**2`` over the nonzero Laplacian eigenvalues."""
    if g == 0:
        return Fraction(1, 4)
    return tree_state(m, g).S2


# -- explicit scalar recursions for individual coefficients ------------------


def scalar_step(m: int, s: TreeRecursionState) -> dict[str, Fraction]:
    """Next-generation coefficients from the explicit scalar recursions.

    ``p0`` uses the constant term of the ``Pbar`` recursion,
    ``(m+2) q0^(m+1) p0 + (m+1) q0^(m+2)``; ``r1``, ``p2`` and ``q2`` follow
    the explicit coefficient recursions term by term.  ``p1`` and ``q1`` are
    read from the current state.
    """
    p0, p1, p2 = s.Pbar.coeffs
    q0, q1, q2 = s.Q.coeffs
    r0, r1 = s.R.c0, s.R.c1
    qm1 = q0 ** (m - 1)
    qm = q0**m
    qm_1 = q0 ** (m + 1)
    qm_2 = q0 ** (m + 2)
    out = {
        "p0": (m + 2) * qm_1 * p0 + (m + 1) * qm_2,
        "q0": qm_2,
        "r0": 2 * r0 * qm_1,
        "r1": (
            2 * qm_1 * r1
            + 2 * (m + 1) * r0 * qm * q1
            + (m + 1) * r0**2 * qm
            + m * r0**2 * qm1 * p0
        ),
        "p2": (
            (m + 2) * qm_1 * p2
            + (m + 1) * (m + 2) * qm * q2 * p0
            + Fraction(m * (m + 1) * (m + 2), 2) * qm1 * q1**2 * p0
            + (m + 1) * (m + 2) * qm * q1 * p1
            + (m + 1) * (m + 2) * qm_1 * q2
            + Fraction((m + 1) ** 2 * (m + 2), 2) * qm * q1**2
        ),
        "q2": (
            (m + 2) * qm_1 * q2
            + Fraction((m + 1) * (m + 2), 2) * qm * q1**2
            + (m + 1) * r1 * qm_1
            + (m + 1) ** 2 * r0 * qm * q1
            + (m + 1) * qm * p0 * r1
            + m * (m + 1) * r0 * p0 * qm1 * q1
            + (m + 1) * r0 * qm * p1
        ),
    }
    return out


def initial_scalars(m: int) -> dict[str, Fraction]:
    """Closed-form generation-1 coefficients."""
    return {
        "p0": Fraction(-m - 3),
        "q0": Fraction(1),
        "r0": Fraction(2),
        "p2": Fraction(-(m + 1)) - Fraction((m + 3) * (m + 1) * m, 2),
        "q2": Fraction(3, 2) * m * m + Fraction(5, 2) * m + 1,
        "r1": Fraction(-3 * m - 1),
    }


LEADING_ORDERS = {
    # coefficient -> (sign, power of 2 per generation, power of (m+2) per generation)
    "p0": (-1, 0, 1),
    "p1": (1, 1, 2),
    "p2": (-1, 2, 3),
    "r1": (-1, 2, 1),
}


def leading_order_ratio(state: TreeRecursionState, name: str) -> float:
    """Coefficient divided by its claimed leading-order growth term."""
    sign, a, b = LEADING_ORDERS[name]
    value = {
        "p0": state.Pbar.c0,
        "p1": state.Pbar.c1,
        "p2": state.Pbar.c2,
        "r1": state.R.c1,
    }[name]
    g = state.g
    scale = sign * 2 ** (a * g) * (state.m + 2) ** (b * g)
    return float(Fraction(value) / scale)


@dataclass
class CoefficientCheck:
    m: int
    g: int
    ratios: dict[str, list[float]]
    limits: dict[str, float]

    def rel_dev_at(self, g: int) -> dict[str, float]:
        return {
            k: abs(self.ratios[k][g - 1] / self.limits[k] - 1.0) for k in self.ratios
        }


def coefficient_recursion_check(
    m: int, g: int, limit_generation: int = 60, ratio_tolerance: float = 0.05
) -> CoefficientCheck:
    """Check the scalar coefficient recursions against the polynomial route.

    For every generation ``1..g-1`` the scalar recursions for ``p0, q0, r0,
    r1, p2, q2`` are evaluated from the exact state and compared with the
    next state.  The leading-order ratios of ``p0, p1, p2, r1`` are then
    tabulated; their limits are estimated at ``limit_generation``, and at
    generation ``g`` each ratio must be positive and within
    ``ratio_tolerance`` of its limit.

    Raises
    ------
    RecursionMismatch
        Naming the generation and coefficient that disagrees.
    """
    if g < 2:
        raise ValueError("coefficient check needs g >= 2")
    init = initial_scalars(m)
    states = tree_states(m, max(g, limit_generation))
    s1 = states[0]
    got1 = {"p0": s1.Pbar.c0, "q0": s1.Q.c0, "r0": s1.R.c0,
            "p2": s1.Pbar.c2, "q2": s1.Q.c2, "r1": s1.R.c1}
    for key, val in init.items():
        if got1[key] != val:
            raise RecursionMismatch(f"generation 1: {key} = {got1[key]}, closed form gives {val}")

    for cur, nxt in zip(states[: g - 1], states[1:g]):
        pred = scalar_step(m, cur)
        actual = {
            "p0": nxt.Pbar.c0,
            "q0": nxt.Q.c0,
            "r0": nxt.R.c0,
            "r1": nxt.R.c1,
            "p2": nxt.Pbar.c2,
            "q2": nxt.Q.c2,
        }
        for key, val in pred.items():
            if val != actual[key]:
                raise RecursionMismatch(
                    f"m={m} generation {nxt.g}: scalar recursion gives {key} = {val}, "
                    f"polynomial route gives {actual[key]}"
                )

    ratios = {k: [leading_order_ratio(s, k) for s in states] for k in LEADING_ORDERS}
    limits = {k: r[-1] for k, r in ratios.items()}
    check = CoefficientCheck(m, g, {k: r[:g] for k, r in ratios.items()}, limits)
    for key, dev in check.rel_dev_at(g).items():
        if limits[key] <= 0 or not math.isfinite(limits[key]):
            raise RecursionMismatch(f"m={m}: {key} leading-order constant {limits[key]} is not positive")
        if dev > ratio_tolerance:
            raise RecursionMismatch(
                f"m={m} generation {g}: {key} ratio {check.ratios[key][g - 1]:.6g} is "
                f"{dev:.2%} from its limit {limits[key]:.6g}"
            )
    return check


def tree_coherence_exponents(m: int) -> tuple[float, float]:
    """Predicted growth exponents of (H_FO, H_SO) in ``N`` for parameter ``m``."""
    inv_df = math.log(2) / math.log(m + 2)
    return inv_df, 1.0 + 2.0 * inv_df
