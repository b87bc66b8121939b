"""Eigenvalue-descent sums for generalized Vicsek fractals.

Every nonzero eigenvalue ``lam`` of generation ``g`` spawns three eigenvalues
of generation ``g + 1``, the roots of ``x (x - 3) (x - v - 1) = lam``.  Vieta
on that cubic gives, for the children,

    sum 1/child     = 3 (v+1) / lam
    sum 1/child**2  = (3 (v+1))**2 / lam**2 - 2 (v+4) / lam

which turns the reciprocal sums over the spectrum into exact geometric-type
recursions.  Nondegenerate eigenvalues descend from ``v + 1`` (the top
eigenvalue of the star); degenerate ones from the eigenvalue 1 whose
multiplicity in generation ``k`` is ``delta(v, k)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class SpectrumInvariantError(RuntimeError):
    pass


def _growth(v: int) -> int:
    return 3 * (v + 1)


def delta(v: int, k: int) -> int:
    """Multiplicity of the eigenvalue 1 in generation ``k``."""
    if v < 2 or k < 1:
        raise ValueError(f"delta needs v >= 2 and k >= 1, got v={v}, k={k}")
    return (v - 2) * (v + 1) ** (k - 1) + 1


def gamma_nd(v: int, i: int) -> Fraction:
    """Sum of reciprocals of the ``i``-th descendants of ``v + 1``: ``3^i (v+1)^(i-1)``."""
    return Fraction(3**i * (v + 1) ** i, v + 1)


def gamma_deg(v: int, i: int) -> Fraction:
    """Sum of reciprocals of the ``i``-th descendants of one eigenvalue 1."""
    return Fraction(_growth(v) ** i)


def _theta(v: int, i: int, theta0: Fraction, gamma) -> Fraction:
    a2 = _growth(v) ** 2
    theta = theta0
    for j in range(1, i + 1):
        theta = a2 * theta - 2 * (v + 4) * gamma(v, j - 1)
    return theta


def theta_nd(v: int, i: int) -> Fraction:
    """Sum of squared reciprocals of the ``i``-th descendants of ``v + 1``."""
    if i < 0:
        raise ValueError("i must be >= 0")
    return _theta(v, i, Fraction(1, (v + 1) ** 2), gamma_nd)


def theta_deg(v: int, i: int) -> Fraction:
    """Sum of squared reciprocals of the ``i``-th descendants of one eigenvalue 1."""
    if i < 0:
        raise ValueError("i must be >= 0")
    return _theta(v, i, Fraction(1), gamma_deg)


# closed forms solved from the recursions above; a = 3(v+1)


def theta_nd_closed(v: int, i: int) -> Fraction:
    a = _growth(v)
    return Fraction(a ** (2 * i), (v + 1) ** 2) - Fraction(
        2 * (v + 4) * (a ** (2 * i) - a**i), a * (v + 1) * (3 * v + 2)
    )


def theta_deg_closed(v: int, i: int) -> Fraction:
    a = _growth(v)
    return Fraction(a ** (2 * i)) - Fraction(2 * (v + 4) * (a ** (2 * i) - a**i), a * (3 * v + 2))


def nondegenerate_inverse_sum_closed(v: int, g: int) -> Fraction:
    return Fraction(_growth(v) ** g - 1, (v + 1) * (3 * v + 2))


def degenerate_inverse_sum_closed(v: int, g: int) -> Fraction:
    return Fraction((v - 2) * (v + 1) ** (g - 1) * (3**g - 1), 2) + Fraction(
        _growth(v) ** g - 1, 3 * v + 2
    )


def S_closed(v: int, g: int) -> Fraction:
    """Closed form for ``S_g``, the sum of the two reciprocal sums above."""
    return Fraction((v - 2) * (v + 1) ** (g - 1) * (3**g - 1), 2) + Fraction(
        (v + 2) * (_growth(v) ** g - 1), (v + 1) * (3 * v + 2)
    )


@dataclass
class VicsekSums:
    v: int
    g: int
    gamma_nd: list[Fraction] = field(default_factory=list)
    gamma_deg: list[Fraction] = field(default_factory=list)
    theta_nd: list[Fraction] = field(default_factory=list)
    theta_deg: list[Fraction] = field(default_factory=list)
    delta: list[int] = field(default_factory=list)
    S_g: Fraction = Fraction(0)
    S2_g: Fraction = Fraction(0)

    @property
    def num_nodes(self) -> int:
        return (self.v + 1) ** self.g


def vicsek_sums(v: int, g: int) -> VicsekSums:
    """All descent sums for generation ``g``; ``delta[k-1]`` is ``delta(v, k)``."""
    if v < 2 or g < 1:
        raise ValueError(f"need v >= 2 and g >= 1, got v={v}, g={g}")
    a2 = _growth(v) ** 2
    gn = [gamma_nd(v, i) for i in range(g)]
    gd = [gamma_deg(v, i) for i in range(g)]
    tn = [Fraction(1, (v + 1) ** 2)]
    td = [Fraction(1)]
    for i in range(1, g):
        tn.append(a2 * tn[-1] - 2 * (v + 4) * gn[i - 1])
        td.append(a2 * td[-1] - 2 * (v + 4) * gd[i - 1])
    dl = [delta(v, k) for k in range(1, g + 1)]
    S = sum(gn) + sum(dl[g - i - 1] * gd[i] for i in range(g))
    S2 = sum(tn) + sum(dl[g - i - 1] * td[i] for i in range(g))
    return VicsekSums(v, g, gn, gd, tn, td, dl, Fraction(S), Fraction(S2))


def vicsek_S(v: int, g: int) -> Fraction:
    """Exact ``sum 1/lambda`` over nonzero eigenvalues, by direct summation.

    Raises ``AssertionError`` if it disagrees with the combined closed form.
    """
    S = vicsek_sums(v, g).S_g
    closed = S_closed(v, g)
    assert S == closed, f"direct sum {S} != closed form {closed} at v={v}, g={g}"
    return S


def vicsek_S2(v: int, g: int) -> Fraction:
    return vicsek_sums(v, g).S2_g


def vicsek_coherence_exponents(v: int) -> tuple[float, float]:
    inv_df = math.log(3) / math.log(v + 1)
    return inv_df, 1.0 + 2.0 * inv_df


# -- spectrum reconstruction -------------------------------------------------


def cubic_children(parent: float, v: int) -> np.ndarray:
    """The three roots of ``x^3 - (v+4) x^2 + 3(v+1) x - parent``, ascending.

    Roots come from the companion matrix and get one Newton step each.
    """
    if parent < 0:
        raise ValueError(f"parent eigenvalue must be >= 0, got {parent}")
    coeffs = np.array([1.0, -(v + 4.0), 3.0 * (v + 1.0), -float(parent)])
    roots = np.linalg.eigvals(np.array([
        [v + 4.0, -3.0 * (v + 1.0), float(parent)],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ]))
    scale = max(1.0, np.max(np.abs(roots)))
    if np.max(np.abs(roots.imag)) > 1e-7 * scale:
        raise SpectrumInvariantError(f"complex children for parent {parent}, v={v}: {roots}")
    r = np.sort(roots.real)
    deriv = np.polyder(coeffs)
    for k in range(3):
        d = np.polyval(deriv, r[k])
        if abs(d) > 1e-12:
            r[k] -= np.polyval(coeffs, r[k]) / d
    return np.sort(r)


@dataclass
class VicsekSpectrum:
    """Laplacian spectrum of one Vicsek generation as ``{eigenvalue: multiplicity}``.

    Keys are floats; values derived from the same parent chain are bitwise
    equal, so the dictionary collapses exact duplicates.
    """

    v: int
    g: int
    multiplicities: dict[float, int]

    @property
    def size(self) -> int:
        return sum(self.multiplicities.values())

    def multiplicity_of(self, value: float, tol: float = 1e-9) -> int:
        return sum(c for lam, c in self.multiplicities.items() if abs(lam - value) <= tol)

    def sorted_values(self) -> np.ndarray:
        out = np.repeat(
            np.array(list(self.multiplicities.keys())),
            np.array(list(self.multiplicities.values())),
        )
        return np.sort(out)

    def inverse_sums(self) -> tuple[float, float]:
        lam = np.array([k for k in self.multiplicities if k > 1e-12])
        cnt = np.array([self.multiplicities[k] for k in lam])
        return float(np.sum(cnt / lam)), float(np.sum(cnt / lam**2))


def reconstruct_spectrum(v: int, g: int) -> VicsekSpectrum:
    """Enumerate the spectrum of generation ``g`` from the star spectrum.

    Generation ``k+1`` consists of 0, ``v + 1``, the eigenvalue 1 with
    multiplicity ``delta(v, k+1)``, and the three children of every nonzero
    eigenvalue of generation ``k`` (inheriting the parent's multiplicity).
    Descendants of ``v + 1`` and of 1 at depth ``i`` therefore carry the
    multiplicities used by the reciprocal sums; eigenvalues first created at
    generation ``k`` are *not* carried into ``k + 1`` themselves.
    """
    if v < 2 or g < 1:
        raise ValueError(f"need v >= 2 and g >= 1, got v={v}, g={g}")
    spec: Counter[float] = Counter({0.0: 1, float(v + 1): 1})
    spec[1.0] += v - 1
    n = v + 1
    for k in range(1, g):
        nxt: Counter[float] = Counter({0.0: 1, float(v + 1): 1})
        nxt[1.0] += delta(v, k + 1)
        for lam, mult in spec.items():
            if lam == 0.0:
                continue
            for child in cubic_children(lam, v):
                nxt[float(child)] += mult
        n *= v + 1
        spec = nxt
        total = sum(spec.values())
        if total != n:
            raise SpectrumInvariantError(f"multiplicity total {total} != N = {n}")
    out = VicsekSpectrum(v, g, dict(spec))
    ones = out.multiplicity_of(1.0)
    if ones != delta(v, g):
        raise SpectrumInvariantError(
            f"eigenvalue 1 has multiplicity {ones}, expected delta = {delta(v, g)}"
        )
    return out
