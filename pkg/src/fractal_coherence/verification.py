"""Named identity checks with pass/fail outcomes, shared by ``verify`` and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import vicsek_recursion as vr
from .coherence import effective_resistance_total, hitting_time_matrix, resistance_matrix, wiener_index
from .generators import tree_like, vicsek
from .graph import Graph
from .spectral import spectrum
from .tree_recursion import (
    RecursionMismatch,
    coefficient_recursion_check,
    init_generation1,
    initial_scalars,
    tree_states,
)


RATIO_CHECK_MIN_GENERATION = 6


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    informational: bool = False

    def line(self) -> str:
        tag = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        return f"[{tag}] {self.name}" + (f": {self.detail}" if self.detail else "")


def all_passed(checks: list[Check]) -> bool:
    return all(c.passed for c in checks if not c.informational)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def child_sum_checks(v: int, parents: np.ndarray, tol: float = 1e-10) -> tuple[float, float]:
    """Worst relative error of the two child-sum identities over ``parents``."""
    worst1 = worst2 = 0.0
    a = 3 * (v + 1)
    for lam in parents:
        kids = vr.cubic_children(float(lam), v)
        s1, s2 = np.sum(1 / kids), np.sum(1 / kids**2)
        worst1 = max(worst1, _rel(s1, a / lam))
        worst2 = max(worst2, _rel(s2, a * a / lam**2 - 2 * (v + 4) / lam))
        worst1 = max(worst1, _rel(np.sum(kids), v + 4), _rel(np.prod(kids), lam))
    return worst1, worst2


def verify_vicsek(v: int, g_max: int, eigen_max_nodes: int = 3000) -> list[Check]:
    checks: list[Check] = []
    for g in range(1, g_max + 1):
        sums = vr.vicsek_sums(v, g)
        nd = sum(sums.gamma_nd)
        checks.append(Check(
            f"v={v} g={g} nondegenerate reciprocal sum equals closed form",
            nd == vr.nondegenerate_inverse_sum_closed(v, g), f"{nd}",
        ))
        deg = sums.S_g - nd
        checks.append(Check(
            f"v={v} g={g} degenerate reciprocal sum equals closed form",
            deg == vr.degenerate_inverse_sum_closed(v, g), f"{deg}",
        ))
        checks.append(Check(
            f"v={v} g={g} S_g equals combined closed form",
            sums.S_g == vr.S_closed(v, g), f"S_g = {sums.S_g}",
        ))
        i = g - 1
        checks.append(Check(
            f"v={v} i={i} theta recursions equal closed forms",
            sums.theta_nd[i] == vr.theta_nd_closed(v, i) and sums.theta_deg[i] == vr.theta_deg_closed(v, i),
        ))

        n = (v + 1) ** g
        if n > eigen_max_nodes:
            checks.append(Check(f"v={v} g={g} eigensolve comparisons", True,
                                f"skipped, N = {n} > {eigen_max_nodes}", informational=True))
            continue
        sp = spectrum(vicsek(v, g))
        eS, eS2 = _rel(float(sums.S_g), sp.S), _rel(float(sums.S2_g), sp.S2)
        checks.append(Check(f"v={v} g={g} S and S2 match eigensolve (rel 1e-9)",
                            eS <= 1e-9 and eS2 <= 1e-9, f"rel err {eS:.2e}, {eS2:.2e}"))
        ones = int(np.sum(np.abs(sp.eigenvalues - 1.0) <= 1e-8))
        checks.append(Check(f"v={v} g={g} multiplicity of eigenvalue 1 equals delta",
                            ones == vr.delta(v, g), f"{ones} vs {vr.delta(v, g)}"))
        c1, c2 = child_sum_checks(v, sp.nonzero)
        checks.append(Check(f"v={v} g={g} child-sum identities over all nonzero eigenvalues (rel 1e-10)",
                            c1 <= 1e-10 and c2 <= 1e-10, f"worst {c1:.2e}, {c2:.2e}"))
        try:
            rec = vr.reconstruct_spectrum(v, g)
            diff = float(np.max(np.abs(rec.sorted_values() - sp.eigenvalues)))
            checks.append(Check(f"v={v} g={g} reconstructed spectrum equals eigensolve (abs 1e-6)",
                                diff <= 1e-6, f"max |diff| = {diff:.2e}"))
        except vr.SpectrumInvariantError as exc:
            checks.append(Check(f"v={v} g={g} reconstructed spectrum equals eigensolve", False, str(exc)))
    return checks


def verify_tree(m: int, g_max: int, eigen_max_nodes: int = 3000) -> list[Check]:
    checks: list[Check] = []
    s1 = init_generation1(m)
    init = initial_scalars(m)
    got = {"p0": s1.Pbar.c0, "q0": s1.Q.c0, "r0": s1.R.c0, "p2": s1.Pbar.c2, "q2": s1.Q.c2, "r1": s1.R.c1}
    checks.append(Check(f"m={m} generation-1 coefficients match closed forms", got == init,
                        ", ".join(f"{k}={v}" for k, v in got.items())))
    if g_max >= 2:
        # the leading-order ratios are asymptotic; they are enforced from g = 6 on
        enforce = g_max >= RATIO_CHECK_MIN_GENERATION
        try:
            cc = coefficient_recursion_check(m, g_max, ratio_tolerance=0.05 if enforce else math.inf)
            dev = cc.rel_dev_at(g_max)
            checks.append(Check(f"m={m} scalar coefficient recursions equal polynomial route up to g={g_max}", True))
            checks.append(Check(
                f"m={m} leading-order ratios at g={g_max} within 5% of limits",
                all(d <= 0.05 for d in dev.values()),
                ", ".join(f"{k} {d:.2%}" for k, d in dev.items()),
                informational=not enforce,
            ))
        except RecursionMismatch as exc:
            checks.append(Check(f"m={m} coefficient recursions / leading orders", False, str(exc)))
    for st in tree_states(m, g_max):
        checks.append(Check(f"m={m} g={st.g} p0 = -N and q0 = 1",
                            st.Pbar.c0 == -st.num_nodes and st.Q.c0 == 1))
        if st.num_nodes > eigen_max_nodes:
            continue
        sp = spectrum(tree_like(m, st.g))
        eS, eS2 = _rel(float(st.S), sp.S), _rel(float(st.S2), sp.S2)
        checks.append(Check(f"m={m} g={st.g} S and S2 match eigensolve (rel 1e-9)",
                            eS <= 1e-9 and eS2 <= 1e-9, f"rel err {eS:.2e}, {eS2:.2e}"))
    return checks


def verify_identities(g: Graph, tol: float = 1e-9) -> list[Check]:
    """Resistance, hitting-time and (for trees) Wiener identities on one graph."""
    sp = spectrum(g)
    n, m = g.num_nodes, g.num_edges
    checks = []
    R = effective_resistance_total(g)
    checks.append(Check(f"{g.label}: R = 2 N S", _rel(R, 2 * n * sp.S) <= tol, f"R = {R:.12g}"))
    F = hitting_time_matrix(g)
    r = resistance_matrix(g)
    sym = np.max(np.abs(F + F.T - 2 * m * r) / np.maximum(2 * m * r, 1e-300) * (1 - np.eye(n)))
    checks.append(Check(f"{g.label}: f_ij + f_ji = 2 M r_ij", sym <= tol, f"worst rel {sym:.2e}"))
    mean_f = F.sum() / (n * (n - 1))
    checks.append(Check(f"{g.label}: mean hitting time = 2 M S / (N-1)",
                        _rel(mean_f, 2 * m * sp.S / (n - 1)) <= tol, f"F = {mean_f:.12g}"))
    if g.is_tree():
        W = wiener_index(g)
        checks.append(Check(f"{g.label}: Wiener index = N S (tree)", _rel(W, n * sp.S) <= tol, f"W = {W}"))
    return checks
