"""Deterministic constructions of the fractal families and lattice baselines.

Generation convention for the tree-like family: ``g = 0`` is the two-node
seed and ``g = 1`` is the star with ``m + 2`` leaves, so node counts are
``(m + 2)**g + 1`` for every ``g >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import CapExceededError, Graph, GraphError, build_graph, max_nodes

FAMILIES = ("tree", "vicsek", "ring", "path", "torus")


@dataclass(frozen=True)
class FamilySpec:
    """A graph family plus its size parameter.

    ``param`` is ``m`` for ``tree`` and ``v`` for ``vicsek`` (unused otherwise).
    ``size`` is the generation ``g`` for the fractal families, the node count
    for ``ring``/``path`` and the side length for ``torus``.
    """

    family: str
    size: int
    param: int | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise GraphError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family in ("tree", "vicsek") and self.param is None:
            raise GraphError(f"family {self.family!r} needs a parameter")

    @property
    def num_nodes(self) -> int:
        if self.family == "tree":
            return tree_like_num_nodes(self.param, self.size)
        if self.family == "vicsek":
            return vicsek_num_nodes(self.param, self.size)
        if self.family == "torus":
            return self.size * self.size
        return self.size

    def build(self) -> Graph:
        if self.family == "tree":
            return tree_like(self.param, self.size)
        if self.family == "vicsek":
            return vicsek(self.param, self.size)
        if self.family == "ring":
            return ring(self.size)
        if self.family == "path":
            return path(self.size)
        return torus2d(self.size)


@dataclass(frozen=True)
class DimensionInfo:
    d_f: float
    d_s: float


def tree_like_num_nodes(m: int, g: int) -> int:
    return (m + 2) ** g + 1


def vicsek_num_nodes(v: int, g: int) -> int:
    return (v + 1) ** g


def _check_cap(n: int, what: str) -> None:
    if n > max_nodes():
        raise CapExceededError(
            f"{what} would have {n} nodes, above the cap of {max_nodes()} "
            "(set FRACTAL_COHERENCE_MAX_NODES to raise it)"
        )


def tree_like(m: int, g: int) -> Graph:
    """Tree-like fractal with ``m`` leaves per subdivision point.

    Every iteration replaces each edge ``(i, j)`` by ``(i, k), (k, j)`` for a
    fresh node ``k`` and hangs ``m`` fresh leaves on ``k``.  Edges are
    processed in sorted order and new labels are handed out consecutively,
    so the labelling is canonical.
    """
    if m < 1:
        raise GraphError(f"tree-like fractal needs m >= 1, got {m}")
    if g < 0:
        raise GraphError(f"generation must be >= 0, got {g}")
    n_final = tree_like_num_nodes(m, g)
    _check_cap(n_final, f"tree-like fractal (m={m}, g={g})")

    edges = [(0, 1)]
    n = 2
    for _ in range(g):
        new_edges = []
        for i, j in edges:
            k = n
            new_edges.append((i, k))
            new_edges.append((j, k))
            new_edges.extend((k, k + 1 + t) for t in range(m))
            n += m + 1
        edges = new_edges
    assert n == n_final
    return build_graph(n, edges, label=f"tree(m={m},g={g})")


def vicsek(v: int, g: int) -> Graph:
    """Generalized Vicsek fractal with ``v`` arms.

    Generation 1 is the star ``K_{1,v}`` whose leaves are the corners.  In
    generation ``g + 1`` copy ``c`` of ``G_g`` occupies labels
    ``c*N_g .. (c+1)*N_g - 1`` with copy 0 in the middle.  Outer copy ``k+1``
    hangs off corner ``k`` of the middle copy through its own corner
    ``(k + v//2) % v`` and contributes its corner ``k`` as corner ``k`` of the
    new graph.  Every corner pair of ``G_g`` is equivalent under automorphisms,
    so any other choice of attaching corner gives an isomorphic graph.
    """
    if v < 2:
        raise GraphError(f"Vicsek fractal needs v >= 2, got {v}")
    if g < 1:
        raise GraphError(f"Vicsek generation must be >= 1, got {g}")
    _check_cap(vicsek_num_nodes(v, g), f"Vicsek fractal (v={v}, g={g})")

    edges = [(0, k) for k in range(1, v + 1)]
    corners = list(range(1, v + 1))
    n = v + 1
    for _ in range(g - 1):
        new_edges = list(edges)
        for c in range(1, v + 1):
            off = c * n
            new_edges.extend((a + off, b + off) for a, b in edges)
        new_corners = []
        for k in range(v):
            off = (k + 1) * n
            new_edges.append((corners[k], corners[(k + v // 2) % v] + off))
            new_corners.append(corners[k] + off)
        edges, corners = new_edges, new_corners
        n *= v + 1
    return build_graph(n, edges, label=f"vicsek(v={v},g={g})")


def vicsek_corners(v: int, g: int) -> list[int]:
    """Corner labels of :func:`vicsek` ``(v, g)`` in corner-index order."""
    corners = list(range(1, v + 1))
    n = v + 1
    for _ in range(g - 1):
        corners = [corners[k] + (k + 1) * n for k in range(v)]
        n *= v + 1
    return corners


def ring(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"ring needs n >= 3, got {n}")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)], label=f"ring(n={n})")


def path(n: int) -> Graph:
    if n < 2:
        raise GraphError(f"path needs n >= 2, got {n}")
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], label=f"path(n={n})")


def torus2d(side: int) -> Graph:
    """``side x side`` grid with wraparound; node ``(r, c)`` has label ``r*side + c``."""
    if side < 3:
        # side 2 would create duplicate edges under wraparound
        raise GraphError(f"2-D torus needs side >= 3, got {side}")
    edges = []
    for r in range(side):
        for c in range(side):
            u = r * side + c
            edges.append((u, r * side + (c + 1) % side))
            edges.append((u, ((r + 1) % side) * side + c))
    return build_graph(side * side, edges, label=f"torus(side={side})")


def star(leaves: int) -> Graph:
    return build_graph(leaves + 1, [(0, k) for k in range(1, leaves + 1)], label=f"star({leaves})")


def spectral_from_fractal(d_f: float) -> float:
    return 2.0 * d_f / (d_f + 1.0)


def analytic_dimensions(spec: FamilySpec | str, param: int | None = None) -> DimensionInfo:
    """Fractal and spectral dimension of a family.

    Accepts either a :class:`FamilySpec` or a family name plus parameter.
    """
    family = spec.family if isinstance(spec, FamilySpec) else spec
    if isinstance(spec, FamilySpec):
        param = spec.param
    if family == "tree":
        d_f = math.log(param + 2) / math.log(2)
        return DimensionInfo(d_f, spectral_from_fractal(d_f))
    if family == "vicsek":
        d_f = math.log(param + 1) / math.log(3)
        return DimensionInfo(d_f, spectral_from_fractal(d_f))
    if family in ("ring", "path"):
        return DimensionInfo(1.0, 1.0)
    if family == "torus":
        return DimensionInfo(2.0, 2.0)
    raise GraphError(f"unknown family {family!r}")
