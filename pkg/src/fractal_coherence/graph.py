"""Undirected simple graphs, Laplacians and the edge-list interchange format."""

from __future__ import annotations

import io
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np


class GraphError(ValueError):
    """Invalid graph input (bad edge, malformed file, disconnected where forbidden)."""


class CapExceededError(GraphError):
    """Requested size is above a configured node-count cap."""


DEFAULT_MAX_NODES = 10**7
DEFAULT_MAX_EIGEN_NODES = 5000


def max_nodes() -> int:
    return int(os.environ.get("FRACTAL_COHERENCE_MAX_NODES", DEFAULT_MAX_NODES))


def max_eigen_nodes() -> int:
    return int(os.environ.get("FRACTAL_COHERENCE_MAX_EIGEN_NODES", DEFAULT_MAX_EIGEN_NODES))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``0..num_nodes-1``.

    ``edges`` is a sorted tuple of pairs ``(u, v)`` with ``u < v``; build
    instances with :func:`build_graph` so the invariants are checked.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    label: str = ""
    _adjacency: tuple[tuple[int, ...], ...] | None = field(
        default=None, repr=False, compare=False
    )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        if self._adjacency is None:
            nbrs: list[list[int]] = [[] for _ in range(self.num_nodes)]
            for u, v in self.edges:
                nbrs[u].append(v)
                nbrs[v].append(u)
            object.__setattr__(self, "_adjacency", tuple(tuple(sorted(n)) for n in nbrs))
        return self._adjacency  # type: ignore[return-value]

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.num_nodes, dtype=np.int64)
        if self.edges:
            e = np.asarray(self.edges, dtype=np.int64)
            np.add.at(deg, e[:, 0], 1)
            np.add.at(deg, e[:, 1], 1)
        return deg

    def is_tree(self) -> bool:
        return self.num_edges == self.num_nodes - 1 and is_connected(self)

    def relabel(self, perm: Iterable[int], label: str | None = None) -> "Graph":
        """Return the isomorphic graph with node ``i`` renamed ``perm[i]``."""
        p = list(perm)
        if sorted(p) != list(range(self.num_nodes)):
            raise GraphError("relabeling must be a permutation of the node set")
        return build_graph(
            self.num_nodes,
            [(p[u], p[v]) for u, v in self.edges],
            label=self.label if label is None else label,
        )


def build_graph(n: int, edges: Iterable[tuple[int, int]], label: str = "") -> Graph:
    """Validate an edge list and return a :class:`Graph`.

    Raises
    ------
    GraphError
        On ``n < 1``, a self-loop, a duplicate edge or an endpoint outside ``[0, n)``.
    """
    if n < 1:
        raise GraphError(f"node count must be >= 1, got {n}")
    if n > max_nodes():
        raise CapExceededError(
            f"{n} nodes exceeds the cap of {max_nodes()} "
            "(set FRACTAL_COHERENCE_MAX_NODES to raise it)"
        )
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
    return Graph(n, tuple(sorted(seen)), label)


def laplacian(g: Graph) -> np.ndarray:
    """Dense combinatorial Laplacian ``L = D - A`` in double precision."""
    L = np.zeros((g.num_nodes, g.num_nodes))
    if g.edges:
        e = np.asarray(g.edges, dtype=np.int64)
        L[e[:, 0], e[:, 1]] = -1.0
        L[e[:, 1], e[:, 0]] = -1.0
    L[np.diag_indices(g.num_nodes)] = g.degrees()
    return L


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source``; unreachable nodes get ``-1``."""
    dist = np.full(g.num_nodes, -1, dtype=np.int64)
    dist[source] = 0
    adj = g.adjacency
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    return bool(np.all(bfs_distances(g, 0) >= 0))


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise GraphError(f"graph {g.label or '<unlabeled>'} is disconnected")


# -- edge-list format: "N M" header, then M lines "u v" with u < v ---------
# Lines starting with "#" are comments and are skipped on reading.


def write_edgelist(g: Graph, dest: TextIO | str | Path) -> None:
    text = format_edgelist(g)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def format_edgelist(g: Graph) -> str:
    buf = io.StringIO()
    buf.write(f"{g.num_nodes} {g.num_edges}\n")
    for u, v in g.edges:
        buf.write(f"{u} {v}\n")
    return buf.getvalue()


def read_edgelist(src: TextIO | str | Path, label: str = "") -> Graph:
    if isinstance(src, (str, Path)):
        text = Path(src).read_text()
        label = label or str(src)
    else:
        text = src.read()
    return parse_edgelist(text, label=label)


def parse_edgelist(text: str, label: str = "") -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty edge list: expected header line 'N M'")
    try:
        n, m = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise GraphError(f"malformed header {lines[0]!r}: expected 'N M'") from None
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges but {len(body)} edge lines follow")
    edges = []
    for lineno, ln in enumerate(body, start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer endpoint in {ln!r}") from None
        if u >= v:
            raise GraphError(f"line {lineno}: edge must satisfy u < v, got {ln!r}")
        edges.append((u, v))
    return build_graph(n, edges, label=label)
