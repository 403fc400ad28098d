"""Multilayer graph model: parsing, validation, connectivity, Laplacians.

A layered graph is m simple undirected graphs on the same n vertices.
Vertices are 0-based internally; the text file format is 1-based.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised when a graph file violates the expected format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class LayeredGraph:
    """n agents and m layers, each layer a set of undirected edges.

    Edges are stored 0-based as (i, j) tuples with i < j. Every layer
    must contain at least one edge (the dynamic divides by |E_j|).
    """

    n: int
    layers: tuple[frozenset[Edge], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("agent count must be positive")
        if len(self.layers) < 1:
            raise ValueError("need at least one layer")
        for k, edges in enumerate(self.layers):
            if len(edges) == 0:
                raise ValueError(f"layer {k + 1} has no edges")
            for e in edges:
                i, j = e
                if not (0 <= i < j < self.n):
                    raise ValueError(f"layer {k + 1}: bad edge {e} for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.layers)

    def edge_count(self, layer: int) -> int:
        return len(self.layers[layer])


def from_edge_lists(n: int, layers) -> LayeredGraph:
    """Build a LayeredGraph from iterables of (i, j) pairs (0-based).

    Pairs are normalized to i < j; self-loops and duplicates are rejected.
    """
    norm_layers = []
    for k, edges in enumerate(layers):
        seen: set[Edge] = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"layer {k + 1}: self-loop at vertex {i}")
            e = (i, j) if i < j else (j, i)
            if e in seen:
                raise ValueError(f"layer {k + 1}: duplicate edge {e}")
            seen.add(e)
        norm_layers.append(frozenset(seen))
    return LayeredGraph(n=n, layers=tuple(norm_layers))


def parse_layered_graph(text: str) -> LayeredGraph:
    """Parse the graph file format into a validated LayeredGraph.

    Format: optional `#` comment lines; first content line `n=<int> m=<int>`;
    then for each layer k in ascending order a `layer <k>` line followed by
    one `<i> <j>` edge per line (1-based endpoints). Blank lines are ignored.
    """
    n = None
    m = None
    current = -1  # index of the layer being filled
    layer_lines: list[int] = []  # line number of each layer header
    layers: list[set[Edge]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            parts = line.split()
            if (
                len(parts) != 2
                or not parts[0].startswith("n=")
                or not parts[1].startswith("m=")
            ):
                raise GraphFormatError("expected header 'n=<int> m=<int>'", lineno)
            try:
                n = int(parts[0][2:])
                m = int(parts[1][2:])
            except ValueError:
                raise GraphFormatError("non-integer n or m in header", lineno) from None
            if n < 1 or m < 1:
                raise GraphFormatError("n and m must be positive", lineno)
            continue
        tokens = line.split()
        if tokens[0] == "layer":
            if len(tokens) != 2:
                raise GraphFormatError("expected 'layer <k>'", lineno)
            try:
                k = int(tokens[1])
            except ValueError:
                raise GraphFormatError("non-integer layer number", lineno) from None
            if k != current + 2:
                raise GraphFormatError(
                    f"expected 'layer {current + 2}', found 'layer {k}'"
                    " (layers must appear once each, in ascending order)",
                    lineno,
                )
            if current >= 0 and len(layers[current]) == 0:
                raise GraphFormatError(
                    f"layer {current + 1} is empty", layer_lines[current]
                )
            if k > m:
                raise GraphFormatError(f"layer {k} exceeds declared m={m}", lineno)
            layers.append(set())
            layer_lines.append(lineno)
            current += 1
            continue
        # edge line
        if current < 0:
            raise GraphFormatError("edge listed before any 'layer' line", lineno)
        if len(tokens) != 2:
            raise GraphFormatError("expected edge '<i> <j>'", lineno)
        try:
            i = int(tokens[0])
            j = int(tokens[1])
        except ValueError:
            raise GraphFormatError("non-integer vertex index", lineno) from None
        if not (1 <= i <= n) or not (1 <= j <= n):
            raise GraphFormatError(f"vertex out of range 1..{n}", lineno)
        if i == j:
            raise GraphFormatError(f"self-loop at vertex {i}", lineno)
        e = (i - 1, j - 1) if i < j else (j - 1, i - 1)
        if e in layers[current]:
            raise GraphFormatError(f"duplicate edge {i} {j} in layer {current + 1}", lineno)
        layers[current].add(e)

    if n is None:
        raise GraphFormatError("missing header 'n=<int> m=<int>'")
    if len(layers) != m:
        raise GraphFormatError(f"declared m={m} but found {len(layers)} layer(s)")
    if len(layers[current]) == 0:
        raise GraphFormatError(f"layer {current + 1} is empty", layer_lines[current])
    return LayeredGraph(n=n, layers=tuple(frozenset(s) for s in layers))


def neighborhood(g: LayeredGraph, layer: int, agent: int) -> set[int]:
    """Agents sharing an edge with `agent` in `layer` (0-based indices)."""
    if not (0 <= layer < g.m):
        raise IndexError(f"layer {layer} out of range 0..{g.m - 1}")
    if not (0 <= agent < g.n):
        raise IndexError(f"agent {agent} out of range 0..{g.n - 1}")
    out = set()
    for i, j in g.layers[layer]:
        if i == agent:
            out.add(j)
        elif j == agent:
            out.add(i)
    return out


def adjacency_lists(g: LayeredGraph, layer: int) -> list[list[int]]:
    """Neighbor list per vertex for one layer."""
    if not (0 <= layer < g.m):
        raise IndexError(f"layer {layer} out of range 0..{g.m - 1}")
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for i, j in g.layers[layer]:
        adj[i].append(j)
        adj[j].append(i)
    return adj


def is_connected(g: LayeredGraph, layer: int) -> bool:
    """True iff the layer's graph spans all n vertices in one component."""
    adj = adjacency_lists(g, layer)
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == g.n


@dataclass(frozen=True, eq=False)
class LayerLaplacian:
    """Degree-minus-adjacency matrix of one layer plus its edge count."""

    matrix: np.ndarray
    edge_count: int


def build_laplacian(g: LayeredGraph, layer: int) -> LayerLaplacian:
    """Laplacian of one layer: degree matrix minus adjacency matrix."""
    if not (0 <= layer < g.m):
        raise IndexError(f"layer {layer} out of range 0..{g.m - 1}")
    lap = np.zeros((g.n, g.n))
    for i, j in g.layers[layer]:
        lap[i, j] = -1.0
        lap[j, i] = -1.0
        lap[i, i] += 1.0
        lap[j, j] += 1.0
    lap.setflags(write=False)
    return LayerLaplacian(matrix=lap, edge_count=len(g.layers[layer]))


def build_combined_laplacian(g: LayeredGraph) -> np.ndarray:
    """Laplacian of the multigraph weighting layer i by prod(|E_j|)/|E_i|.

    The result is an integer-coefficient combination, so it is a generalized
    Laplacian whose off-diagonal entry (i, j) is negative exactly when the
    pair is an edge in at least one layer.
    """
    counts = [g.edge_count(k) for k in range(g.m)]
    prod = 1
    for c in counts:
        prod *= c
    out = np.zeros((g.n, g.n))
    for k in range(g.m):
        coeff = prod // counts[k]
        out += coeff * build_laplacian(g, k).matrix
    out.setflags(write=False)
    return out


def union_edges(g: LayeredGraph) -> frozenset[Edge]:
    """Edges present in at least one layer."""
    out: set[Edge] = set()
    for edges in g.layers:
        out |= edges
    return frozenset(out)


def random_tree_edges(n: int, rng: np.random.Generator) -> list[Edge]:
    """Uniform random labeled tree on n vertices (decoded Prufer sequence)."""
    if n < 2:
        raise ValueError("a tree needs at least 2 vertices")
    if n == 2:
        return [(0, 1)]
    import heapq

    seq = [int(v) for v in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges: list[Edge] = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v) if leaf < v else (v, leaf))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w) if u < w else (w, u))
    return edges


def random_connected_layer(n: int, extra_edge_prob: float, rng: np.random.Generator) -> frozenset[Edge]:
    """Random connected simple graph: spanning tree plus Bernoulli extras."""
    tree = set(random_tree_edges(n, rng))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in tree and rng.random() < extra_edge_prob:
                tree.add((i, j))
    return frozenset(tree)


def random_layered_graph(
    n: int, m: int, extra_edge_prob: float, rng: np.random.Generator
) -> LayeredGraph:
    """m independent random connected layers on the same n vertices."""
    layers = tuple(random_connected_layer(n, extra_edge_prob, rng) for _ in range(m))
    return LayeredGraph(n=n, layers=layers)
