"""Transition system of the averaging dynamic and its spectral analysis.

Each layer contributes a doubly stochastic step matrix; their mean is the
mixing matrix that drives the layer-average vector. The contraction factor
rho (largest eigenvalue magnitude below the simple eigenvalue 1) gives the
geometric convergence rate when every layer is connected and n >= 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graph as graphmod
from . import linalg
from .graph import LayeredGraph

SIMPLE_GAP = 1e-9


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """Per-layer step matrices and their mean, the mixing matrix.

    The full block iteration matrix (one block row per layer) is never
    materialized; each block row repeats the same per-layer matrix, so all
    spectral work happens on the n-by-n mixing matrix.
    """

    per_layer: tuple[np.ndarray, ...]
    mixing: np.ndarray
    layer_edge_counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.mixing.shape[0]

    @property
    def m(self) -> int:
        return len(self.per_layer)


def build_transition_system(g: LayeredGraph) -> TransitionSystem:
    """Step matrix I - L_j/|E_j| per layer; mixing matrix is their mean."""
    per_layer = []
    counts = []
    for k in range(g.m):
        lap = graphmod.build_laplacian(g, k)
        b = np.eye(g.n) - lap.matrix / lap.edge_count
        b.setflags(write=False)
        per_layer.append(b)
        counts.append(lap.edge_count)
    mixing = np.zeros((g.n, g.n))
    for b in per_layer:
        mixing += b
    mixing /= g.m
    mixing.setflags(write=False)
    return TransitionSystem(
        per_layer=tuple(per_layer), mixing=mixing, layer_edge_counts=tuple(counts)
    )


def laplacian_max_bound(g: LayeredGraph, layer: int) -> float:
    """Degree-based upper bound on the largest Laplacian eigenvalue.

    Max over edges (i, j) of |N_i union N_j|; dominates lambda_max of the
    layer Laplacian for any simple undirected graph.
    """
    neighbors = [set() for _ in range(g.n)]
    for i, j in g.layers[layer]:
        neighbors[i].add(j)
        neighbors[j].add(i)
    best = 0
    for i, j in g.layers[layer]:
        best = max(best, len(neighbors[i] | neighbors[j]))
    return float(best)


def perron_check(mat: np.ndarray, edges) -> bool:
    """Smallest-eigenvalue check for a generalized Laplacian.

    `edges` is the off-diagonal sparsity pattern: mat must be negative on
    every edge and zero elsewhere off the diagonal (a structure mismatch
    raises). Returns True iff the smallest eigenvalue is simple and its
    eigenvector, sign-normalized so the largest-magnitude entry is
    positive, is entrywise positive.
    """
    mat = linalg.require_symmetric(mat)
    n = mat.shape[0]
    edge_set = {(min(i, j), max(i, j)) for i, j in edges}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in edge_set:
                if not mat[i, j] < 0.0:
                    raise ValueError(
                        f"not a generalized Laplacian of this graph: entry ({i},{j})"
                        f" = {mat[i, j]:g} on an edge must be negative"
                    )
            elif abs(mat[i, j]) > 1e-12:
                raise ValueError(
                    f"not a generalized Laplacian of this graph: entry ({i},{j})"
                    f" = {mat[i, j]:g} off the edge set must be zero"
                )
    eig = linalg.eigen_sym(mat)
    if n == 1:
        return True
    if eig.eigenvalues[1] - eig.eigenvalues[0] <= SIMPLE_GAP:
        return False
    vec = eig.eigenvectors[:, 0].copy()
    lead = int(np.argmax(np.abs(vec)))
    if vec[lead] < 0:
        vec = -vec
    return bool(np.all(vec > 0.0))


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """Spectrum of the mixing matrix plus every bound the theory uses."""

    n: int
    m: int
    layer_connected: tuple[bool, ...]
    layer_edge_counts: tuple[int, ...]
    spectrum: np.ndarray
    rho: float
    lambda1_lower_bound: float
    lemma2_bounds: tuple[float, ...]
    perron_ok: bool
    one_is_simple: bool
    union_connected: bool

    @property
    def all_layers_connected(self) -> bool:
        return all(self.layer_connected)

    @property
    def contracting(self) -> bool:
        return self.rho < 1.0 - SIMPLE_GAP

    def predicted_steps(self, tol: float, initial_spread: float):
        return predicted_steps(self.rho, initial_spread, tol)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "layer_connected": list(self.layer_connected),
            "layer_edge_counts": list(self.layer_edge_counts),
            "spectrum": [float(v) for v in self.spectrum],
            "rho": self.rho,
            "lambda1_lower_bound": self.lambda1_lower_bound,
            "lemma2_bounds": list(self.lemma2_bounds),
            "perron_ok": self.perron_ok,
            "one_is_simple": self.one_is_simple,
        }


def predicted_steps(rho: float, initial_spread: float, tol: float):
    """Step estimate ceil(log(tol/spread) / log(rho)); None when rho >= 1.

    spread at or below tol needs no steps; a rank-one mixing matrix
    (rho == 0) finishes in one.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if initial_spread < 0:
        raise ValueError("spread must be nonnegative")
    if initial_spread <= tol:
        return 0
    if rho <= 0.0:
        return 1
    if rho >= 1.0:
        return None
    return math.ceil(math.log(tol / initial_spread) / math.log(rho))


def analyze(ts: TransitionSystem, g: LayeredGraph) -> SpectralReport:
    """Eigendecompose the mixing matrix and evaluate every bound."""
    eig = linalg.eigen_sym(ts.mixing)
    spectrum = eig.eigenvalues
    n = ts.n
    if n >= 2:
        rho = float(max(abs(spectrum[0]), abs(spectrum[n - 2])))
    else:
        rho = 0.0
    connected = tuple(graphmod.is_connected(g, k) for k in range(g.m))
    bounds = tuple(laplacian_max_bound(g, k) for k in range(g.m))
    union = graphmod.union_edges(g)
    union_graph = LayeredGraph(n=g.n, layers=(union,))
    union_connected = graphmod.is_connected(union_graph, 0)
    combined = graphmod.build_combined_laplacian(g)
    perron_ok = perron_check(combined, union)
    one_is_simple = bool(spectrum[n - 2] < 1.0 - SIMPLE_GAP) if n >= 2 else True
    return SpectralReport(
        n=n,
        m=ts.m,
        layer_connected=connected,
        layer_edge_counts=ts.layer_edge_counts,
        spectrum=spectrum,
        rho=rho,
        lambda1_lower_bound=-1.0 / (n - 1) if n >= 2 else 0.0,
        lemma2_bounds=bounds,
        perron_ok=perron_ok,
        one_is_simple=one_is_simple,
        union_connected=union_connected,
    )
