"""Rauzy graphs of the interior column-value languages.

Vertices are the length-i factors seen in the middle of tall valid states
(offset at least ``pad`` from both ends, so border effects vanish); edges are
harvested the same way from length-(i+1) factors.  The spectral radius of the
adjacency matrix estimates the growth rate of the number of states, which
stabilizes once the order covers the longest forbidden factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .problems import INTERIOR, get_problem
from .semiring import spectral_radius
from .states import enumerate_states


@dataclass
class RauzyGraph:
    order: int
    vertices: list          # packed factor tuples
    edges: np.ndarray       # (nedges, 2) vertex indices

    @property
    def adjacency(self):
        n = len(self.vertices)
        if len(self.edges) == 0:
            return sp.csr_matrix((n, n))
        data = np.ones(len(self.edges))
        return sp.csr_matrix(
            (data, (self.edges[:, 0], self.edges[:, 1])), shape=(n, n)
        )


def build_rauzy(spec, order: int, pad: int = 2) -> RauzyGraph:
    """Order-i Rauzy graph of the problem's interior state language."""
    if isinstance(spec, str):
        spec = get_problem(spec)
    height = order + 1 + 2 * pad
    ss = enumerate_states(spec, height, INTERIOR, prune_symmetry=False)
    verts = {}
    edge_set = set()
    for vals in ss.decoded():
        for off in range(pad, height - pad - order):
            w1 = vals[off:off + order]
            w2 = vals[off + 1:off + 1 + order]
            for w in (w1, w2):
                if w not in verts:
                    verts[w] = len(verts)
            edge_set.add((verts[w1], verts[w2]))
    vertices = [None] * len(verts)
    for w, i in verts.items():
        vertices[i] = w
    edges = np.array(sorted(edge_set), dtype=np.int64).reshape(-1, 2)
    return RauzyGraph(order, vertices, edges)


def growth_rate(spec, order: int, pad: int = 2) -> float:
    """Largest eigenvalue of the order-i Rauzy adjacency matrix."""
    graph = build_rauzy(spec, order, pad)
    return spectral_radius(graph.adjacency)


def stabilized_growth(spec, max_order: int = 8, tol: float = 1e-6, pad: int = 2):
    """Sweep orders until two consecutive rates agree within tol.

    Returns (rate, order, history)."""
    history = []
    prev = None
    for i in range(1, max_order + 1):
        lam = growth_rate(spec, i, pad)
        history.append(lam)
        if prev is not None and abs(lam - prev) < tol:
            return lam, i, history
        prev = lam
    return history[-1], max_order, history
