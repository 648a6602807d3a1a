"""Iterative graph contraction: collapse each connected component into a
sparse graph of sub-grid sample points via box sub-graph extraction and the
mean-position estimator, preserving topology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .field import Boundary
from .vortexgraph import Component, VortexGraph

CONVERGENCE_TOL = 0.01  # in units of spacing, max point displacement
MAX_PASSES = 10


@dataclass
class SampleGraph:
    """Graph whose nodes are sub-grid sample points (domain units)."""

    points: np.ndarray  # (N, 3)
    adjacency: list  # per-point sorted neighbor id lists
    origin_component: int = -1
    spacing: float = 1.0
    endpoint_events: tuple = ()  # event ids at split endpoints, set by vectorize
    passes: int = 0  # reduction passes actually run
    converged: bool = True

    def __len__(self):
        return len(self.points)

    def degrees(self):
        return [len(a) for a in self.adjacency]


def _periodic_delta(d, extent):
    """Shift displacement components to the nearest periodic image."""
    return d - extent * np.round(d / extent)


def _box_reachable(points, adjacency, seed, half, allowed, periodic, extents):
    """Ids reachable from seed via DFS among `allowed`, staying inside the
    axis-aligned box of half-width `half` centered at the seed position."""
    p0 = points[seed]
    stack = [seed]
    members = {seed}
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if w in members or not allowed[w]:
                continue
            d = points[w] - p0
            if periodic:
                d = _periodic_delta(d, extents)
            if np.all(np.abs(d) <= half + 1e-12):
                members.add(w)
                stack.append(w)
    return members


def box_subgraph(graph: VortexGraph, seed_node: int, k: int):
    """Node ids reachable from seed within the box of side k*spacing."""
    _check_k(k)
    points = graph.positions()
    allowed = np.ones(len(points), dtype=bool)
    extents = np.array(graph.dims) * graph.spacing
    return _box_reachable(points, graph.adjacency, seed_node, 0.5 * k * graph.spacing,
                          allowed, graph.boundary is Boundary.PERIODIC, extents)


def mean_estimator(positions) -> np.ndarray:
    positions = np.asarray(positions, dtype=np.float64)
    if positions.size == 0:
        raise ContractViolation("mean_estimator needs a non-empty input")
    return positions.mean(axis=0)


def _check_k(k):
    if not (3 <= k <= 8):
        raise ContractViolation("box size k must be in [3, 8]")


def _reduction_pass(points, adjacency, k, spacing, periodic, extents):
    """One full sweep: merge box sub-graphs into sample points, inheriting
    external edges. Returns (new_points, new_adjacency)."""
    n = len(points)
    unprocessed = np.ones(n, dtype=bool)
    owner = np.full(n, -1, dtype=np.int64)
    half = 0.5 * k * spacing
    new_points = []
    last_members = None
    while unprocessed.any():
        seed = -1
        if last_members is not None:
            frontier = sorted(
                w for v in last_members for w in adjacency[v] if unprocessed[w])
            if frontier:
                seed = frontier[0]
        if seed < 0:
            seed = int(np.nonzero(unprocessed)[0][0])
        members = sorted(_box_reachable(points, adjacency, seed, half,
                                        unprocessed, periodic, extents))
        pts = points[members]
        if periodic:
            pts = points[seed] + _periodic_delta(pts - points[seed], extents)
        sid = len(new_points)
        new_points.append(mean_estimator(pts))
        for m in members:
            owner[m] = sid
            unprocessed[m] = False
        last_members = members
    m = len(new_points)
    new_adj = [set() for _ in range(m)]
    for v in range(n):
        for w in adjacency[v]:
            a, b = owner[v], owner[w]
            if a != b:
                new_adj[a].add(int(b))
    return np.array(new_points), [sorted(s) for s in new_adj]


def reduce_component(graph: VortexGraph, component: Component, k: int) -> SampleGraph:
    """Contract one component to a converged SampleGraph.

    Whole passes repeat on the reduced graph with the same k until the
    maximum point displacement between passes drops below 0.01*spacing or
    the pass count reaches 10.
    """
    _check_k(k)
    ids = component.node_ids
    if not ids:
        raise ContractViolation("component must be non-empty")
    id_map = {g: l for l, g in enumerate(ids)}
    points = graph.positions()[ids]
    adjacency = [
        sorted(id_map[w] for w in graph.adjacency[g] if w in id_map) for g in ids]
    periodic = graph.boundary is Boundary.PERIODIC
    extents = np.array(graph.dims) * graph.spacing

    converged = False
    passes = 0
    for _ in range(MAX_PASSES):
        new_points, new_adj = _reduction_pass(
            points, adjacency, k, graph.spacing, periodic, extents)
        passes += 1
        converged = False
        if len(new_points) == len(points):
            # match each new point against the nearest previous one
            d = new_points[:, None, :] - points[None, :, :]
            if periodic:
                d = _periodic_delta(d, extents)
            nearest = np.min(np.linalg.norm(d, axis=2), axis=1)
            converged = float(np.max(nearest)) < CONVERGENCE_TOL * graph.spacing
        points, adjacency = new_points, new_adj
        if converged:
            break
    return SampleGraph(points=points, adjacency=adjacency,
                       origin_component=ids[0] if ids else -1,
                       spacing=graph.spacing, passes=passes, converged=converged)
