"""Sparse graph of vortex nodes with grid-line (6-neighbor) adjacency,
optional block-parallel construction, and connected-component extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .field import Boundary


@dataclass
class VortexGraph:
    nodes: list  # VortexNode, sorted by linearized index
    adjacency: list  # per-node sorted lists of neighbor ids
    dims: tuple
    boundary: Boundary
    spacing: float = 1.0

    def __len__(self):
        return len(self.nodes)

    def positions(self) -> np.ndarray:
        """Node positions in domain units, shape (N, 3)."""
        if not self.nodes:
            return np.zeros((0, 3))
        return np.array([n.index for n in self.nodes], dtype=np.float64) * self.spacing


@dataclass
class Component:
    node_ids: list


def _linearize(indices: np.ndarray, dims) -> np.ndarray:
    nx, ny, _ = dims
    return indices[:, 0] + nx * (indices[:, 1] + ny * indices[:, 2])


def _edges_for(indices: np.ndarray, lins: np.ndarray, dims, boundary):
    """Edges (i, j) with i < j between 6-neighbor nodes; indices sorted by lin."""
    edges = []
    n = len(indices)
    if n == 0:
        return edges
    periodic = boundary is Boundary.PERIODIC
    order = np.arange(n)
    for a in range(3):
        nb = indices.copy()
        nb[:, a] += 1
        wrapped = nb[:, a] == dims[a]
        if periodic:
            nb[wrapped, a] = 0
        nb_lin = _linearize(nb, dims)
        pos = np.searchsorted(lins, nb_lin)
        ok = (pos < n)
        if not periodic:
            ok &= ~wrapped
        ok[ok] &= lins[pos[ok]] == nb_lin[ok]
        for i in np.nonzero(ok)[0]:
            j = int(pos[i])
            if i != j:
                edges.append((min(int(order[i]), j), max(int(order[i]), j)))
    return edges


def _build_adjacency(indices: np.ndarray, lins: np.ndarray, dims, boundary):
    n = len(indices)
    adj = [[] for _ in range(n)]
    for i, j in _edges_for(indices, lins, dims, boundary):
        adj[i].append(j)
        adj[j].append(i)
    return [sorted(set(a)) for a in adj]


def build_global_graph(nodes, dims, boundary, blocks=(1, 1, 1),
                       spacing: float = 1.0) -> VortexGraph:
    """Adjacency between vortex nodes that are 6-neighbors on the grid.

    With blocks > (1, 1, 1), each block builds its local graph independently;
    local indices are rewritten to global ones and cross-block edges are
    added in a merge pass. The result is identical to the single-block build.
    """
    if any(b < 1 for b in blocks) or any(b > d for b, d in zip(blocks, dims)):
        raise ContractViolation("blocks must be >= 1 and <= dims per axis")
    n = len(nodes)
    if n == 0:
        return VortexGraph([], [], tuple(dims), boundary, spacing)
    indices = np.array([nd.index for nd in nodes], dtype=np.int64)
    lins = _linearize(indices, dims)
    if np.any(np.diff(lins) <= 0):
        raise ContractViolation("nodes must be sorted and unique by linearized index")

    if tuple(blocks) == (1, 1, 1):
        adj = _build_adjacency(indices, lins, dims, boundary)
        return VortexGraph(list(nodes), adj, tuple(dims), boundary, spacing)

    # block id per node
    sizes = [int(np.ceil(d / b)) for d, b in zip(dims, blocks)]
    bid = (indices[:, 0] // sizes[0]) \
        + blocks[0] * ((indices[:, 1] // sizes[1]) + blocks[1] * (indices[:, 2] // sizes[2]))
    adj = [[] for _ in range(n)]
    global_of = {}
    for b in np.unique(bid):
        local = np.nonzero(bid == b)[0]  # already sorted by lin
        local_adj = _build_adjacency(indices[local], lins[local], dims, boundary)
        for li, neigh in enumerate(local_adj):
            adj[local[li]] = [int(local[lj]) for lj in neigh]
    # merge pass: add edges whose endpoints live in different blocks
    for i, j in _edges_for(indices, lins, dims, boundary):
        if bid[i] != bid[j]:
            adj[i].append(j)
            adj[j].append(i)
    adj = [sorted(set(a)) for a in adj]
    return VortexGraph(list(nodes), adj, tuple(dims), boundary, spacing)


def extract_components(graph: VortexGraph):
    """Connected components by iterative depth-first traversal.

    Components are ordered by their minimum node id (nodes are sorted by
    linearized index, so this is deterministic).
    """
    n = len(graph)
    seen = np.zeros(n, dtype=bool)
    components = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            v = stack.pop()
            members.append(v)
            for w in graph.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        components.append(Component(node_ids=sorted(members)))
    return components
