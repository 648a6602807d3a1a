"""Classification of reduced graphs, branch splitting, re-ordering,
Catmull-Rom spline fitting/resampling, and orientation by the right-hand
rule from pseudo-vorticity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractViolation, DegenerateDirectionError
from .localization import pseudo_vorticity
from .reduction import SampleGraph


class LineType(Enum):
    TYPE_I_OPEN = "I"
    TYPE_II_CLOSED = "II"
    TYPE_III_COMPLEX = "III"


@dataclass
class ReconnectionEvent:
    id: int
    position: np.ndarray
    degree: int
    frame: int = 0


@dataclass
class VortexLine:
    """One vectorized simple line."""

    id: int
    closed: bool
    control_points: np.ndarray  # (n, 3)
    polyline: np.ndarray  # (m, 3)
    orientation: int = 0  # +1 once oriented, 0 unknown
    length: float = 0.0
    branch_endpoints: tuple = ()  # ReconnectionEvent ids


def _position_key(p):
    """Deterministic total order matching x-fastest linearization."""
    return (round(p[2], 9), round(p[1], 9), round(p[0], 9))


def _check_connected(samples: SampleGraph):
    n = len(samples)
    if n == 0:
        raise ContractViolation("empty SampleGraph")
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        v = stack.pop()
        for w in samples.adjacency[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    if count != n:
        raise ContractViolation("SampleGraph is disconnected; split components upstream")


def classify(samples: SampleGraph):
    """(LineType, branch point ids) from the degree sequence."""
    _check_connected(samples)
    degrees = samples.degrees()
    branches = [i for i, d in enumerate(degrees) if d > 2]
    if branches:
        return LineType.TYPE_III_COMPLEX, branches
    if all(d == 2 for d in degrees):
        return LineType.TYPE_II_CLOSED, []
    return LineType.TYPE_I_OPEN, []


def _chain_graph(points, spacing, closed, endpoint_events=()):
    n = len(points)
    adj = [[] for _ in range(n)]
    for i in range(n - 1):
        adj[i].append(i + 1)
        adj[i + 1].append(i)
    if closed and n > 2:
        adj[0].append(n - 1)
        adj[n - 1].append(0)
    return SampleGraph(points=np.asarray(points, dtype=np.float64),
                       adjacency=[sorted(set(a)) for a in adj],
                       spacing=spacing, endpoint_events=tuple(endpoint_events))


def split_at_branches(samples: SampleGraph, frame: int = 0,
                      first_event_id: int = 0):
    """Split a reduced graph at its branch points (degree > 2).

    Branch points are duplicated into each incident segment as endpoints;
    one ReconnectionEvent is created per branch point. Every input edge ends
    up in exactly one output segment. Returns (segments, events).
    """
    line_type, branches = classify(samples)
    if line_type is not LineType.TYPE_III_COMPLEX:
        return [samples], []

    branch_set = set(branches)
    events = {}
    for n, b in enumerate(sorted(branches)):
        events[b] = ReconnectionEvent(
            id=first_event_id + n,
            position=np.array(samples.points[b], dtype=np.float64),
            degree=len(samples.adjacency[b]), frame=frame)

    visited = set()  # directed half-edges (v, w)

    def take(v, w):
        visited.add((v, w))
        visited.add((w, v))

    segments = []

    def walk(start, first):
        """Follow the chain from branch `start` through `first` until a
        branch point or a degree-1 endpoint; returns (ids, end_is_branch)."""
        ids = [start, first]
        take(start, first)
        prev, cur = start, first
        while cur not in branch_set and len(samples.adjacency[cur]) == 2:
            nxt = [u for u in samples.adjacency[cur] if u != prev]
            nxt = nxt[0] if nxt else prev  # 2-cycle fallback
            if (cur, nxt) in visited:
                break
            take(cur, nxt)
            ids.append(nxt)
            prev, cur = cur, nxt
        return ids

    for b in sorted(branches):
        for w in samples.adjacency[b]:
            if (b, w) in visited:
                continue
            ids = walk(b, w)
            end = ids[-1]
            closed = end == b and len(ids) > 2
            if closed:
                ids = ids[:-1]  # loop back to the same branch point
            ev = [events[b].id]
            if not closed and end in branch_set and end != b:
                ev.append(events[end].id)
            segments.append(_chain_graph(samples.points[ids], samples.spacing,
                                         closed, ev))

    # cycles of degree-2 points not touching any branch point
    leftover = [v for v in range(len(samples))
                if v not in branch_set
                and any((v, w) not in visited for w in samples.adjacency[v])]
    left_set = set(leftover)
    for v in sorted(leftover):
        starts = [w for w in samples.adjacency[v] if (v, w) not in visited]
        if not starts:
            continue
        ids = [v]
        prev, cur = v, starts[0]
        take(v, cur)
        while cur != v:
            ids.append(cur)
            nxt = [u for u in samples.adjacency[cur] if u != prev][0]
            take(cur, nxt)
            prev, cur = cur, nxt
        segments.append(_chain_graph(samples.points[ids], samples.spacing, True))
        left_set -= set(ids)

    return segments, [events[b] for b in sorted(branches)]


def reorder(samples: SampleGraph):
    """Order the points of a Type-I/II graph along the line.

    Type-I starts at the degree-1 endpoint with the smaller position key and
    walks to the other endpoint; Type-II starts at the smallest-key point and
    walks toward its smaller-key neighbor. Returns (points, closed).
    """
    line_type, branches = classify(samples)
    if branches:
        raise ContractViolation("reorder requires a simple (Type-I/II) graph")
    n = len(samples)
    if n == 1:
        return samples.points.copy(), False
    degrees = samples.degrees()
    closed = line_type is LineType.TYPE_II_CLOSED
    if closed:
        start = min(range(n), key=lambda i: _position_key(samples.points[i]))
        nbrs = samples.adjacency[start]
        first = min(nbrs, key=lambda i: _position_key(samples.points[i]))
    else:
        ends = [i for i, d in enumerate(degrees) if d == 1]
        ends.sort(key=lambda i: _position_key(samples.points[i]))
        start = ends[0]
        first = samples.adjacency[start][0]
    order = [start, first]
    prev, cur = start, first
    while True:
        nxt = [u for u in samples.adjacency[cur] if u != prev]
        if not nxt or nxt[0] == start:
            break
        order.append(nxt[0])
        prev, cur = cur, nxt[0]
    if len(order) != n:
        raise ContractViolation("graph is not a single simple chain/cycle")
    return samples.points[order], closed


# ---------------------------------------------------------------------------
# Catmull-Rom


def _catmull_rom_point(p0, p1, p2, p3, t):
    """Uniform Catmull-Rom basis; interpolates p1 at t=0 and p2 at t=1."""
    t2 = t * t
    t3 = t2 * t
    return 0.5 * ((2.0 * p1)
                  + (p2 - p0) * t
                  + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
                  + (3.0 * p1 - 3.0 * p2 - p0 + p3) * t3)


def _control_quad(points, closed, seg):
    n = len(points)
    if closed:
        return (points[(seg - 1) % n], points[seg % n],
                points[(seg + 1) % n], points[(seg + 2) % n])
    p = lambda i: points[i]
    p0 = 2.0 * points[0] - points[1] if seg == 0 else p(seg - 1)
    p3 = 2.0 * points[n - 1] - points[n - 2] if seg == n - 2 else p(seg + 2)
    return p0, p(seg), p(seg + 1), p3


def fit_and_resample(points, closed: bool, resample_step: float) -> np.ndarray:
    """Uniform Catmull-Rom spline through all control points, sampled so
    consecutive polyline points are at most resample_step apart.

    Open lines use reflected phantom endpoints; closed lines wrap. The
    polyline passes through every control point.
    """
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    if resample_step <= 0:
        raise ContractViolation("resample_step must be positive")
    if n < (3 if closed else 2):
        raise ContractViolation("need >= 2 control points (3 when closed)")
    nseg = n if closed else n - 1
    out = [points[0]]
    for seg in range(nseg):
        quad = _control_quad(points, closed, seg)
        m = max(1, int(np.ceil(np.linalg.norm(quad[2] - quad[1]) / resample_step)))
        while True:
            ts = np.arange(1, m + 1) / m
            pts = np.array([_catmull_rom_point(*quad, t) for t in ts])
            chain = np.vstack([out[-1], pts])
            gaps = np.linalg.norm(np.diff(chain, axis=0), axis=1)
            if np.max(gaps) <= resample_step or m > 4096:
                break
            m *= 2
        out.extend(pts)
    poly = np.array(out)
    if closed:
        poly = poly[:-1]  # last sample equals the first control point
    return poly


def polyline_length(polyline: np.ndarray, closed: bool) -> float:
    import math
    if len(polyline) < 2:
        return 0.0
    d = np.linalg.norm(np.diff(polyline, axis=0), axis=1)
    total = math.fsum(d.tolist())
    if closed:
        total += float(np.linalg.norm(polyline[0] - polyline[-1]))
    return total


def build_line(line_id: int, samples: SampleGraph, resample_step: float) -> VortexLine:
    """Reorder, fit and resample one simple SampleGraph into a VortexLine."""
    ordered, closed = reorder(samples)
    poly = fit_and_resample(ordered, closed, resample_step)
    return VortexLine(id=line_id, closed=closed, control_points=ordered,
                      polyline=poly, length=polyline_length(poly, closed),
                      branch_endpoints=tuple(samples.endpoint_events))


def orient_line(field, line: VortexLine) -> VortexLine:
    """Reverse the traversal order if the local tangent opposes the
    pseudo-vorticity direction, so traversal follows positive circulation."""
    poly = line.polyline
    if len(poly) < 3:
        line.orientation = 0
        return line
    # try the midpoint first, then other probe points along the line
    m = len(poly)
    probes = [m // 2] + [int(m * f) for f in (0.25, 0.75, 0.4, 0.6)]
    for idx in probes:
        idx = min(max(idx, 1), m - 2)
        try:
            pv = pseudo_vorticity(field, poly[idx])
        except DegenerateDirectionError:
            continue
        tangent = poly[idx + 1] - poly[idx - 1]
        if np.dot(tangent, pv) < 0:
            line.control_points = line.control_points[::-1].copy()
            line.polyline = line.polyline[::-1].copy()
            line.branch_endpoints = tuple(reversed(line.branch_endpoints))
        line.orientation = 1
        return line
    line.orientation = 0
    return line
