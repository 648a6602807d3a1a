"""Ring-path circulation on the three coordinate planes and vortex-node
identification with the epsilon = pi threshold.

The ring path around a node is the closed octagonal loop through its 8
in-plane Chebyshev-distance-1 neighbors, traversed counter-clockwise with
respect to the +normal direction. Summing wrapped phase differences along
the loop yields an integer multiple of 2*pi (winding number property).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularNodeError
from .field import Boundary, ComplexField3D, _PLANE_AXES, axis_index, wrap_angle

DEFAULT_EPSILON = np.pi

# in-plane (u, v) offsets of the ring path, counter-clockwise about +normal
RING_OFFSETS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]

_AXIS_NAMES = ("x", "y", "z")


@dataclass(frozen=True)
class VortexNode:
    """Grid node whose maximal plane circulation exceeds the threshold."""

    index: tuple
    circulation: float
    axis: str


def plane_circulation(field: ComplexField3D, index, axis) -> float:
    """Circulation of the ring path around one node in one plane."""
    a = axis_index(axis)
    ua, va = _PLANE_AXES[a]
    idx = np.asarray(index, dtype=np.int64)
    dims = np.array(field.dims)
    phases = []
    for du, dv in RING_OFFSETS:
        p = idx.copy()
        p[ua] += du
        p[va] += dv
        if field.boundary is Boundary.PERIODIC:
            p = np.mod(p, dims)
        elif np.any(p < 0) or np.any(p >= dims):
            raise DomainError(f"ring path around {tuple(idx)} leaves clamped grid")
        v = field.values[tuple(p)]
        if v == 0:
            raise SingularNodeError(f"Phi = 0 on ring path at {tuple(p)}")
        ph = np.angle(v)
        phases.append(ph + 2 * np.pi if ph <= -np.pi else ph)
    total = 0.0
    for j in range(8):
        total += float(wrap_angle(phases[(j + 1) % 8] - phases[j]))
    return total


def all_plane_circulations(field: ComplexField3D):
    """Vectorized circulation of every node on all three planes.

    Returns (circ, valid): circ has shape (3, nx, ny, nz); valid is a
    boolean mask of the same shape, false where the path leaves a clamped
    grid or touches an exactly zero field value.
    """
    phase = field.phase()
    singular = field.values == 0
    periodic = field.boundary is Boundary.PERIODIC
    circ = np.zeros((3,) + field.dims)
    valid = np.ones((3,) + field.dims, dtype=bool)

    for a in range(3):
        ua, va = _PLANE_AXES[a]
        ring_phases = []
        bad = np.zeros(field.dims, dtype=bool)
        for du, dv in RING_OFFSETS:
            shifted = np.roll(np.roll(phase, -du, axis=ua), -dv, axis=va)
            ring_phases.append(shifted)
            bad |= np.roll(np.roll(singular, -du, axis=ua), -dv, axis=va)
        total = np.zeros(field.dims)
        for j in range(8):
            total += wrap_angle(ring_phases[(j + 1) % 8] - ring_phases[j])
        circ[a] = total
        valid[a] = ~bad
        if not periodic:
            # border nodes in the plane have paths leaving the grid
            sl = [slice(None)] * 3
            for plane_axis in (ua, va):
                sl_a = list(sl)
                sl_a[plane_axis] = [0, field.dims[plane_axis] - 1]
                valid[(a,) + tuple(sl_a)] = False
    return circ, valid


def identify_vortex_nodes(field: ComplexField3D, epsilon: float = DEFAULT_EPSILON):
    """All grid nodes whose maximal absolute plane circulation exceeds epsilon.

    Output is sorted by linearized index (x-fastest). Returns
    (nodes, skipped) where skipped counts nodes having no valid plane.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    circ, valid = all_plane_circulations(field)
    abs_circ = np.where(valid, np.abs(circ), -1.0)
    best_axis = np.argmax(abs_circ, axis=0)  # ties -> lowest axis, x < y < z
    nx, ny, nz = field.dims
    ix, iy, iz = np.indices(field.dims)
    best_val = circ[best_axis, ix, iy, iz]
    best_ok = valid[best_axis, ix, iy, iz]
    hit = best_ok & (np.abs(best_val) > epsilon)
    skipped = int(np.count_nonzero(~valid.any(axis=0)))

    xs, ys, zs = np.nonzero(hit)
    lin = xs + nx * (ys + ny * zs)
    order = np.argsort(lin, kind="stable")
    nodes = [
        VortexNode(
            index=(int(xs[i]), int(ys[i]), int(zs[i])),
            circulation=float(best_val[xs[i], ys[i], zs[i]]),
            axis=_AXIS_NAMES[int(best_axis[xs[i], ys[i], zs[i]])],
        )
        for i in order
    ]
    return nodes, skipped
