"""Complex scalar field on a regular 3D grid, derived quantities, analytic
vortex generators, and a desk-scale NLKG time stepper with random-potential
forcing.

Conventions fixed here and relied on everywhere else:
  * grids are stored as arrays of shape (nx, ny, nz), indexed [x, y, z];
  * the linearized scan order is x-fastest: lin = x + nx*(y + ny*z);
  * phases live in (-pi, pi], with the branch at -1 mapped to +pi;
  * positions are in domain units, node (i, j, k) sits at (i, j, k)*spacing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ContractViolation,
    DomainError,
    NumericalError,
    SingularNodeError,
)

TWO_PI = 2.0 * np.pi


class Boundary(Enum):
    CLAMPED = 0
    PERIODIC = 1


_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}

# in-plane axis pairs (u, v) such that (u, v, normal) is right-handed
_PLANE_AXES = {0: (1, 2), 1: (2, 0), 2: (0, 1)}


def axis_index(axis) -> int:
    if isinstance(axis, str):
        return _AXIS_INDEX[axis]
    return int(axis)


def wrap_angle(d):
    """Wrap angle differences into (-pi, pi]."""
    w = np.mod(d, TWO_PI)
    return np.where(w > np.pi, w - TWO_PI, w)


@dataclass
class ComplexField3D:
    """Discretized complex field Phi; values has shape (nx, ny, nz)."""

    values: np.ndarray
    spacing: float
    time: float = 0.0
    boundary: Boundary = Boundary.CLAMPED

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 3:
            raise ContractViolation("field values must be a 3D array")
        if any(n < 4 for n in self.values.shape):
            raise ContractViolation("dims must be >= 4 along each axis")
        if not self.spacing > 0:
            raise ContractViolation("spacing must be positive")

    @property
    def dims(self):
        return self.values.shape

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def phase(self) -> np.ndarray:
        """Node phases in (-pi, pi]; zero-valued nodes yield phase 0."""
        p = np.angle(self.values)
        # np.angle maps negative reals with -0j to -pi; fix the branch
        return np.where(p <= -np.pi, p + TWO_PI, p)


@dataclass
class PotentialParams:
    """Coarse space-time lattice for the random forcing potential."""

    X0: float = 2.0
    T0: float = 0.16
    V0: float = 55.0
    seed: int = 0

    def __post_init__(self):
        if not (self.X0 > 0 and self.T0 > 0 and self.V0 >= 0):
            raise ContractViolation("require X0 > 0, T0 > 0, V0 >= 0")


# ---------------------------------------------------------------------------
# interpolation


def _to_cell_coords(field: ComplexField3D, position):
    pos = np.asarray(position, dtype=np.float64) / field.spacing
    if field.boundary is Boundary.CLAMPED:
        hi = np.array(field.dims, dtype=np.float64) - 1.0
        if np.any(pos < -1e-12) or np.any(pos > hi + 1e-12):
            raise DomainError(f"position {position} outside clamped grid")
        pos = np.clip(pos, 0.0, hi)
    return pos


def _trilinear(values: np.ndarray, pos_cells, periodic: bool):
    """Trilinear interpolation of a grid array at fractional cell coords.

    pos_cells may be a (3,) vector or an (N, 3) array.
    """
    pos = np.atleast_2d(np.asarray(pos_cells, dtype=np.float64))
    dims = values.shape
    i0 = np.floor(pos).astype(np.int64)
    f = pos - i0
    out = np.zeros(pos.shape[0], dtype=values.dtype)
    for corner in range(8):
        bits = np.array([(corner >> a) & 1 for a in range(3)])
        idx = i0 + bits
        if periodic:
            idx = np.mod(idx, dims)
        else:
            idx = np.minimum(idx, np.array(dims) - 1)
        w = np.prod(np.where(bits, f, 1.0 - f), axis=1)
        out += w * values[idx[:, 0], idx[:, 1], idx[:, 2]]
    return out if np.asarray(pos_cells).ndim == 2 else out[0]


def interp_complex(field: ComplexField3D, position):
    """Trilinearly interpolated Phi at a position (domain units)."""
    pos = _to_cell_coords(field, position)
    return _trilinear(field.values, pos, field.boundary is Boundary.PERIODIC)


def density_at(field: ComplexField3D, position) -> float:
    """|Phi|^2 at a position, with Phi interpolated trilinearly."""
    return float(np.abs(interp_complex(field, position)) ** 2)


class DensitySampler:
    """Sub-grid density |Phi|^2 with Phi interpolated trilinearly.

    Interpolating Phi (not the node density grid) keeps the interpolated
    zero curve, and hence the density minimum, at the sub-grid core; the
    piecewise-trilinear density grid attains its minima at cell corners.
    """

    def __init__(self, field: ComplexField3D):
        self._field = field
        self.mean_density = float(np.mean(field.density()))

    def at(self, position):
        return float(np.abs(interp_complex(self._field, position)) ** 2)


def phase_at_node(field: ComplexField3D, index) -> float:
    """Phase sigma = arg Phi in (-pi, pi] at a grid node."""
    idx = np.asarray(index, dtype=np.int64)
    if field.boundary is Boundary.PERIODIC:
        idx = np.mod(idx, field.dims)
    elif np.any(idx < 0) or np.any(idx >= field.dims):
        raise DomainError(f"index {index} outside grid")
    v = field.values[tuple(idx)]
    if v == 0:
        raise SingularNodeError(f"Phi = 0 at node {tuple(idx)}")
    p = float(np.angle(v))
    return p + TWO_PI if p <= -np.pi else p


def velocity_at_node(field: ComplexField3D, index):
    """u = grad sigma by central differences with per-axis phase unwrapping."""
    idx = np.asarray(index, dtype=np.int64)
    u = np.zeros(3)
    try:
        phase_at_node(field, idx)
        for a in range(3):
            e = np.zeros(3, dtype=np.int64)
            e[a] = 1
            sp = phase_at_node(field, idx + e)
            sm = phase_at_node(field, idx - e)
            s0 = phase_at_node(field, idx)
            dp = wrap_angle(sp - s0)
            dm = wrap_angle(s0 - sm)
            u[a] = (dp + dm) / (2.0 * field.spacing)
    except SingularNodeError as exc:
        raise SingularNodeError(f"velocity undefined near {tuple(idx)}: {exc}")
    return u


# ---------------------------------------------------------------------------
# analytic generators


def _core_profile(r):
    """Smooth core amplitude with a simple zero: f(0)=0, f(inf)->1."""
    return r / np.sqrt(r * r + 1.0)


def _grid_coords(dims, spacing):
    ax = [np.arange(n) * spacing for n in dims]
    return np.meshgrid(*ax, indexing="ij")


def gen_straight_vortex(dims, spacing, axis, core_offset, winding) -> ComplexField3D:
    """Straight vortex line along a coordinate axis at an off-grid core.

    core_offset is the (u, v) in-plane core position in domain units, with
    (u, v, axis) right-handed. winding must be +1 or -1.
    """
    a = axis_index(axis)
    ua, va = _PLANE_AXES[a]
    if winding not in (1, -1):
        raise ContractViolation("winding must be +1 or -1")
    cu, cv = float(core_offset[0]), float(core_offset[1])
    for c, n in ((cu, dims[ua]), (cv, dims[va])):
        if not (0 < c < (n - 1) * spacing):
            raise ContractViolation("core must lie strictly inside the cross-section")
    fu = cu / spacing
    fv = cv / spacing
    if abs(fu - round(fu)) < 1e-12 and abs(fv - round(fv)) < 1e-12:
        raise ContractViolation("core coincides with a grid node")
    coords = _grid_coords(dims, spacing)
    du = coords[ua] - cu
    dv = coords[va] - cv
    r = np.hypot(du, dv)
    theta = np.arctan2(dv, du)
    values = _core_profile(r) * np.exp(1j * winding * theta)
    return ComplexField3D(values, spacing, boundary=Boundary.CLAMPED)


def _half_plane_vortex(a, b):
    """2D vortex value (a + ib)/sqrt(a^2 + b^2 + 1) used by the ring ansatz."""
    return (a + 1j * b) / np.sqrt(a * a + b * b + 1.0)


def gen_vortex_ring(dims, spacing, center, radius, normal_axis) -> ComplexField3D:
    """Vortex ring: phase-singularity set is a circle of given center/radius.

    Built as the product of two opposite-winding 2D vortices in the
    half-plane swept around the ring axis, which keeps Phi smooth on the axis.
    """
    a = axis_index(normal_axis)
    ua, va = _PLANE_AXES[a]
    center = np.asarray(center, dtype=np.float64)
    if radius < 4 * spacing:
        raise ContractViolation("radius must be >= 4*spacing")
    for ax3 in range(3):
        lo = center[ax3] - (radius if ax3 != a else 0.0)
        hi = center[ax3] + (radius if ax3 != a else 0.0)
        if lo < 4 * spacing or hi > (dims[ax3] - 1) * spacing - 4 * spacing:
            raise ContractViolation("ring needs >= 4*spacing clearance from the boundary")
    coords = _grid_coords(dims, spacing)
    s = np.hypot(coords[ua] - center[ua], coords[va] - center[va])
    w = coords[a] - center[a]
    values = _half_plane_vortex(s - radius, w) * np.conj(_half_plane_vortex(s + radius, w))
    return ComplexField3D(values, spacing, boundary=Boundary.CLAMPED)


def combine_fields(*fields: ComplexField3D) -> ComplexField3D:
    """Pointwise product of fields (phases add), for multi-vortex scenes."""
    if not fields:
        raise ContractViolation("need at least one field")
    base = fields[0]
    values = base.values.copy()
    for f in fields[1:]:
        if f.dims != base.dims or f.spacing != base.spacing:
            raise ContractViolation("fields must share dims and spacing")
        values *= f.values
    return ComplexField3D(values, base.spacing, base.time, base.boundary)


# ---------------------------------------------------------------------------
# random potential


def _hash_u64(*arrays):
    """SplitMix64-style mixing of integer lattice coordinates; vectorized."""
    h = np.uint64(0x9E3779B97F4A7C15)
    with np.errstate(over="ignore"):
        for arr in arrays:
            a = np.asarray(arr).astype(np.int64).view(np.uint64) if np.asarray(arr).dtype != np.uint64 else arr
            h = (h ^ (a * np.uint64(0xBF58476D1CE4E5B9))) * np.uint64(0x94D049BB133111EB)
            h ^= h >> np.uint64(31)
        h = (h ^ (h >> np.uint64(33))) * np.uint64(0xFF51AFD7ED558CCD)
        h ^= h >> np.uint64(33)
    return h


def _cosine_ease(s):
    return 0.5 * (1.0 - np.cos(np.pi * s))


class RandomPotential:
    """Deterministic sampler of the space-time random potential P(x, t).

    Lattice values (pitch X0 in space, T0 in time) are i.i.d. uniform in
    [0, V0], derived from a seeded integer hash so the sampler is a pure
    function of (params, position, time). Between lattice points the 16
    surrounding space-time values are blended with per-axis cosine easing.
    """

    def __init__(self, params: PotentialParams):
        self.params = params

    def _lattice(self, i, j, k, n):
        h = _hash_u64(np.asarray(i), np.asarray(j), np.asarray(k),
                      np.asarray(n), np.full_like(np.asarray(i), self.params.seed))
        return self.params.V0 * (h.astype(np.float64) / 2.0 ** 64)

    def at(self, positions, t):
        """P at positions (N, 3) or (3,), time t."""
        pos = np.atleast_2d(np.asarray(positions, dtype=np.float64))
        sc = pos / self.params.X0
        tc = t / self.params.T0
        i0 = np.floor(sc).astype(np.int64)
        fs = sc - i0
        n0 = int(np.floor(tc))
        ft = tc - n0
        ws = _cosine_ease(fs)
        wt = _cosine_ease(ft)
        out = np.zeros(pos.shape[0])
        for corner in range(8):
            bits = np.array([(corner >> a) & 1 for a in range(3)])
            w = np.prod(np.where(bits, ws, 1.0 - ws), axis=1)
            idx = i0 + bits
            v0 = self._lattice(idx[:, 0], idx[:, 1], idx[:, 2], n0)
            v1 = self._lattice(idx[:, 0], idx[:, 1], idx[:, 2], n0 + 1)
            out += w * ((1.0 - wt) * v0 + wt * v1)
        return out if np.asarray(positions).ndim == 2 else float(out[0])

    def on_grid(self, dims, spacing, t):
        """P evaluated at every grid node; cached per time slab pair."""
        key = (dims, spacing)
        n0 = int(np.floor(t / self.params.T0))
        ft = t / self.params.T0 - n0
        if getattr(self, "_cache_key", None) != key:
            self._cache_key = key
            self._slab_cache = {}
        s0 = self._spatial_slab(dims, spacing, n0)
        s1 = self._spatial_slab(dims, spacing, n0 + 1)
        wt = _cosine_ease(ft)
        return (1.0 - wt) * s0 + wt * s1

    def _spatial_slab(self, dims, spacing, n):
        cache = self._slab_cache
        if n in cache:
            return cache[n]
        coords = _grid_coords(dims, spacing)
        sc = [c / self.params.X0 for c in coords]
        i0 = [np.floor(c).astype(np.int64) for c in sc]
        fs = [c - i for c, i in zip(sc, i0)]
        ws = [_cosine_ease(f) for f in fs]
        out = np.zeros(dims)
        for corner in range(8):
            bits = [(corner >> a) & 1 for a in range(3)]
            w = np.ones(dims)
            idx = []
            for a in range(3):
                w = w * (ws[a] if bits[a] else 1.0 - ws[a])
                idx.append(i0[a] + bits[a])
            out += w * self._lattice(idx[0], idx[1], idx[2], n)
        # keep only a sliding window of slabs
        cache[n] = out
        for k in list(cache):
            if abs(k - n) > 2:
                del cache[k]
        return cache[n]


def gen_random_potential(params: PotentialParams) -> RandomPotential:
    return RandomPotential(params)


# ---------------------------------------------------------------------------
# NLKG stepper


def _laplacian(values: np.ndarray, spacing: float, periodic: bool):
    """7-point Laplacian; clamped boundaries replicate the edge value."""
    total = np.zeros_like(values)
    for a in range(3):
        if periodic:
            up = np.roll(values, -1, axis=a)
            dn = np.roll(values, 1, axis=a)
        else:
            up = np.concatenate(
                [np.take(values, range(1, values.shape[a]), axis=a),
                 np.take(values, [-1], axis=a)], axis=a)
            dn = np.concatenate(
                [np.take(values, [0], axis=a),
                 np.take(values, range(0, values.shape[a] - 1), axis=a)], axis=a)
        total += up + dn - 2.0 * values
    return total / spacing ** 2


def _nlkg_rhs(field: ComplexField3D, lam: float, potential, t: float):
    """d^2 Phi / dt^2 = lap Phi - (|Phi|^2 - 1) Phi - (lambda + P) Phi."""
    lap = _laplacian(field.values, field.spacing, field.boundary is Boundary.PERIODIC)
    rho = np.abs(field.values) ** 2
    acc = lap - (rho - 1.0) * field.values - lam * field.values
    if potential is not None:
        acc = acc - potential.on_grid(field.dims, field.spacing, t) * field.values
    return acc


@dataclass
class NlkgState:
    """Double-buffered leapfrog state for the NLKG stepper."""

    current: ComplexField3D
    previous: ComplexField3D
    lam: float
    dt: float
    step_index: int = 0

    def __post_init__(self):
        if self.current.dims != self.previous.dims:
            raise ContractViolation("current/previous dims mismatch")
        if not self.dt > 0 or self.dt > self.current.spacing / np.sqrt(3.0) + 1e-12:
            raise ContractViolation("dt must satisfy 0 < dt <= spacing/sqrt(3)")

    @classmethod
    def from_initial(cls, field: ComplexField3D, lam: float, dt: float,
                     potential=None) -> "NlkgState":
        """Bootstrap previous via a Taylor half-step with dPhi/dt(0) = 0."""
        acc = _nlkg_rhs(field, lam, potential, field.time)
        prev = ComplexField3D(field.values + 0.5 * dt ** 2 * acc,
                              field.spacing, field.time - dt, field.boundary)
        return cls(field, prev, lam, dt)


def nlkg_step(state: NlkgState, potential=None) -> NlkgState:
    """Advance one centered second-order (leapfrog) time step."""
    cur = state.current
    acc = _nlkg_rhs(cur, state.lam, potential, cur.time)
    new_values = 2.0 * cur.values - state.previous.values + state.dt ** 2 * acc
    if not np.all(np.isfinite(new_values.view(np.float64))):
        raise NumericalError(
            f"NaN/Inf at step {state.step_index + 1}", step=state.step_index + 1)
    new = ComplexField3D(new_values, cur.spacing, cur.time + state.dt, cur.boundary)
    return NlkgState(new, cur, state.lam, state.dt, state.step_index + 1)


def _potential_density(values: np.ndarray, spacing: float, periodic: bool):
    grad2 = np.zeros(values.shape)
    for a in range(3):
        if periodic:
            d = np.roll(values, -1, axis=a) - values
        else:
            d = np.diff(values, axis=a, append=np.take(values, [-1], axis=a))
        grad2 += np.abs(d / spacing) ** 2
    rho = np.abs(values) ** 2
    return grad2 + 0.5 * (rho - 1.0) ** 2


def nlkg_energy(state: NlkgState) -> float:
    """Discrete energy sum(|dPhi/dt|^2 + |grad Phi|^2 + (|Phi|^2-1)^2/2) dx^3.

    Evaluated at the half step the leapfrog scheme actually conserves:
    |dPhi/dt|^2 from the level difference, the other terms averaged over
    the two levels.
    """
    cur, prev = state.current, state.previous
    periodic = cur.boundary is Boundary.PERIODIC
    kinetic = np.abs((cur.values - prev.values) / state.dt) ** 2
    pot = 0.5 * (_potential_density(cur.values, cur.spacing, periodic)
                 + _potential_density(prev.values, prev.spacing, periodic))
    return float(np.sum(kinetic + pot) * cur.spacing ** 3)
