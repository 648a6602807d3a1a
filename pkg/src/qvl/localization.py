"""Density-guided refinement of sample points: projected gradient descent of
the trilinear density within the plane perpendicular to the local
pseudo-vorticity direction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDirectionError, DomainError
from .field import ComplexField3D, DensitySampler, interp_complex
from .reduction import SampleGraph

log = logging.getLogger(__name__)

PSEUDO_VORTICITY_FLOOR = 1e-12


@dataclass
class LocalizeConfig:
    max_iters: int = 100
    grad_tol: float | None = None  # default: 1e-6 * mean density
    step_init: float = 0.25  # in units of spacing
    trust_radius: float = 1.0  # in units of spacing

    def __post_init__(self):
        if self.max_iters <= 0 or self.step_init <= 0 or self.trust_radius <= 0:
            raise ValueError("config values must be positive")
        if self.grad_tol is not None and self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")


def pseudo_vorticity(field: ComplexField3D, point) -> np.ndarray:
    """grad(Re Phi) x grad(Im Phi) at a point; aligned with the core tangent.

    Gradients are central differences of the trilinearly interpolated field
    at half-cell offsets. Not normalized.
    """
    h = 0.5 * field.spacing
    point = np.asarray(point, dtype=np.float64)
    grads = np.zeros((3,), dtype=np.complex128)
    for a in range(3):
        e = np.zeros(3)
        e[a] = h
        grads[a] = (interp_complex(field, point + e) - interp_complex(field, point - e)) / (2 * h)
    pv = np.cross(grads.real, grads.imag)
    if np.linalg.norm(pv) < PSEUDO_VORTICITY_FLOOR:
        raise DegenerateDirectionError(f"pseudo-vorticity underflow at {point}")
    return pv


def _rho_safe(rho: DensitySampler, point):
    """Density, with out-of-domain candidates treated as non-improving."""
    try:
        return rho.at(point)
    except DomainError:
        return np.inf


def _projected_density_gradient(rho: DensitySampler, point, tangent_hat, h):
    g = np.zeros(3)
    for a in range(3):
        e = np.zeros(3)
        e[a] = h
        lo, hi = _rho_safe(rho, point - e), _rho_safe(rho, point + e)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            return np.zeros(3)
        g[a] = (hi - lo) / (2 * h)
    return g - np.dot(g, tangent_hat) * tangent_hat


def localize_sample(field: ComplexField3D, point, tangent,
                    config: LocalizeConfig | None = None,
                    rho: DensitySampler | None = None) -> np.ndarray:
    """Minimize trilinear density in the plane through `point` perpendicular
    to `tangent`, by projected gradient descent with backtracking halving.

    Never returns a point with higher density than the input; displacement
    from the start is clamped to the trust radius.
    """
    config = config or LocalizeConfig()
    rho = rho or DensitySampler(field)
    x0 = np.asarray(point, dtype=np.float64)
    t_hat = np.asarray(tangent, dtype=np.float64)
    t_hat = t_hat / np.linalg.norm(t_hat)
    dx = field.spacing
    grad_tol = config.grad_tol if config.grad_tol is not None \
        else 1e-6 * rho.mean_density
    fd_h = 0.1 * dx
    trust = config.trust_radius * dx

    x = x0.copy()
    fx = rho.at(x)
    for _ in range(config.max_iters):
        g = _projected_density_gradient(rho, x, t_hat, fd_h)
        gn = np.linalg.norm(g)
        if gn < grad_tol:
            break
        direction = -g / gn
        step = config.step_init * dx
        accepted = False
        for _ in range(25):
            cand = x + step * direction
            disp = cand - x0
            overrun = np.linalg.norm(disp) > trust
            if overrun:
                disp = disp * (trust / np.linalg.norm(disp))
                cand = x0 + disp
            fc = _rho_safe(rho, cand)
            if fc < fx:
                x, fx = cand, fc
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        if np.linalg.norm(x - x0) >= trust - 1e-15:
            break
    # re-project the total displacement so the plane constraint holds exactly
    d = x - x0
    d = d - np.dot(d, t_hat) * t_hat
    out = x0 + d
    if _rho_safe(rho, out) > rho.at(np.asarray(point, dtype=np.float64)):
        return np.asarray(point, dtype=np.float64)
    return out


def localize_graph(field: ComplexField3D, samples: SampleGraph,
                   config: LocalizeConfig | None = None) -> SampleGraph:
    """Refine every sample point; adjacency is unchanged.

    Tangents come from pseudo-vorticity; where that is degenerate the chord
    to an adjacent sample point is used, and points with no usable direction
    are left in place (count logged).
    """
    config = config or LocalizeConfig()
    if len(samples) == 0:
        return SampleGraph(points=samples.points.copy(), adjacency=[],
                           origin_component=samples.origin_component,
                           spacing=samples.spacing)
    rho = DensitySampler(field)
    new_points = samples.points.copy()
    degenerate = 0
    for i in range(len(samples)):
        p = samples.points[i]
        try:
            tangent = pseudo_vorticity(field, p)
        except DegenerateDirectionError:
            tangent = None
            for j in samples.adjacency[i]:
                chord = samples.points[j] - p
                if np.linalg.norm(chord) > 1e-12:
                    tangent = chord
                    break
            if tangent is None:
                degenerate += 1
                continue
        new_points[i] = localize_sample(field, p, tangent, config, rho)
    if degenerate:
        log.warning("localize_graph: %d point(s) had no usable tangent", degenerate)
    return SampleGraph(points=new_points,
                       adjacency=[list(a) for a in samples.adjacency],
                       origin_component=samples.origin_component,
                       spacing=samples.spacing,
                       endpoint_events=samples.endpoint_events)
