import numpy as np
import pytest

from qvl.field import (
    Boundary,
    ComplexField3D,
    combine_fields,
    gen_straight_vortex,
    gen_vortex_ring,
)

STRAIGHT_CORE = (32.3, 32.4)
RING_CENTER = np.array([32.0, 32.0, 32.0])
RING_RADIUS = 10.0


@pytest.fixture(scope="session")
def straight64():
    """64^3 straight +z vortex, core off-grid at (32.3, 32.4), winding +1."""
    return gen_straight_vortex((64, 64, 64), 1.0, "z", STRAIGHT_CORE, +1)


@pytest.fixture(scope="session")
def ring64():
    """64^3 vortex ring, radius 10 cells, z-normal, centered."""
    return gen_vortex_ring((64, 64, 64), 1.0, RING_CENTER, RING_RADIUS, "z")


@pytest.fixture(scope="session")
def straight32():
    return gen_straight_vortex((32, 32, 32), 1.0, "z", (16.3, 16.4), +1)


@pytest.fixture(scope="session")
def crossing64():
    """Two exactly intersecting straight vortices (z-line and x-line),
    cores at cell centers so the node cluster forms a true junction."""
    f1 = gen_straight_vortex((64, 64, 64), 1.0, "z", (32.5, 32.5), +1)
    f2 = gen_straight_vortex((64, 64, 64), 1.0, "x", (32.5, 32.5), +1)
    return combine_fields(f1, f2)


@pytest.fixture(scope="session")
def uniform16():
    return ComplexField3D(np.ones((16, 16, 16), dtype=np.complex128), 1.0)


def loop_circulation(field, loop_indices):
    """Independent winding oracle: sum of wrapped phase differences along an
    arbitrary closed loop of grid indices."""
    phases = []
    for idx in loop_indices:
        v = field.values[tuple(np.mod(idx, field.dims))]
        p = np.angle(v)
        phases.append(p + 2 * np.pi if p <= -np.pi else p)
    total = 0.0
    for j in range(len(phases)):
        d = phases[(j + 1) % len(phases)] - phases[j]
        d = np.mod(d, 2 * np.pi)
        if d > np.pi:
            d -= 2 * np.pi
        total += d
    return total


def square_loop(center, half, plane_axis):
    """Axis-aligned square loop of grid indices around `center`, CCW with
    respect to the +plane_axis direction."""
    from qvl.field import _PLANE_AXES
    ua, va = _PLANE_AXES[plane_axis]
    cu, cv = center[ua], center[va]
    pts = []
    r = half
    for du in range(-r, r):
        pts.append((cu + du, cv - r))
    for dv in range(-r, r):
        pts.append((cu + r, cv + dv))
    for du in range(r, -r, -1):
        pts.append((cu + du, cv + r))
    for dv in range(r, -r, -1):
        pts.append((cu - r, cv + dv))
    loop = []
    for u, v in pts:
        idx = list(center)
        idx[ua] = u
        idx[va] = v
        loop.append(tuple(idx))
    return loop
