"""Lamb dipole in the upper half-plane: profile, velocity, invariants, scaling.

The dipole with parameters (lam, w) travels at speed w along the x1-axis.
In the frame moving with it, the stream function is

    Psi(r, theta) = c_l * J1(sqrt(lam) r) * sin(theta)   for r <= a,
                    -w * (r - a**2/r) * sin(theta)       for r > a,

with a = c0/sqrt(lam) (c0 the first positive zero of J1) and
c_l = -2 w / (sqrt(lam) J0(c0)).  The vorticity is lam * max(Psi, 0),
supported exactly on the upper half-disk r <= a.

All evaluators take Cartesian coordinates and accept scalars or arrays.
On the circle r = a both branches vanish and the inner branch is used,
so results are bit-reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError
from .grid import Grid2D, ScalarField
from .specfun import bessel_j, first_zero_j1

__all__ = [
    "LambParams",
    "LambInvariants",
    "lamb_stream_total",
    "lamb_vorticity",
    "lamb_velocity",
    "lamb_invariants",
    "lamb_rescale",
    "sample_lamb_vorticity",
]


@dataclass(frozen=True)
class LambParams:
    """Dipole parameters: lam sets the core scale, w the travel speed."""

    lam: float = 1.0
    w: float = 1.0

    def __post_init__(self):
        if not (self.lam > 0 and self.w > 0):
            raise ValueError("lam and w must be positive")

    @property
    def a(self):
        """Core radius c0/sqrt(lam)."""
        return first_zero_j1() / np.sqrt(self.lam)

    @property
    def c_l(self):
        """Inner-branch amplitude -2w/(sqrt(lam) J0(c0)); positive."""
        c0 = first_zero_j1()
        return -2.0 * self.w / (np.sqrt(self.lam) * bessel_j(0, c0))


@dataclass(frozen=True)
class LambInvariants:
    energy: float
    enstrophy: float
    impulse: float


def _checked_coords(x1, x2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x2 < 0):
        raise ValueError("dipole fields are defined for x2 >= 0")
    return np.broadcast_arrays(x1, x2)


def _scalar_in(x1, x2):
    return np.ndim(x1) == 0 and np.ndim(x2) == 0


def _ret(out, scalar):
    return float(out) if scalar else out


def lamb_stream_total(params, x1, x2):
    """Comoving stream function Psi at Cartesian points of the half-plane.

    Inner branch c_l J1(sqrt(lam) r) sin(theta) for r <= a, outer branch
    -w (r - a^2/r) sin(theta) beyond; continuous across r = a and zero on
    the x1-axis.  Returns 0 at the origin (the J1 sin(theta) structure
    removes the coordinate singularity).
    """
    scalar = _scalar_in(x1, x2)
    x1, x2 = _checked_coords(x1, x2)
    r = np.hypot(x1, x2)
    k = np.sqrt(params.lam)
    a = params.a

    out = np.zeros_like(r)
    sin_t = np.divide(x2, r, out=np.zeros_like(r), where=r > 0)

    inner = r <= a
    if np.any(inner):
        out[inner] = params.c_l * bessel_j(1, k * r[inner]) * sin_t[inner]
    outer = ~inner
    if np.any(outer):
        ro = r[outer]
        out[outer] = -params.w * (ro - a * a / ro) * sin_t[outer]
    return _ret(out, scalar)


def lamb_vorticity(params, x1, x2):
    """Vorticity lam * max(Psi, 0); supported on the upper half-disk r <= a."""
    scalar = _scalar_in(x1, x2)
    x1, x2 = _checked_coords(x1, x2)
    r = np.hypot(x1, x2)
    k = np.sqrt(params.lam)

    out = np.zeros_like(r)
    core = (r <= params.a) & (x2 > 0) & (r > 0)
    if np.any(core):
        vals = params.c_l * bessel_j(1, k * r[core]) * (x2[core] / r[core])
        out[core] = params.lam * np.maximum(vals, 0.0)
    return _ret(out, scalar)


def lamb_velocity(params, x1, x2):
    """Comoving velocity (d2 Psi, -d1 Psi) from analytic branch derivatives.

    The inner branch uses J1' = J0 - J1/x; the outer branch is elementary.
    Tends to (-w, 0) far away; equals (c_l sqrt(lam)/2, 0) at the origin.
    """
    scalar = _scalar_in(x1, x2)
    x1, x2 = _checked_coords(x1, x2)
    r = np.hypot(x1, x2)
    k = np.sqrt(params.lam)
    a = params.a
    w = params.w

    u1 = np.empty_like(r)
    u2 = np.empty_like(r)

    inner = (r <= a) & (r > 0)
    if np.any(inner):
        ri = r[inner]
        st = x2[inner] / ri
        ct = x1[inner] / ri
        j0 = bessel_j(0, k * ri)
        j1r = bessel_j(1, k * ri) / ri
        u1[inner] = params.c_l * (k * j0 * st * st + j1r * (ct * ct - st * st))
        u2[inner] = -params.c_l * st * ct * (k * j0 - 2.0 * j1r)

    origin = r == 0
    u1[origin] = params.c_l * k / 2.0
    u2[origin] = 0.0

    outer = r > a
    if np.any(outer):
        xo, yo = x1[outer], x2[outer]
        r4 = r[outer] ** 4
        u1[outer] = -w + w * a * a * (xo * xo - yo * yo) / r4
        u2[outer] = 2.0 * w * a * a * xo * yo / r4

    return _ret(u1, scalar), _ret(u2, scalar)


def lamb_invariants(params):
    """Closed-form kinetic energy, enstrophy, and impulse of the dipole."""
    c0 = first_zero_j1()
    base = c0 * c0 * np.pi
    w, lam = params.w, params.lam
    return LambInvariants(
        energy=base * w * w / lam,
        enstrophy=base * w * w,
        impulse=base * w / lam,
    )


def sample_lamb_vorticity(params, grid, x1_center=0.0):
    """Sample the dipole vorticity on a grid, core centered at (x1_center, 0)."""
    xx1, xx2 = grid.mesh()
    return ScalarField(grid, lamb_vorticity(params, xx1 - x1_center, xx2))


def lamb_rescale(base, lam, w):
    """Map a sampled unit dipole to parameters (lam, w) by the scaling law.

    The vorticity scales as w sqrt(lam) times the unit profile evaluated at
    sqrt(lam) x, so the rescaled field lives on the grid shrunk by
    1/sqrt(lam) with values w sqrt(lam) times the base values; no
    interpolation is involved.  The result is checked pointwise against
    direct evaluation.
    """
    k = float(np.sqrt(lam))
    g0 = base.grid
    grid = Grid2D(g0.lx / k, g0.ly / k, g0.nx, g0.ny)
    params = LambParams(lam, w)
    if params.a / grid.dx < 8:
        raise ResolutionError(
            f"core radius {params.a:.4g} spans fewer than 8 cells (dx={grid.dx:.4g})"
        )
    values = w * k * base.values

    direct = sample_lamb_vorticity(params, grid).values
    err = float(np.max(np.abs(values - direct)))
    if err > 1e-10 * max(1.0, float(np.max(np.abs(direct)))):
        raise AssertionError(
            f"rescaled field deviates from direct evaluation by {err:.3e}; "
            "base field is not a sampled unit dipole"
        )
    return ScalarField(grid, values)
