"""Constrained minimization of the penalized energy over fixed-impulse fields.

The minimizer of I_lam = (1/(2 lam)) ||omega||^2 - E[omega] over non-negative
fields with impulse mu is a translate of the Lamb dipole, and the minimum
value is -mu^2 lam / (2 c0^2 pi).  The solver iterates the Euler-Lagrange
fixed point omega = lam (psi - W x2)_+, where W is chosen each step so the
updated field keeps impulse mu.

The impulse of lam (psi - W x2)_+ is non-increasing in W (the positive part
shrinks as W grows), so W is found by bisection on [0, max(psi/x2)], beyond
which the positive part is empty.  The x1-translation invariance of the
problem is quotiented by recentering the vorticity centroid after each step.
Descent of I_lam is monitored, not assumed; an increase is recorded in the
telemetry and iteration continues.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError, ConvergenceError
from .grid import Grid2D, ScalarField
from .functionals import impulse
from .poisson import solve_stream_spectral
from .specfun import first_zero_j1

__all__ = [
    "MinimizeConfig",
    "MinimizeResult",
    "el_fixed_point_step",
    "minimize",
    "minimum_closed_form",
]


@dataclass(frozen=True)
class MinimizeConfig:
    mu: float
    lam: float
    grid: Grid2D
    max_outer: int = 500
    tol_fixpoint: float = 1e-8
    tol_impulse: float = 1e-10

    def __post_init__(self):
        if not (self.mu > 0 and self.lam > 0):
            raise ValueError("mu and lam must be positive")
        if not (0 < self.tol_fixpoint < 1 and 0 < self.tol_impulse < 1):
            raise ValueError("tolerances must lie in (0, 1)")


@dataclass
class MinimizeResult:
    omega: ScalarField
    w: float
    value: float
    iterations: int
    residual: float
    w_history: list = field(default_factory=list)
    residual_history: list = field(default_factory=list)
    value_history: list = field(default_factory=list)


def minimum_closed_form(mu, lam):
    """Exact minimum -mu^2 lam / (2 c0^2 pi); zero impulse gives zero."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if mu < 0:
        raise ValueError("mu must be non-negative")
    c0 = first_zero_j1()
    return -(mu * mu) * lam / (2.0 * c0 * c0 * np.pi)


def _update_field(psi_vals, x2_row, lam, w):
    return lam * np.maximum(psi_vals - w * x2_row, 0.0)


def _el_step(omega, lam, mu):
    """One fixed-point update; returns (field values, W, psi values)."""
    grid = omega.grid
    if np.all(omega.values == 0.0):
        raise BracketError("zero field admits no positive-impulse update")
    psi = solve_stream_spectral(omega)
    x2_row = grid.x2[np.newaxis, :]

    interior = psi.values[:, 1:-1] / x2_row[:, 1:-1]
    w_hi = float(interior.max())
    if w_hi <= 0.0:
        raise BracketError("stream function is non-positive; no speed bracket")

    def impulse_at(w):
        vals = _update_field(psi.values, x2_row, lam, w)
        return grid.integrate(vals * x2_row)

    if impulse_at(0.0) < mu:
        raise BracketError(
            "impulse of the unconstrained update is below mu; iterate degenerate"
        )
    lo, hi = 0.0, w_hi
    width_target = 1e-12 * w_hi
    while hi - lo > width_target:
        mid = 0.5 * (lo + hi)
        if impulse_at(mid) >= mu:
            lo = mid
        else:
            hi = mid
    w = 0.5 * (lo + hi)
    return _update_field(psi.values, x2_row, lam, w), w, psi.values


def el_fixed_point_step(omega, lam, mu):
    """Euler-Lagrange update lam (psi - W x2)_+ with W set by the impulse.

    Returns the updated field and the speed W.  Raises BracketError when
    the impulse equation has no root in the bracket, which signals a
    degenerate iterate.
    """
    vals, w, _ = _el_step(omega, lam, mu)
    return ScalarField(omega.grid, vals), w


def _recenter(grid, vals):
    total = vals.sum()
    if total <= 0.0:
        return vals, 0
    centroid = float((vals * grid.x1[:, np.newaxis]).sum() / total)
    cells = int(round(centroid / grid.dx))
    if cells != 0:
        vals = np.roll(vals, -cells, axis=0)
    return vals, cells


def minimize(config):
    """Fixed-point minimization of I_lam over the impulse-mu admissible set.

    Starts from a Gaussian bump scaled to impulse mu, iterates the
    Euler-Lagrange update with centroid recentering, and stops when the
    relative L2 change drops below tol_fixpoint.  Raises ConvergenceError
    with per-iteration telemetry if max_outer is exhausted.
    """
    grid = config.grid
    lam, mu = config.lam, config.mu

    x1m, x2m = grid.mesh()
    sigma = 0.75 / np.sqrt(lam)
    seed_vals = np.exp(
        -((x1m**2) + (x2m - 1.5 / np.sqrt(lam)) ** 2) / (2.0 * sigma**2)
    )
    seed_vals[:, 0] = 0.0
    seed_vals[:, -1] = 0.0
    seed = ScalarField(grid, seed_vals)
    current = ScalarField(grid, seed_vals * (mu / impulse(seed)))

    x2_row = grid.x2[np.newaxis, :]
    w_hist, res_hist, val_hist = [], [], []
    telemetry = []
    for k in range(config.max_outer):
        new_vals, w, psi_vals = _el_step(current, lam, mu)
        # I_lam of the incoming iterate, from the already-computed psi.
        z2 = grid.integrate(current.values**2)
        e = 0.5 * grid.integrate(psi_vals * current.values)
        val_hist.append(0.5 * z2 / lam - e)

        new_vals, _ = _recenter(grid, new_vals)
        change = grid.norm_l2(new_vals - current.values) / grid.norm_l2(current.values)
        w_hist.append(w)
        res_hist.append(change)
        telemetry.append({"iteration": k, "w": w, "residual": change})
        current = ScalarField(grid, new_vals)
        if change < config.tol_fixpoint:
            break
    else:
        raise ConvergenceError(
            f"no fixed point within {config.max_outer} iterations "
            f"(last residual {res_hist[-1]:.3e})",
            telemetry=telemetry,
        )

    p_final = impulse(current)
    if abs(p_final - mu) > config.tol_impulse * mu:
        raise ConvergenceError(
            f"converged field misses the impulse constraint: {p_final!r} vs {mu!r}",
            telemetry=telemetry,
        )

    psi_final = solve_stream_spectral(current)
    z2 = grid.integrate(current.values**2)
    e = 0.5 * grid.integrate(psi_final.values * current.values)
    value = 0.5 * z2 / lam - e
    val_hist.append(value)
    return MinimizeResult(
        omega=current,
        w=w_hist[-1],
        value=value,
        iterations=len(res_hist),
        residual=res_hist[-1],
        w_history=w_hist,
        residual_history=res_hist,
        value_history=val_hist,
    )
