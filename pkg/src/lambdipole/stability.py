"""Orbital-stability experiment: perturb the dipole, evolve, track distance.

The distance to the traveling-wave orbit is the infimum over horizontal
translations of ||zeta - omega_L(. + (s, 0))||_2 plus the x2-weighted L1
norm of the same difference.  The template is re-evaluated analytically at
shifted coordinates, so no interpolation touches the evolved field.  The
template is compactly supported on a half-disk, so each trial shift only
needs sums over a core window; the remainder of the field contributes
shift-independent totals computed once.

The shift search scans every grid column (periodic wraparound included)
and then refines with golden sections to dx/100.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .dipole import lamb_vorticity, sample_lamb_vorticity
from .errors import ResolutionError
from .euler import run
from .functionals import impulse
from .grid import ScalarField

__all__ = [
    "PerturbationSpec",
    "StabilityReport",
    "orbit_distance",
    "perturbed_initial",
    "stability_experiment",
]

_KINDS = ("gaussian_bump", "impulse_rescale", "core_dent")


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    delta: float
    seed: int = 0
    center: tuple = None
    sigma: float = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")


@dataclass(frozen=True)
class StabilityReport:
    d0: float
    d_max: float
    time_series: list
    shift_series: list
    clipped_mass: float
    drift: dict
    conservation_pass: bool


def _core_window(grid, params):
    half_cols = int(np.ceil((params.a + 2 * grid.dx) / grid.dx))
    rows = int(np.ceil(params.a / grid.dy)) + 2
    return half_cols, min(rows, grid.ny)


def _template_window(params, x1_rel, x2):
    xx1, xx2 = np.meshgrid(x1_rel, x2, indexing="ij")
    return lamb_vorticity(params, xx1, xx2)


def _distance_at(s, zeta_vals, grid, params, totals, half_cols, rows, tmpl=None):
    """Distance contribution assembled from core-window sums plus totals."""
    g2_total, l1_total, w_col = totals
    ic = int(np.round((s + grid.lx) / grid.dx))
    offsets = np.arange(-half_cols, half_cols + 1)
    cols = (ic + offsets) % grid.nx
    if tmpl is None:
        # unwrapped node positions relative to the center, minimal image
        x1_rel = (ic + offsets) * grid.dx - grid.lx - s
        x1_rel = (x1_rel + grid.lx) % (2.0 * grid.lx) - grid.lx
        tmpl = _template_window(params, x1_rel, grid.x2[: rows + 1])
    zw = zeta_vals[cols, : rows + 1]
    diff = zw - tmpl
    w = w_col[: rows + 1]
    x2w = grid.x2[: rows + 1] * w
    g2_win_zeta = (zw * zw * w).sum() * grid.cell_area
    g2_win_diff = (diff * diff * w).sum() * grid.cell_area
    l1_win_zeta = (np.abs(zw) * x2w).sum() * grid.cell_area
    l1_win_diff = (np.abs(diff) * x2w).sum() * grid.cell_area
    g2 = max(g2_total - g2_win_zeta + g2_win_diff, 0.0)
    l1 = max(l1_total - l1_win_zeta + l1_win_diff, 0.0)
    return np.sqrt(g2) + l1


def orbit_distance(zeta, params):
    """Minimize the orbit distance over horizontal shifts of the template.

    Returns (distance, best_shift), where best_shift is the template center
    that fits the field best.  Shifting the input field moves best_shift by
    the opposite amount; the distance itself is translation-gauged.
    """
    grid = zeta.grid
    if params.a / grid.dx < 16.0:
        raise ResolutionError(
            f"dipole core spans {params.a / grid.dx:.1f} cells; need at least 16"
        )
    if params.a >= grid.ly:
        raise ResolutionError("dipole support exceeds the box height")

    half_cols, rows = _core_window(grid, params)
    w_col = grid.weights_x2()
    vals = zeta.values
    x2w_full = grid.x2 * w_col
    g2_total = (vals * vals * w_col).sum() * grid.cell_area
    l1_total = (np.abs(vals) * x2w_full).sum() * grid.cell_area
    totals = (g2_total, l1_total, w_col)

    def d(s):
        return _distance_at(s, vals, grid, params, totals, half_cols, rows)

    # coarse scan over all node-centered shifts, wraparound included; the
    # node-aligned template is shift-independent, so evaluate it once
    offsets = np.arange(-half_cols, half_cols + 1)
    tmpl0 = _template_window(params, offsets * grid.dx, grid.x2[: rows + 1])
    best_s, best_d = 0.0, np.inf
    for i in range(grid.nx):
        s = grid.x1[i]
        di = _distance_at(s, vals, grid, params, totals, half_cols, rows, tmpl=tmpl0)
        if di < best_d:
            best_d, best_s = di, s

    # golden-section refinement, far below the dx/100 contract: near an
    # exact orbit member the distance grows linearly in the shift offset,
    # so a loose interval would dominate the reported distance
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = best_s - grid.dx, best_s + grid.dx
    c, e = hi - phi * (hi - lo), lo + phi * (hi - lo)
    fc, fe = d(c), d(e)
    while hi - lo > grid.dx * 1e-10:
        if fc < fe:
            hi, e, fe = e, c, fc
            c = hi - phi * (hi - lo)
            fc = d(c)
        else:
            lo, c, fc = c, e, fe
            e = lo + phi * (hi - lo)
            fe = d(e)
    if fc < fe:
        s_ref, d_ref = c, fc
    else:
        s_ref, d_ref = e, fe
    if best_d < d_ref:
        s_ref, d_ref = best_s, best_d
    # map back to the principal periodic interval
    s_ref = (s_ref + grid.lx) % (2.0 * grid.lx) - grid.lx
    return float(d_ref), float(s_ref)


def perturbed_initial(params, pert, grid):
    """Perturbed dipole, clipped non-negative; returns (field, clipped mass).

    gaussian_bump adds a bump of L2 norm delta beside the core;
    impulse_rescale multiplies by (1 + delta / P), offsetting the impulse
    by delta; core_dent subtracts a bump of L2 norm delta at the vorticity
    maximum.  The clipped mass is the x2-weighted L1 norm removed.
    """
    base = sample_lamb_vorticity(params, grid)
    vals = base.values.copy()
    a = params.a
    if pert.kind == "impulse_rescale":
        p0 = impulse(base)
        vals *= 1.0 + pert.delta / p0
    else:
        if pert.kind == "gaussian_bump":
            center = pert.center if pert.center is not None else (0.0, 0.5 * a)
            sign = 1.0
        else:  # core_dent at the vorticity maximum
            peak = 1.8411837813406593 / np.sqrt(params.lam)
            center = pert.center if pert.center is not None else (0.0, peak)
            sign = -1.0
        sigma = pert.sigma if pert.sigma is not None else 0.25 * a
        x1m, x2m = grid.mesh()
        bump = np.exp(
            -((x1m - center[0]) ** 2 + (x2m - center[1]) ** 2) / (2.0 * sigma**2)
        )
        bump[:, 0] = 0.0
        bump[:, -1] = 0.0
        nrm = grid.norm_l2(bump)
        if nrm == 0.0:
            raise ValueError("perturbation bump vanishes on this grid")
        vals += sign * pert.delta / nrm * bump

    neg = np.minimum(vals, 0.0)
    clipped = grid.integrate(-neg * grid.x2[np.newaxis, :])
    vals = np.maximum(vals, 0.0)
    vals[:, 0] = 0.0
    vals[:, -1] = 0.0
    return ScalarField(grid, vals), float(clipped)


def stability_experiment(params, pert, t_end, config):
    """Evolve a perturbed dipole in the comoving frame and track the orbit.

    The frame speed is taken from params; orbit_distance is sampled every
    a/(4W).  Conservation drift of enstrophy, impulse, and energy over the
    run is recorded, with the pass flag set at the 1e-3 gate.
    """
    grid = config.grid
    initial, clipped = perturbed_initial(params, pert, grid)
    cfg = replace(config, t_end=t_end, comoving_speed=params.w)
    cadence = params.a / (4.0 * params.w)

    history = []
    snaps = run(initial, cfg, snapshot_every=cadence, history=history)

    times, dists, shifts = [], [], []
    for st in snaps:
        di, si = orbit_distance(st.zeta, params)
        times.append(st.t)
        dists.append(di)
        shifts.append(si)

    z0, p0, e0 = (
        history[0].enstrophy,
        history[0].impulse,
        history[0].energy,
    )
    drift = {
        "Z": max(abs(r.enstrophy - z0) / abs(z0) for r in history),
        "P": max(abs(r.impulse - p0) / abs(p0) for r in history),
        "E": max(abs(r.energy - e0) / abs(e0) for r in history),
    }
    ok = all(v <= 1e-3 for v in drift.values())
    if not ok:
        warnings.warn(
            "conservation drift exceeds the 1e-3 gate; distances unreliable",
            stacklevel=2,
        )
    return StabilityReport(
        d0=dists[0],
        d_max=max(dists),
        time_series=list(zip(times, dists)),
        shift_series=list(zip(times, shifts)),
        clipped_mass=clipped,
        drift=drift,
        conservation_pass=ok,
    )
