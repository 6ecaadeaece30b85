"""Pseudo-spectral evolution: invariants, traveling-wave motion, convergence.

The dipole is an exact traveling wave, which turns time integration into a
measurable experiment: in the comoving frame the field must stand still,
in the lab frame the centroid must advance at speed w, and the lingering
shape error must shrink under refinement.  Invariant drift has no excuse
to exceed roundoff for Z and E (the scheme conserves them spectrally);
the impulse drifts at the dealiasing level, measured 5e-5 on the coarse
grid used here.
"""

import warnings

import numpy as np
import pytest

from lambdipole import (
    BlowUpError,
    EvolveConfig,
    Grid2D,
    LambParams,
    ScalarField,
    TruncationWarning,
    ddx1,
    ddx2,
    dealias_project,
    lamb_vorticity,
    make_state,
    odd_extend,
    run,
    sample_lamb_vorticity,
    step,
)

P = LambParams(1.0, 1.0)
A = P.a


def _quiet_run(*args, **kwargs):
    # ripples shed by the projected kink trip the containment heuristic
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return run(*args, **kwargs)


# =========================================================================
# dealiasing
# =========================================================================

def test_dealias_removes_high_modes_only():
    g = Grid2D(2.0, 3.0, 32, 32)
    x1m, x2m = g.mesh()
    keep = np.sin(np.pi * 2 * x2m / g.ly) * np.cos(2 * np.pi * 3 * x1m / (2 * g.lx))
    kill = np.sin(np.pi * 30 * x2m / g.ly)
    out = dealias_project(ScalarField(g, keep + kill), 2.0 / 3.0)
    assert np.max(np.abs(out.values - keep)) < 1e-13


def test_dealias_is_a_projection():
    g = Grid2D(2.0, 3.0, 32, 32)
    rng = np.random.default_rng(6)
    vals = rng.standard_normal(g.shape)
    vals[:, 0] = vals[:, -1] = 0.0
    once = dealias_project(ScalarField(g, vals), 2.0 / 3.0)
    twice = dealias_project(once, 2.0 / 3.0)
    assert np.max(np.abs(twice.values - once.values)) < 1e-13
    assert once.boundary_rows_max() == 0.0


# =========================================================================
# conservation and near-stationarity in the comoving frame
# =========================================================================

def test_comoving_conservation():
    g = Grid2D(8 * A, 8 * A, 128, 128)
    cfg = EvolveConfig(grid=g, dt=0.05, t_end=0.5 * A, comoving_speed=P.w)
    hist = []
    _quiet_run(sample_lamb_vorticity(P, g), cfg, snapshot_every=cfg.t_end,
               history=hist)
    z0, p0, e0 = hist[0].enstrophy, hist[0].impulse, hist[0].energy
    assert max(abs(r.enstrophy - z0) / z0 for r in hist) < 1e-8    # measured 3e-10
    assert max(abs(r.energy - e0) / e0 for r in hist) < 1e-10      # measured 3e-12
    assert max(abs(r.impulse - p0) / p0 for r in hist) < 2e-4      # measured 4.5e-5


def test_comoving_field_stands_still():
    g = Grid2D(8 * A, 8 * A, 128, 128)
    cfg = EvolveConfig(grid=g, dt=0.05, t_end=0.5 * A, comoving_speed=P.w)
    initial = sample_lamb_vorticity(P, g)
    snaps = _quiet_run(initial, cfg, snapshot_every=cfg.t_end)
    # compare against the projected initial state actually evolved
    base = snaps[0].zeta
    drift = g.norm_l2(snaps[-1].zeta.values - base.values) / base.norm_l2()
    assert drift < 3e-2
    assert abs(snaps[-1].diagnostics.centroid_x1) < 0.05 * A


def test_negative_undershoot_is_resolution_limited():
    g = Grid2D(8 * A, 8 * A, 128, 128)
    cfg = EvolveConfig(grid=g, dt=0.05, t_end=0.5 * A, comoving_speed=P.w)
    hist = []
    _quiet_run(sample_lamb_vorticity(P, g), cfg, snapshot_every=cfg.t_end,
               history=hist)
    peak = float(sample_lamb_vorticity(P, g).values.max())
    worst = min(r.min_zeta for r in hist)
    # the projected Lipschitz kink rings at the 1e-2 level on this grid
    # and shrinks linearly with dx; see the stability suite for its effect
    assert worst / peak > -3e-2  # measured -1.5e-2


# =========================================================================
# lab-frame traveling wave and refinement
# =========================================================================

def _lab_shape_error(n):
    g = Grid2D(16 * A, 16 * A, n, n)
    cfg = EvolveConfig(grid=g, dt=0.05, t_end=2.0 * A)
    snaps = _quiet_run(sample_lamb_vorticity(P, g), cfg, snapshot_every=cfg.t_end)
    final = snaps[-1].zeta
    cx = snaps[-1].diagnostics.centroid_x1
    x1m, x2m = g.mesh()

    def err(s):
        return g.norm_l2(final.values - lamb_vorticity(P, x1m - s, x2m))

    phi = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = cx - 2 * g.dx, cx + 2 * g.dx
    c, e = hi - phi * (hi - lo), lo + phi * (hi - lo)
    fc, fe = err(c), err(e)
    while hi - lo > 1e-10:
        if fc < fe:
            hi, e, fe = e, c, fc
            c = hi - phi * (hi - lo)
            fc = err(c)
        else:
            lo, c, fc = c, e, fe
            e = lo + phi * (hi - lo)
            fe = err(e)
    speed = cx / cfg.t_end
    shape = min(fc, fe) / g.norm_l2(sample_lamb_vorticity(P, g).values)
    return speed, shape


def test_lab_frame_travel_and_refinement():
    speed_c, shape_c = _lab_shape_error(128)
    speed_f, shape_f = _lab_shape_error(256)
    assert abs(speed_c - P.w) < 2e-2   # measured 2.0e-3
    assert abs(speed_f - P.w) < 2e-2   # measured 2.8e-3
    assert shape_f < 2e-2              # measured 1.8e-2
    # first-order shape convergence from the transported kink caps the
    # refinement factor at 2 sqrt(2); measured 3.0 here
    assert shape_c / shape_f > 2.3


# =========================================================================
# stepping mechanics
# =========================================================================

def test_snapshot_cadence_and_history():
    g = Grid2D(8 * A, 8 * A, 64, 64)
    cfg = EvolveConfig(grid=g, dt=0.1, t_end=1.0, comoving_speed=P.w)
    hist = []
    snaps = _quiet_run(sample_lamb_vorticity(P, g), cfg, snapshot_every=0.25,
                       history=hist)
    assert len(hist) == 11  # initial plus ten steps
    assert snaps[0].t == 0.0
    assert snaps[-1].t == pytest.approx(1.0)
    assert [pytest.approx(s.t) for s in snaps] == [0.0, 0.3, 0.5, 0.8, 1.0]


def test_final_partial_step():
    g = Grid2D(8 * A, 8 * A, 64, 64)
    cfg = EvolveConfig(grid=g, dt=0.3, t_end=0.7, comoving_speed=P.w)
    snaps = _quiet_run(sample_lamb_vorticity(P, g), cfg, snapshot_every=10.0)
    assert snaps[-1].t == pytest.approx(0.7)


def test_cfl_splitting_matches_smaller_steps():
    g = Grid2D(8 * A, 8 * A, 64, 64)
    initial = dealias_project(sample_lamb_vorticity(P, g), 2.0 / 3.0)
    s0 = make_state(0.0, initial)
    # choose cfl_max so a dt = 0.4 step splits into exactly two substeps,
    # which must then agree with two explicit dt = 0.2 steps to roundoff
    u1 = ddx2(s0.psi).values
    u2 = -ddx1(s0.psi).values
    vmax = max(np.abs(u1 - P.w).max(), np.abs(u2).max())
    cfl = 0.2 * vmax / min(g.dx, g.dy) * (1.0 + 1e-9)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        tight = step(s0, EvolveConfig(grid=g, dt=0.4, t_end=1.0, cfl_max=cfl,
                                      comoving_speed=P.w))
        loose = step(s0, EvolveConfig(grid=g, dt=0.2, t_end=1.0, cfl_max=1e9,
                                      comoving_speed=P.w))
        loose = step(loose, EvolveConfig(grid=g, dt=0.2, t_end=1.0, cfl_max=1e9,
                                         comoving_speed=P.w))
    assert tight.t == pytest.approx(loose.t)
    assert np.max(np.abs(tight.zeta.values - loose.zeta.values)) < 1e-12


def test_blow_up_carries_last_good_state():
    g = Grid2D(8.0, 8.0, 16, 16)
    vals = np.zeros(g.shape)
    vals[4:8, 4:8] = 1e160  # quadratic advection overflows immediately
    f = ScalarField(g, vals)
    cfg = EvolveConfig(grid=g, dt=1.0, t_end=2.0, cfl_max=1e300)
    with np.errstate(over="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        state = make_state(0.0, f)
        with pytest.raises(BlowUpError) as info:
            step(state, cfg)
    assert info.value.state.t == 0.0


def test_run_validates_input():
    g = Grid2D(8 * A, 8 * A, 64, 64)
    other = Grid2D(8 * A, 8 * A, 32, 32)
    cfg = EvolveConfig(grid=g, dt=0.1, t_end=1.0)
    with pytest.raises(ValueError):
        run(sample_lamb_vorticity(P, other), cfg, snapshot_every=1.0)
    bad = np.ones(g.shape)
    with pytest.raises(ValueError):
        run(ScalarField(g, bad), cfg, snapshot_every=1.0)
    with pytest.raises(ValueError):
        run(sample_lamb_vorticity(P, g), cfg, snapshot_every=0.0)


def test_config_validation():
    g = Grid2D(8 * A, 8 * A, 64, 64)
    with pytest.raises(ValueError):
        EvolveConfig(grid=g, dt=0.0, t_end=1.0)
    with pytest.raises(ValueError):
        EvolveConfig(grid=g, dt=0.1, t_end=1.0, dealias=0.0)


# =========================================================================
# odd extension
# =========================================================================

def test_odd_extension_mirrors_values():
    g = Grid2D(2.0, 3.0, 16, 16)
    rng = np.random.default_rng(13)
    vals = rng.standard_normal(g.shape)
    vals[:, 0] = vals[:, -1] = 0.0
    ext = odd_extend(ScalarField(g, vals))
    assert ext.x2.shape == (2 * g.ny + 1,)
    assert ext.values.shape == (g.nx, 2 * g.ny + 1)
    assert np.all(ext.x2[: g.ny] == -g.x2[:0:-1])
    # value at -x2 is the negative of the value at +x2
    assert np.allclose(ext.values[:, : g.ny], -vals[:, :0:-1])
    assert np.allclose(ext.values[:, g.ny :], vals)


def test_odd_extension_requires_zero_axis_row():
    g = Grid2D(2.0, 3.0, 16, 16)
    vals = np.ones(g.shape)
    with pytest.raises(ValueError):
        odd_extend(ScalarField(g, vals))
