"""Command-line driver: each experiment is a subcommand with pinned formats.

Config resolution: flags override entries of an optional ``--config`` file
(one ``key = value`` per line, ``#`` comments), which override built-in
defaults.  Every run writes ``manifest.json`` echoing the resolved
parameters, so a run is reproducible from its manifest alone; nothing in
the outputs depends on wall-clock time.

File formats:

* snapshot: raw little-endian float64, row-major with x2 as the outer
  index, plus a ``.json`` sidecar carrying Nx, Ny, Lx, Ly (box half-width
  and height), t, the quantity name, byte order, and dtype;
* diagnostics CSV: header ``t,Z,P,E,min_zeta,centroid_x1``, one row per
  time step, 17 significant digits;
* stability CSV: header ``t,d,best_shift``.

Exit codes: 0 success, 1 validation or usage error (one-line diagnostic on
stderr), 2 numerical failure (blow-up, non-convergence, failed check) with
telemetry written to the output directory.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.fft

from . import __version__
from .dipole import LambParams, lamb_invariants, sample_lamb_vorticity
from .errors import (
    BlowUpError,
    BracketError,
    ConvergenceError,
    CostGuardError,
    ResolutionError,
)
from .euler import EvolveConfig, run
from .functionals import (
    bound_hls,
    bound_sharp,
    energy_ratio,
    impulse,
    random_bump_field,
)
from .grid import Grid2D, ScalarField
from .poisson import compare_solvers, kinetic_energy, solve_stream_spectral
from .specfun import first_zero_j1
from .stability import PerturbationSpec, stability_experiment
from .varmin import MinimizeConfig, minimize

__all__ = [
    "RunConfig",
    "main",
    "read_snapshot",
    "write_snapshot",
]

_SUBCOMMANDS = (
    "dipole",
    "poisson-check",
    "inequality",
    "minimize",
    "evolve",
    "stability",
)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    parameters: dict
    output_dir: Path
    seed: int


# =========================================================================
# snapshot format
# =========================================================================

def write_snapshot(field, path, t=0.0, quantity="omega"):
    """Raw little-endian f64 payload (x2 outer, x1 inner) plus JSON sidecar."""
    path = Path(path)
    grid = field.grid
    payload = field.values.T.astype("<f8").tobytes()
    try:
        path.write_bytes(payload)
        sidecar = {
            "Nx": grid.nx,
            "Ny": grid.ny,
            "Lx": grid.lx,
            "Ly": grid.ly,
            "t": t,
            "quantity-name": quantity,
            "byte-order": "LE",
            "dtype": "f64",
        }
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
        )
    except OSError as exc:
        raise OSError(f"cannot write snapshot {path}: {exc}") from exc


def read_snapshot(path):
    """Read a snapshot pair back; returns (ScalarField, sidecar dict)."""
    path = Path(path)
    try:
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        payload = path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read snapshot {path}: {exc}") from exc
    nx, ny = meta["Nx"], meta["Ny"]
    expected = nx * (ny + 1) * 8
    if len(payload) != expected:
        raise ValueError(
            f"snapshot {path}: payload is {len(payload)} bytes, "
            f"sidecar implies {expected}"
        )
    vals = np.frombuffer(payload, dtype="<f8").reshape(ny + 1, nx).T
    grid = Grid2D(meta["Lx"], meta["Ly"], nx, ny)
    return ScalarField(grid, vals.copy()), meta


def _fmt(x):
    return f"{x:.17g}"


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_diagnostics_csv(path, records):
    lines = ["t,Z,P,E,min_zeta,centroid_x1"]
    for r in records:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.t,
                    r.enstrophy,
                    r.impulse,
                    r.energy,
                    r.min_zeta,
                    r.centroid_x1,
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


# =========================================================================
# subcommand bodies; each returns the list of files it wrote
# =========================================================================

def _square_grid(args, default_half):
    half = args.box if args.box is not None else default_half
    return Grid2D(half, half, args.grid, args.grid)


def _cmd_dipole(args, out):
    params = LambParams(lam=args.lam, w=args.w)
    grid = _square_grid(args, 8.0 * params.a)
    field = sample_lamb_vorticity(params, grid)
    inv = lamb_invariants(params)
    psi = solve_stream_spectral(field)
    report = {
        "lambda": params.lam,
        "w": params.w,
        "a": params.a,
        "closed_form": {
            "energy": inv.energy,
            "enstrophy": inv.enstrophy,
            "impulse": inv.impulse,
        },
        "measured": {
            "energy": kinetic_energy(field, psi, check=False),
            "enstrophy": grid.integrate(field.values**2),
            "impulse": impulse(field),
        },
    }
    write_snapshot(field, out / "omega.raw", quantity="omega")
    _write_json(out / "invariants.json", report)
    return ["omega.raw", "omega.raw.json", "invariants.json"]


def _cmd_poisson_check(args, out):
    results = [compare_solvers(args.seed + i) for i in range(args.seeds)]
    worst_stream = max(r["stream_rel_l2"] for r in results)
    worst_energy = max(r["energy_identity_rel"] for r in results)
    report = {
        "seeds": args.seeds,
        "first_seed": args.seed,
        "worst_stream_rel_l2": worst_stream,
        "worst_energy_identity_rel": worst_energy,
        "tolerance_stream": args.tol,
        "tolerance_energy": 1e-8,
        "results": results,
    }
    report["pass"] = bool(worst_stream <= args.tol and worst_energy <= 1e-8)
    _write_json(out / "report.json", report)
    if not report["pass"]:
        raise ConvergenceError(
            f"solver disagreement {worst_stream:.3e} exceeds {args.tol:.1e}"
        )
    return ["report.json"]


def _cmd_inequality(args, out):
    grid = Grid2D(8.0, 8.0, args.grid, args.grid)
    limit = bound_sharp() + 5e-3
    worst, worst_seed = -np.inf, None
    for i in range(args.samples):
        field = random_bump_field(grid, seed=args.seed + i)
        ratio = energy_ratio(field).ratio
        if ratio > worst:
            worst, worst_seed = ratio, args.seed + i
    report = {
        "samples": args.samples,
        "first_seed": args.seed,
        "max_ratio": worst,
        "argmax_seed": worst_seed,
        "bound_sharp": bound_sharp(),
        "bound_hls": bound_hls(),
        "tolerance": 5e-3,
        "pass": bool(worst <= limit),
    }
    _write_json(out / "report.json", report)
    if not report["pass"]:
        raise ConvergenceError(f"ratio {worst:.6f} exceeds the sharp bound band")
    return ["report.json"]


def _cmd_minimize(args, out):
    lam = args.lam
    a = first_zero_j1() / np.sqrt(lam)
    grid = _square_grid(args, 12.0 * a)
    config = MinimizeConfig(
        mu=args.mu,
        lam=lam,
        grid=grid,
        max_outer=args.max_outer,
        tol_fixpoint=args.tol_fixpoint,
    )
    result = minimize(config)
    write_snapshot(result.omega, out / "omega.raw", quantity="omega")
    _write_json(
        out / "telemetry.json",
        {
            "value": result.value,
            "w": result.w,
            "iterations": result.iterations,
            "residual": result.residual,
            "w_history": result.w_history,
            "residual_history": result.residual_history,
            "value_history": result.value_history,
        },
    )
    return ["omega.raw", "omega.raw.json", "telemetry.json"]


def _cmd_evolve(args, out):
    params = LambParams(lam=args.lam, w=args.w)
    grid = _square_grid(args, 8.0 * params.a)
    t_end = args.t_end if args.t_end is not None else 2.0 * params.a / params.w
    config = EvolveConfig(
        grid=grid,
        dt=args.dt,
        t_end=t_end,
        cfl_max=args.cfl,
        dealias=args.dealias,
        comoving_speed=args.comoving,
    )
    initial = sample_lamb_vorticity(params, grid)
    snapshot_every = (
        args.snapshot_every if args.snapshot_every is not None else t_end
    )
    history = []
    snaps = run(initial, config, snapshot_every, history=history)
    files = []
    for idx, st in enumerate(snaps):
        name = f"snapshot_{idx:04d}.raw"
        write_snapshot(st.zeta, out / name, t=st.t, quantity="zeta")
        files += [name, name + ".json"]
    _write_diagnostics_csv(out / "diagnostics.csv", history)
    files.append("diagnostics.csv")
    return files


def _cmd_stability(args, out):
    params = LambParams(lam=args.lam, w=args.w)
    grid = _square_grid(args, 8.0 * params.a)
    t_end = args.t_end if args.t_end is not None else 4.0 * params.a / params.w
    config = EvolveConfig(
        grid=grid, dt=args.dt, t_end=t_end, cfl_max=args.cfl, dealias=args.dealias
    )
    pert = PerturbationSpec(kind=args.kind, delta=args.delta, seed=args.seed)
    report = stability_experiment(params, pert, t_end, config)

    lines = ["t,d,best_shift"]
    for (t, d), (_, s) in zip(report.time_series, report.shift_series):
        lines.append(",".join(_fmt(v) for v in (t, d, s)))
    (out / "stability.csv").write_text("\n".join(lines) + "\n")
    _write_json(
        out / "report.json",
        {
            "params": {"lambda": params.lam, "w": params.w, "a": params.a},
            "perturbation": {
                "kind": pert.kind,
                "delta": pert.delta,
                "seed": pert.seed,
            },
            "grid": {
                "Nx": grid.nx,
                "Ny": grid.ny,
                "Lx": grid.lx,
                "Ly": grid.ly,
            },
            "tolerances": {"conservation_gate": 1e-3},
            "d0": report.d0,
            "d_max": report.d_max,
            "clipped_mass": report.clipped_mass,
            "drift": report.drift,
            "conservation_pass": report.conservation_pass,
        },
    )
    if not report.conservation_pass:
        raise ConvergenceError(
            "conservation drift exceeded the 1e-3 gate; see report.json"
        )
    return ["stability.csv", "report.json"]


_HANDLERS = {
    "dipole": _cmd_dipole,
    "poisson-check": _cmd_poisson_check,
    "inequality": _cmd_inequality,
    "minimize": _cmd_minimize,
    "evolve": _cmd_evolve,
    "stability": _cmd_stability,
}


# =========================================================================
# argument plumbing
# =========================================================================

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lambdipole",
        description="Numerical laboratory for a traveling vortex pair",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, default_out):
        p.add_argument("--config", type=str, default=None,
                       help="key = value file; flags override it")
        p.add_argument("--out", type=str, default=default_out,
                       help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("dipole", help="sample the dipole, report invariants")
    common(p, "dipole-out")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--w", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--box", type=float, default=None,
                   help="box half-width (default 8a)")

    p = sub.add_parser("poisson-check",
                       help="quadrature vs spectral stream functions")
    common(p, "poisson-check-out")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-3)

    p = sub.add_parser("inequality", help="energy-ratio bound on random fields")
    common(p, "inequality-out")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--grid", type=int, default=64)

    p = sub.add_parser("minimize", help="fixed-impulse energy minimization")
    common(p, "minimize-out")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--box", type=float, default=None,
                   help="box half-width (default 12a)")
    p.add_argument("--max-outer", type=int, default=500)
    p.add_argument("--tol-fixpoint", type=float, default=1e-8)

    p = sub.add_parser("evolve", help="evolve the dipole, write diagnostics")
    common(p, "evolve-out")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--w", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--box", type=float, default=None)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--t-end", type=float, default=None,
                   help="default 2a/W")
    p.add_argument("--cfl", type=float, default=0.5)
    p.add_argument("--dealias", type=float, default=2.0 / 3.0)
    p.add_argument("--comoving", type=float, default=0.0)
    p.add_argument("--snapshot-every", type=float, default=None,
                   help="default: initial and final only")

    p = sub.add_parser("stability", help="perturb, evolve comoving, track orbit")
    common(p, "stability-out")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--w", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--box", type=float, default=None)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--t-end", type=float, default=None,
                   help="default 4a/W")
    p.add_argument("--cfl", type=float, default=0.5)
    p.add_argument("--dealias", type=float, default=2.0 / 3.0)
    p.add_argument("--kind", type=str, default="gaussian_bump",
                   choices=("gaussian_bump", "impulse_rescale", "core_dent"))
    p.add_argument("--delta", type=float, default=0.0)
    return parser


def _load_config_file(path):
    entries = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        if key in ("config",):
            raise ValueError(f"{path}:{lineno}: config files cannot nest")
        entries += [f"--{key.replace('_', '-')}", value]
    return entries


def _resolve_argv(argv):
    """Splice config-file entries after the subcommand so flags win."""
    if not argv:
        return argv
    head, rest = argv[0], list(argv[1:])
    config_path = None
    for i, tok in enumerate(rest):
        if tok == "--config" and i + 1 < len(rest):
            config_path = rest[i + 1]
        elif tok.startswith("--config="):
            config_path = tok.split("=", 1)[1]
    if config_path is None:
        return argv
    return [head] + _load_config_file(config_path) + rest


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(_resolve_argv(list(argv)))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out}: {exc}", file=sys.stderr)
        return 1

    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("subcommand", "config")
    }
    run_config = RunConfig(
        subcommand=args.subcommand,
        parameters=params,
        output_dir=out,
        seed=args.seed,
    )

    try:
        with scipy.fft.set_workers(args.threads):
            files = _HANDLERS[args.subcommand](args, out)
    except (BracketError, ConvergenceError, BlowUpError, CostGuardError) as exc:
        telemetry = getattr(exc, "telemetry", None)
        _write_json(
            out / "telemetry.json",
            {
                "error": type(exc).__name__,
                "message": str(exc),
                "telemetry": telemetry if telemetry is not None else [],
            },
        )
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ResolutionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    manifest = {
        "subcommand": run_config.subcommand,
        "version": __version__,
        "parameters": {
            k: (str(v) if isinstance(v, Path) else v)
            for k, v in run_config.parameters.items()
        },
        "outputs": sorted(set(files)) + ["manifest.json"],
    }
    _write_json(out / "manifest.json", manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
