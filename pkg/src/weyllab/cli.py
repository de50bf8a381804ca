"""weyllab command line: verify, fields, observables, waveform, separation.

Exit codes: 0 success (verification passed), 1 verification failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from weyllab import __version__
from weyllab.config import RunConfig, parse_config, with_overrides
from weyllab.em_gauge import (
    BRANCH,
    closed_form_fields,
    potential_for,
    random_gauges,
    separation_field,
)
from weyllab.errors import ConfigError, WeylLabError
from weyllab.observables import DENSITY_FLOOR, SPIN_OPERATORS, density
from weyllab.algebra import PAULI, bilinear
from weyllab.output import write_csv, write_json
from weyllab.solutions import DiracSolution, WeylTransverseSolution, event_on_axis, local_phase_energy
from weyllab.verifier import (
    NEGATIVE_CONTROL_FACTOR,
    degeneracy_sweep,
    field_crosscheck,
    localization_grid,
    negative_controls,
    order_estimate_or_none,
    residual_report,
)

COMMANDS = ("verify", "fields", "observables", "waveform", "separation")
WAVEFORM_HEADER = ("w", "re_c1", "im_c1", "envelope", "local_energy")
FIELDMAP_HEADER = ("x", "y", "Bz", "p", "p_inv")
FIELDS_HEADER = ("t", "x", "y", "z", "b0", "b1", "b2", "b3", "Ex", "Ey", "Ez", "Bx", "By", "Bz")
CONVERGENCE_TOLERANCE = 0.3


class VerificationFailed(Exception):
    pass


# ---------------------------------------------------------------------------
# emitters


def _grid(cfg: RunConfig):
    return localization_grid(cfg.solution, cfg.verify.points, cfg.verify.half_width)


def verify_report(cfg: RunConfig) -> dict:
    """Run the full verification suite for one configured solution."""
    sol, spec = cfg.solution, cfg.verify
    fd, grid = spec.fd, _grid(cfg)
    if spec.mass and sol.equation != "dirac":
        raise ConfigError("mass only applies to family = dirac", key="mass")

    pot = potential_for(sol, cfg.gauge)
    main = residual_report(sol, pot, grid, fd, spec.mass, spec.residual_threshold)
    sweep_gauges = random_gauges(np.random.default_rng(spec.seed), spec.gauge_samples)
    sweep = degeneracy_sweep(sol, sweep_gauges, grid, fd, spec.residual_threshold, spec.mass)
    field_gauges = [cfg.gauge] + random_gauges(np.random.default_rng(spec.seed + 1), 4)
    field_reports = [
        field_crosscheck(sol, g, cfg.q, grid, fd, spec.field_threshold, label=f"fields[{i}]")
        for i, g in enumerate(field_gauges)
    ]
    estimate, floor, steps = order_estimate_or_none(sol, pot, grid, fd, spec.mass)
    convergence_ok = floor or abs(estimate - fd.order) <= CONVERGENCE_TOLERANCE
    controls = negative_controls(sol, grid, fd, spec.residual_threshold)

    main.convergence_order_estimate = estimate
    checks = [main, sweep] + field_reports
    passed = all(r.passed for r in checks) and convergence_ok and all(c["detected"] for c in controls)
    return {
        "suite": {
            "name": "verify",
            "family": cfg.family,
            "equation": sol.equation,
            "q": cfg.q,
            "mass": spec.mass,
            "checks": [r.as_dict() for r in checks],
            "negative_control_factor": NEGATIVE_CONTROL_FACTOR,
        },
        "grid": grid.describe(),
        "fd": fd.as_dict(),
        "max_residual": max(main.max_norm, sweep.max_norm),
        "mean_residual": main.mean_norm,
        "convergence_order": {
            "estimate": estimate,
            "floor_dominated": floor,
            "steps": steps,
            "expected": fd.order,
            "tolerance": CONVERGENCE_TOLERANCE,
            "pass": bool(convergence_ok),
        },
        "pass": bool(passed),
        "negative_controls": controls,
    }


def waveform_columns(cfg: RunConfig):
    """w, Re c1, Im c1, |c1| and local energy along the direction of motion."""
    wf = cfg.waveform
    w = np.linspace(wf.w_min, wf.w_max, wf.samples)
    e = event_on_axis(cfg.solution, w)
    c1 = cfg.solution(e)[..., 0]
    return [w, c1.real, c1.imag, np.abs(c1), local_phase_energy(cfg.solution, e)]


def emit_waveform(cfg: RunConfig, out_dir) -> Path:
    return write_csv(Path(out_dir) / "waveform.csv", WAVEFORM_HEADER, waveform_columns(cfg))


def fieldmap_columns(cfg: RunConfig, branch: str | None = None):
    sol = cfg.solution
    if not isinstance(sol, WeylTransverseSolution):
        raise ConfigError("separation maps need family = transverse", key="family")
    sep = cfg.separation
    if branch is None:
        branch = BRANCH[(sol.helicity, sol.sense)] if sep.branch == "auto" else sep.branch
    x0, y0 = sol.p.center
    xs = np.linspace(x0 - sep.half_width, x0 + sep.half_width, sep.points)
    ys = np.linspace(y0 - sep.half_width, y0 + sep.half_width, sep.points)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    p = sol.p(X, Y).value
    bz = separation_field(sol.p, cfg.q, branch, X, Y)
    return [X, Y, bz, p, sep.r1 / p]


def emit_fieldmap(cfg: RunConfig, out_dir, branch: str | None = None) -> Path:
    return write_csv(Path(out_dir) / "fieldmap.csv", FIELDMAP_HEADER, fieldmap_columns(cfg, branch))


def emit_fields(cfg: RunConfig, out_dir) -> Path:
    e = _grid(cfg).events()
    b = potential_for(cfg.solution, cfg.gauge)(e)
    em = closed_form_fields(cfg.solution, cfg.gauge, cfg.q, e)
    cols = list(e) + [b[:, k] for k in range(4)] + [em.E[:, k] for k in range(3)] + [em.B[:, k] for k in range(3)]
    return write_csv(Path(out_dir) / "fields.csv", FIELDS_HEADER, cols)


def emit_observables(cfg: RunConfig, out_dir) -> Path:
    sol = cfg.solution
    wf = cfg.waveform
    w = np.linspace(wf.w_min, wf.w_max, wf.samples)
    e = event_on_axis(sol, w)
    psi = sol(e)
    rho = density(psi)
    ok = rho > DENSITY_FLOOR
    safe = np.where(ok, rho, 1.0)
    energy = local_phase_energy(sol, e)
    if isinstance(sol, DiracSolution):
        spin = np.stack([bilinear(psi, op).real for op in SPIN_OPERATORS], axis=-1) / safe[:, None]
        spin[~ok] = np.nan
        total = np.sqrt(np.sum(spin * spin, axis=-1))
        header = ("w", "density", "sx", "sy", "sz", "total_spin", "local_energy")
        cols = [w, rho, spin[:, 0], spin[:, 1], spin[:, 2], total, energy]
    else:
        n_sigma = np.einsum("k,kij->ij", sol.direction.unit, PAULI[1:])
        hel = np.where(ok, bilinear(psi, n_sigma).real / safe, np.nan)
        header = ("w", "density", "helicity", "local_energy")
        cols = [w, rho, hel, energy]
    return write_csv(Path(out_dir) / "observables.csv", header, cols)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyllab",
        description="Localized degenerate Dirac/Weyl solutions: verification and data emission.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(COMMANDS) + "}")
    sub.required = True
    helps = {
        "verify": "run residual, degeneracy, field and negative-control checks; write verify_report.json",
        "fields": "write closed-form potentials and fields on the verification grid (fields.csv)",
        "observables": "write density, spin or helicity and local energy along the axis (observables.csv)",
        "waveform": "write the first spinor component along the axis (waveform.csv)",
        "separation": "write the separation field map B_z with p and r1/p (fieldmap.csv)",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="path to the run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
        p.add_argument("--order", type=int, choices=(2, 4), default=None, help="finite-difference order")
        p.add_argument("--step", type=float, default=None, help="finite-difference step")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.step is not None and not args.step > 0:
        parser.print_usage(sys.stderr)
        print("weyllab: error: --step must be positive", file=sys.stderr)
        return 2
    try:
        cfg = with_overrides(parse_config(args.config), args.order, args.step, args.out)
        out_dir = Path(cfg.output_dir)
        if args.command == "verify":
            report = verify_report(cfg)
            path = write_json(out_dir / "verify_report.json", report)
            print(f"{path}: pass={str(report['pass']).lower()} max_residual={report['max_residual']:.3e}")
            return 0 if report["pass"] else 1
        emit = {
            "fields": emit_fields,
            "observables": emit_observables,
            "waveform": emit_waveform,
            "separation": emit_fieldmap,
        }[args.command]
        print(emit(cfg, out_dir))
        return 0
    except ConfigError as exc:
        print(f"weyllab: config error: {exc}", file=sys.stderr)
        return 2
    except WeylLabError as exc:
        print(f"weyllab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"weyllab: cannot write output: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
