"""Command-line front end: sampling, certification, fitting, stability,
oracle validation, and the scalability benchmark.

Exit codes: 0 success / certified / passed, 1 not certified / failed,
2 configuration or runtime error. All file outputs are UTF-8; CSVs carry a
header row; JSON reports carry ``"schema": 1`` and keep timing data under
keys ending in ``_ms`` so they can be excluded from byte-comparisons.

The environment variable ``SG_CERTIFY_BACKEND`` overrides any configured
semidefinite backend.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys as _sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bench as bench_mod
from . import conic as conic_mod
from . import lmi as lmi_mod
from . import oracle as oracle_mod
from . import sg as sg_mod
from . import stability as stability_mod
from .lti import PRESET_NAMES, StateSpace, system_from_json
from .regions import ConicTheta, pi_interior, region_to_json

__all__ = ["main", "RunConfig"]


@dataclass
class RunConfig:
    """Validated run configuration shared by the subcommands."""

    command: str
    system: Optional[StateSpace] = None
    system2: Optional[StateSpace] = None
    backend: Optional[str] = None
    seed: int = 0
    out: Optional[str] = None
    extra: dict = None

    def __post_init__(self):
        if self.extra is None:
            self.extra = {}


def _load_system(spec: str) -> StateSpace:
    try:
        return system_from_json(spec)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load system {spec!r}: {exc}")


class CliError(Exception):
    pass


def _resolve_backend(arg_backend: Optional[str]) -> Optional[str]:
    return os.environ.get("SG_CERTIFY_BACKEND") or arg_backend


def _parse_pair(text: str, name: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"{name} must be 'c,r', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise CliError(f"{name} must be numeric 'c,r', got {text!r}")


def _grid_from_args(args) -> sg_mod.FrequencyGrid:
    return sg_mod.FrequencyGrid(wmin=args.wmin, wmax=args.wmax,
                                count=args.grid_count)


def _write_json(obj: dict, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _add_system_args(p, dest="system"):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument(f"--preset", dest=dest + "_preset",
                   help=f"built-in system ({', '.join(PRESET_NAMES)})")
    g.add_argument(f"--system", dest=dest + "_path",
                   help="path to a system JSON file")


def _system_from_args(args, dest="system") -> StateSpace:
    preset = getattr(args, dest + "_preset", None)
    path = getattr(args, dest + "_path", None)
    return _load_system(preset if preset else path)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sgcert",
        description="Scaled-graph region certification for LTI systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample an SG cloud to CSV")
    _add_system_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--grid-count", type=int, default=400)
    p.add_argument("--wmin", type=float, default=1e-3)
    p.add_argument("--wmax", type=float, default=1e4)
    p.add_argument("--dirs", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("certify", help="certify containment in a region")
    p.add_argument("kind", choices=["circle", "conic"])
    _add_system_args(p)
    p.add_argument("--c", type=float, help="disk center (circle)")
    p.add_argument("--r", type=float, help="disk radius (circle)")
    p.add_argument("--theta", help="conic entries 't11,t22,t13,t33'")
    p.add_argument("--grid-count", type=int, default=200)
    p.add_argument("--wmin", type=float, default=1e-3)
    p.add_argument("--wmax", type=float, default=1e4)
    p.add_argument("--backend")
    p.add_argument("--out")

    p = sub.add_parser("fit", help="fit a minimal certified region")
    p.add_argument("kind", choices=["circle", "conic"])
    _add_system_args(p)
    p.add_argument("--backend")
    p.add_argument("--out")

    p = sub.add_parser("stability", help="feedback stability report")
    p.add_argument("--sys1", required=True, help="preset name or JSON path")
    p.add_argument("--sys2", required=True, help="preset name or JSON path")
    p.add_argument("--pi1", required=True, help="interior disk 'c,r'")
    p.add_argument("--pi2", required=True, help="interior disk 'c,r'")
    p.add_argument("--homotopy", action="store_true",
                   help="include the sampled scaling sweep (numeric check)")
    p.add_argument("--tau-count", type=int, default=101)
    p.add_argument("--backend")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="soft vs hard feasibility timing")
    p.add_argument("--sizes", default=",".join(str(s) for s in bench_mod.PAPER_SIZES))
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--backend")
    p.add_argument("--out", required=True)

    p = sub.add_parser("oracle", help="Monte-Carlo truncated-constraint check")
    _add_system_args(p)
    p.add_argument("--pi", required=True, help="interior disk 'c,r'")
    p.add_argument("--trials", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--backend")
    p.add_argument("--out")
    p.add_argument("--log", help="per-trial CSV log path")
    return ap


def cmd_sg_sample(args) -> int:
    sys_ = _system_from_args(args)
    cloud = sg_mod.sg_system_sample(sys_, grid=_grid_from_args(args),
                                    n_dirs=args.dirs, seed=args.seed,
                                    n_jobs=args.jobs)
    sg_mod.export_csv(cloud, args.out)
    print(f"wrote {len(cloud)} points to {args.out}")
    return 0


def cmd_certify(args) -> int:
    sys_ = _system_from_args(args)
    backend = _resolve_backend(args.backend)
    if args.kind == "circle":
        if args.c is None or args.r is None:
            raise CliError("certify circle requires --c and --r")
        res = lmi_mod.certify_circle(sys_, args.c, args.r, backend=backend)
        report = {
            "schema": 1,
            "kind": "circle",
            "c": args.c,
            "r": args.r,
            "feasible": res.feasible,
            "hard_containment": res.hard_containment,
            "status": res.diagnostics.get("status"),
            "residual_lambda_max": res.diagnostics.get("residual_lambda_max"),
            "region": region_to_json(res.region),
            "wall_ms": res.diagnostics.get("wall_ms"),
        }
        _write_json(report, args.out)
        return 0 if res.feasible else 1
    if args.theta is None:
        raise CliError("certify conic requires --theta 't11,t22,t13,t33'")
    try:
        t = [float(x) for x in args.theta.split(",")]
        if len(t) != 4:
            raise ValueError
    except ValueError:
        raise CliError(f"--theta must be 4 comma-separated numbers, got {args.theta!r}")
    theta = ConicTheta(*t)
    cert = conic_mod.certify_conic(sys_, theta, grid=_grid_from_args(args))
    report = {"schema": 1, "kind": "conic", **cert.to_json()}
    _write_json(report, args.out)
    return 0 if cert.certified else 1


def cmd_fit(args) -> int:
    sys_ = _system_from_args(args)
    backend = _resolve_backend(args.backend)
    if args.kind == "circle":
        c, r, cert = lmi_mod.fit_min_circle(sys_, backend=backend)
        report = {
            "schema": 1, "kind": "circle", "c": c, "r": r,
            "feasible": cert.feasible,
            "hard_containment": cert.hard_containment,
            "area": math.pi * r * r,
        }
        _write_json(report, args.out)
        return 0 if cert.feasible else 1
    fit = conic_mod.fit_conic(sys_)
    report = {
        "schema": 1, "kind": "conic", "x0": fit.x0, "a": fit.a, "b": fit.b,
        "area": fit.area, **fit.certificate.to_json(),
    }
    _write_json(report, args.out)
    return 0 if fit.certificate.certified else 1


def cmd_stability(args) -> int:
    sys1 = _load_system(args.sys1)
    sys2 = _load_system(args.sys2)
    c1, r1 = _parse_pair(args.pi1, "--pi1")
    c2, r2 = _parse_pair(args.pi2, "--pi2")
    if r1 <= 0 or r2 <= 0:
        raise CliError("multiplier radii must be positive")
    pi1, pi2 = pi_interior(c1, r1), pi_interior(c2, r2)
    tau_grid = (np.linspace(0.01, 1.0, args.tau_count)
                if args.homotopy else None)
    report = stability_mod.certify_feedback(
        sys1, sys2, pi1, pi2, backend=_resolve_backend(args.backend),
        tau_grid=tau_grid,
    )
    _write_json(report.to_json(), args.out)
    if not report.certified and report.reasons:
        print("not certified: " + "; ".join(report.reasons))
    return 0 if report.certified else 1


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise CliError(f"--sizes must be comma-separated integers, got {args.sizes!r}")
    if not sizes:
        raise CliError("--sizes is empty")

    def progress(row):
        print(f"m={row.m} rep={row.rep} soft={row.t_soft_ms:.1f}ms "
              f"hard={row.t_hard_ms:.1f}ms speedup={row.speedup:.2f}")

    rows = bench_mod.run_bench(sizes, reps=args.reps,
                               backend=_resolve_backend(args.backend),
                               eps=args.eps, progress=progress)
    bench_mod.write_bench_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_oracle(args) -> int:
    sys_ = _system_from_args(args)
    c, r = _parse_pair(args.pi, "--pi")
    if r <= 0:
        raise CliError("--pi radius must be positive")
    pi = pi_interior(c, r)
    report = oracle_mod.equivalence_trial(
        sys_, pi, args.trials, seed=args.seed, tol=args.tol,
        backend=_resolve_backend(args.backend),
    )
    _write_json(report.to_json(), args.out)
    if args.log:
        rows = oracle_mod.trial_log(sys_, pi, args.trials, seed=args.seed)
        with open(args.log, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("trial_id,input_class,T,re,im,iqc_value\n")
            for tid, cls, T, z, val in rows:
                fh.write(f"{tid},{cls},{T:.17g},{z.real:.17g},{z.imag:.17g},"
                         f"{val:.17g}\n")
    return 0 if report.passed else 1


_COMMANDS = {
    "sample": cmd_sg_sample,
    "certify": cmd_certify,
    "fit": cmd_fit,
    "stability": cmd_stability,
    "bench": cmd_bench,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
