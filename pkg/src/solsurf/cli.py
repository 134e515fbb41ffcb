"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 integration failure (singular start or a step-size failure).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .catalog import catalog_entries, find_entry
from .classifier import ClassificationError, classify, verify_label
from .export import (ConfigError, RunConfig, describe_termination, entry_trajectory, load_config,
                     with_overrides, write_curve_table, write_surface)
from .ode import ConditionError, SingularStateError, StepFailure, integrate_span

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_INTEGRATION = 0, 1, 2, 3


def _constant(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"constant {key!r} is not a number: {value!r}") from None


def _run_args() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration (flags override the config file)")
    g.add_argument("--config", help="YAML run configuration")
    g.add_argument("--condition", help="cmc, kint, kext, ratio, lw-kappa or lw-hk")
    g.add_argument("--const", action="append", type=_constant, metavar="NAME=VALUE",
                   help="condition constant, repeatable (H for cmc, c for kint/kext, m for ratio, a b c for lw-*)")
    g.add_argument("--entry", help="use a catalog closed form instead of integrating")
    g.add_argument("--s0", type=float, help="initial arclength")
    g.add_argument("--y0", type=float, help="initial y")
    g.add_argument("--z0", type=float, help="initial z")
    g.add_argument("--theta0", type=float, help="initial angle theta")
    g.add_argument("--s-min", type=float, help="lower end of the s-range")
    g.add_argument("--s-max", type=float, help="upper end of the s-range")
    g.add_argument("--tol", type=float, help="integrator error tolerance")
    g.add_argument("--max-step", type=float, help="largest integrator step")
    g.add_argument("--singular-eps", type=float, help="|g| below which a state counts as singular")
    g.add_argument("--format", choices=("csv", "tsv"), help="delimiter of the tables")
    g.add_argument("--samples", type=int, help="samples along s (surface and catalog runs)")
    return p


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    s_range = None
    if args.s_min is not None or args.s_max is not None:
        s_range = (args.s_min if args.s_min is not None else cfg.s_range[0],
                   args.s_max if args.s_max is not None else cfg.s_range[1])
    changes = {
        "condition": args.condition,
        "constants": dict(args.const) if args.const else None,
        "entry": args.entry,
        "initial.s": args.s0, "initial.y": args.y0, "initial.z": args.z0, "initial.theta": args.theta0,
        "s_range": s_range,
        "integrator.tol": args.tol, "integrator.max_step": args.max_step,
        "integrator.singular_eps": args.singular_eps,
        "format": args.format, "samples": args.samples,
    }
    for name in ("out", "mesh", "attributes"):
        value = getattr(args, name, None)
        changes[f"outputs.{'curve' if name == 'out' else name}"] = value
    for name in ("t_min", "t_max", "steps"):
        changes[f"sweep.{name}"] = getattr(args, name, None)
    if args.condition and not args.const and not args.config:
        raise ConfigError(f"--condition {args.condition} needs its constants via --const")
    cfg = with_overrides(cfg, **changes)
    cfg.validate()
    return cfg


def _integration_status(traj) -> int:
    if traj is not None and any(isinstance(t, StepFailure) for t in (traj.termination, traj.start_termination)):
        return EXIT_INTEGRATION
    return EXIT_OK


def cmd_curve(args) -> int:
    cfg = build_config(args)
    path, traj = write_curve_table(cfg)
    n = 0 if traj is None else len(traj)
    print(f"wrote {path} ({n} rows)")
    if traj is not None:
        print(f"start: {describe_termination(traj.start_termination)}")
        print(f"end: {describe_termination(traj.termination)}")
    return _integration_status(traj)


def cmd_surface(args) -> int:
    cfg = build_config(args)
    obj, att, mesh = write_surface(cfg)
    ns, nt = mesh.shape
    print(f"wrote {obj} ({ns * nt} vertices, {(ns - 1) * (nt - 1)} quads) and {att}")
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = build_config(args)
    condition = cfg.validate()
    label = classify(condition, cfg.initial if args.branch else None)
    print(f"condition\t{condition.label()}")
    print(f"label\t{label.label}")
    print(f"properties\t{','.join(sorted(p.value for p in label.properties)) or '-'}")
    if label.note:
        print(f"note\t{label.note}")
    if label.delegated:
        print("delegated\tyes")
    if not args.check:
        return EXIT_OK
    lo, hi = cfg.s_range
    if cfg.entry is not None:
        traj = entry_trajectory(find_entry(cfg.entry), lo, hi, cfg.samples)
    else:
        traj = integrate_span(condition, cfg.initial, lo, hi, cfg.integrator)
    report = verify_label(label, traj, args.tolerance)
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_verify(args) -> int:
    import numpy as np

    from .kernel import FrameConnectionTable
    from .verify import format_report, run_suite

    kw = {}
    if args.flip is not None:
        if args.suite != "kernel":
            raise ConfigError("--flip only applies to the kernel suite")
        i, j = args.flip
        table = FrameConnectionTable.sol().coefficients.copy()
        table[i - 1, j - 1] *= -1
        if not np.any(table[i - 1, j - 1]):
            raise ConfigError(f"connection entry ({i}, {j}) is zero; flipping it changes nothing")
        kw["table"] = table
    checks = run_suite(args.suite, **kw)
    sys.stdout.write(format_report(checks))
    failed = [c for c in checks if not c.passed]
    print(f"# {len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_catalog(args) -> int:
    if args.sample:
        from .export import atomic_write, curve_table_text

        entry = find_entry(args.sample)
        lo, hi = entry.interior_window()
        traj = entry_trajectory(entry, lo, hi, args.n)
        text = curve_table_text(entry.condition, traj, "," if args.format == "csv" else "\t",
                                f"catalog {entry.id}")
        if args.out:
            print(f"wrote {atomic_write(args.out, text)} ({len(traj)} rows)")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    print("id\tcondition\tdomain\tdescription")
    for e in catalog_entries():
        print(f"{e.id}\t{e.condition.label()}\t({e.domain[0]:g}, {e.domain[1]:g})\t{e.description}")
    return EXIT_OK


def cmd_figures(args) -> int:
    from .figures import make_figures

    out = make_figures(args.outdir, args.only, args.tolerance)
    ok = True
    for name, (results, png) in out.items():
        for res in results:
            status = "pass" if res.report.passed else "fail"
            ok &= res.report.passed
            print(f"{name}\t{res.panel.key}\t{res.report.label}\t{status}\t{res.csv}")
        print(f"{name}\tfigure\t-\t-\t{png}")
    return EXIT_OK if ok else EXIT_VERIFY


def make_parser() -> argparse.ArgumentParser:
    run = _run_args()
    parser = argparse.ArgumentParser(prog="solsurf", description="Invariant surfaces in Sol geometry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", parents=[run], help="integrate a generating curve and write its table")
    p.add_argument("-o", "--out", help="curve table path")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("surface", parents=[run], help="sweep a generating curve into an OBJ mesh")
    p.add_argument("--mesh", help="OBJ path")
    p.add_argument("--attributes", help="per-vertex attribute table path")
    p.add_argument("--t-min", type=float, help="sweep start")
    p.add_argument("--t-max", type=float, help="sweep end")
    p.add_argument("--steps", type=int, help="sweep steps")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("classify", parents=[run], help="qualitative case of a condition")
    p.add_argument("--branch", action="store_true", help="use the initial state to pick the branch or leaf")
    p.add_argument("--check", action="store_true", help="integrate over the s-range and verify the label")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run an invariant suite and print a pass/fail table")
    p.add_argument("suite", choices=("kernel", "curvature", "catalog", "classify", "all"))
    p.add_argument("--flip", type=int, nargs=2, metavar=("I", "J"),
                   help="negate connection entry nabla_Ei Ej before checking (negative-path test)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list closed-form solutions or sample one")
    p.add_argument("--sample", metavar="ID", help="write a table of samples of one entry")
    p.add_argument("-n", type=int, default=1000, help="samples for --sample")
    p.add_argument("-o", "--out", help="output path for --sample (default stdout)")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("figures", help="write the figure curve tables, render PNGs and verify them")
    p.add_argument("--outdir", default="figures")
    p.add_argument("--only", nargs="+", choices=("fig1", "fig2", "fig3"))
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConditionError, ClassificationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularStateError as exc:
        print(f"integration error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except ValueError as exc:
        # catalog lookups and domain checks raise plain ValueError subclasses
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
