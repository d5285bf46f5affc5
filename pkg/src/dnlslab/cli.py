"""Command-line front end: one experiment per invocation, reports to disk.

Exit codes: 0 success, 1 invalid configuration, 2 verification failure,
3 solver non-convergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .estimates import (
    SUM_VARIANTS,
    cubic_ratio_scan,
    divergence_report,
    endpoint_injection_report,
    near_diagonal_scan,
    quintic_ratio_scan,
    resonance_sum_scan,
    strichartz_ratio_scan,
)
from .fields import plane_wave, random_field
from .gauge import GaugeContext, gauge, gauge_field, gauge_field_inv, gauge_inv, translation_gap_probe
from .norms import INF, NormSpec, h_norm, xst_norm, z_norm
from .reports import (
    __version__,
    canonical_json,
    load_field,
    load_trajectory,
    save_field,
    save_trajectory,
    write_csv,
    write_json,
)
from .solver import Equation, SolveConfig, picard_solve, solve_via_gauge

EXIT_OK = 0
EXIT_BAD_CONFIG = 1
EXIT_VERIFY_FAILED = 2
EXIT_NO_CONVERGENCE = 3


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("DNLSLAB_OUT", ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _apply_config_file(args, parser):
    """Values from --config fill in anything the flags left at the default."""
    if not getattr(args, "config", None):
        return args
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file: {exc}")
    actions = list(parser._actions)
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            chosen = action.choices.get(getattr(args, "command", None))
            if chosen is not None:
                actions += chosen._actions
    defaults = {a.dest: a.default for a in actions}
    for key, value in data.items():
        if not hasattr(args, key):
            parser.error(f"unknown config key {key!r}")
        if getattr(args, key) == defaults.get(key):
            setattr(args, key, value)
    return args


def _provenance(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "config")}
    return {"config": cfg, "version": __version__}


def _parse_plane_wave(text: str) -> tuple[float, int]:
    try:
        parts = dict(item.split("=") for item in text.split(","))
        return float(parts["A"]), int(parts["n"])
    except (ValueError, KeyError) as exc:
        raise argparse.ArgumentTypeError(
            "plane wave spec must look like A=1.0,n=1"
        ) from exc


def _datum_from_args(args) -> SpectralField:
    if args.plane_wave is not None:
        amp, n = args.plane_wave
        return plane_wave(args.cutoff, n, amp)
    if args.datum is not None:
        return load_field(args.datum).truncate(args.cutoff)
    rng = np.random.default_rng(args.seed)
    return random_field(
        args.cutoff, rng, active_cutoff=args.active_band, l2_norm=args.amplitude
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_solve(args, parser) -> int:
    datum = _datum_from_args(args)
    cfg = SolveConfig(
        cutoff=args.cutoff,
        horizon=args.horizon,
        steps=args.steps,
        equation=Equation(args.equation),
        max_iter=args.max_iter,
        tol=args.tol,
        cross_check=args.cross_check,
    )
    if args.via_gauge:
        report = solve_via_gauge(datum, cfg)
    else:
        report = picard_solve(datum, cfg)
    out = _out_dir(args)
    payload = _provenance(args)
    payload["report"] = report.to_json_dict()
    write_json(out / f"{args.tag}.json", payload)
    save_trajectory(out / f"{args.tag}.traj.csv", report.trajectory)
    print(canonical_json({"converged": report.converged,
                          "iterations": report.iterations,
                          "residual": report.residual,
                          "mass_drift": report.mass_drift}))
    if not report.converged:
        print("solver did not converge; halving the time horizon usually helps",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def cmd_gauge(args, parser) -> int:
    out = _out_dir(args)
    text = Path(args.input).read_text().splitlines()[0]
    kind = json.loads(text).get("kind")
    if kind == "field":
        f = load_field(args.input)
        ctx = GaugeContext.for_cutoff(f.cutoff)
        g = gauge_field_inv(f, args.time, ctx) if args.inverse else gauge_field(f, args.time, ctx)
        save_field(out / args.output, g)
    elif kind == "trajectory":
        traj = load_trajectory(args.input)
        ctx = GaugeContext.for_cutoff(traj.cutoff)
        g = gauge_inv(traj, ctx) if args.inverse else gauge(traj, ctx)
        save_trajectory(out / args.output, g)
    else:
        parser.error(f"unrecognized input file kind {kind!r}")
    print(canonical_json({"written": str(out / args.output)}))
    return EXIT_OK


def cmd_norms(args, parser) -> int:
    text = Path(args.input).read_text().splitlines()[0]
    kind = json.loads(text).get("kind")
    result: dict = {}
    if kind == "field":
        f = load_field(args.input)
        result["h_norm"] = h_norm(f, NormSpec(s=args.s, r=args.r))
        result["l2_norm"] = f.l2_norm()
    elif kind == "trajectory":
        traj = load_trajectory(args.input)
        if traj.cutoff_profile is None:
            from .fields import CutoffProfile, Trajectory

            traj = Trajectory(traj.samples, traj.window,
                              CutoffProfile(scale=traj.window / 2.0))
        if args.b is not None:
            p = INF if args.p == "inf" else float(args.p)
            result["xst_norm"] = xst_norm(traj, NormSpec(s=args.s, r=args.r, b=args.b, p=p))
        if args.z:
            result["z_norm"] = z_norm(traj, args.s, args.r)
        if not result:
            parser.error("trajectory input needs --b/--p or --z")
    else:
        parser.error(f"unrecognized input file kind {kind!r}")
    payload = _provenance(args)
    payload["norms"] = result
    out = _out_dir(args)
    write_json(out / f"{args.tag}.json", payload)
    print(canonical_json(result))
    return EXIT_OK


def cmd_divisors(args, parser) -> int:
    out = _out_dir(args)
    report = near_diagonal_scan(args.max)
    payload = _provenance(args)
    payload["report"] = report.to_json_dict()
    write_json(out / f"{args.tag}.json", payload)
    if args.refined:
        hist = report.summary["count_histogram"]
        rows = [(k, hist[k]) for k in sorted(hist)]
        write_csv(out / f"{args.tag}.csv", ["refined_count", "occurrences"], rows)
    print(canonical_json({"max_refined_count": report.summary["max_count"],
                          "argmax": report.summary["argmax"]}))
    return EXIT_OK


def cmd_scan_sums(args, parser) -> int:
    out = _out_dir(args)
    a_values = list(np.arange(args.a_min, args.a_max + 1e-12, args.a_step))
    anchors = list(range(args.anchor_min, args.anchor_max + 1, args.anchor_step))
    truncations = [int(t) for t in args.truncations.split(",")]
    payload = _provenance(args)
    rows = []
    for variant in (SUM_VARIANTS if args.variant == "all" else [args.variant]):
        report = resonance_sum_scan(variant, args.epsilon, a_values, anchors, truncations)
        payload[variant] = report.to_json_dict()
        for k in sorted(report.summary["sup_by_truncation"]):
            rows.append((variant, k, report.summary["sup_by_truncation"][k]))
    write_json(out / f"{args.tag}.json", payload)
    write_csv(out / f"{args.tag}.csv", ["variant", "truncation", "sup"], rows)
    print(canonical_json({v: payload[v]["summary"]["sup_by_truncation"]
                          for v in payload if v not in ("config", "version")}))
    return EXIT_OK


def cmd_counterexample(args, parser) -> int:
    out = _out_dir(args)
    payload = _provenance(args)
    if args.mode in ("divergence", "both"):
        truncs = tuple(int(t) for t in args.truncations.split(","))
        div = divergence_report(truncs, log_shift=args.log_shift)
        payload["divergence"] = div.to_json_dict()
        rows = list(zip(div.summary["truncations"], div.summary["divergent_sums"],
                        div.summary["factor_norms"]))
        write_csv(out / f"{args.tag}-divergence.csv",
                  ["truncation", "divergent_sum", "factor_norm"], rows)
    if args.mode in ("translation", "both"):
        n_list = [int(n) for n in args.n_list.split(",")]
        probe = translation_gap_probe(args.amplitude, args.s, args.r, n_list)
        payload["translation"] = probe.to_json_dict()
        rows = list(zip(probe.summary["n"], probe.summary["input_gap"],
                        probe.summary["output_gap"], probe.summary["gauge_gap"]))
        write_csv(out / f"{args.tag}-translation.csv",
                  ["n", "input_gap", "output_gap", "gauge_gap"], rows)
    write_json(out / f"{args.tag}.json", payload)
    print(canonical_json({k: True for k in payload if k not in ("config", "version")}))
    return EXIT_OK


def cmd_ratio_scan(args, parser) -> int:
    out = _out_dir(args)
    if args.kind == "cubic":
        report = cubic_ratio_scan(args.q, args.r, args.samples, args.cutoff,
                                  args.seed, steps=args.steps)
    elif args.kind == "strichartz":
        report = strichartz_ratio_scan(args.s, args.b, args.samples, args.cutoff,
                                       args.seed, steps=args.steps)
    elif args.kind == "quintic":
        report = quintic_ratio_scan(args.q, args.r, args.b, args.samples, args.cutoff,
                                    args.seed, steps=args.steps)
    else:
        truncs = tuple(int(t) for t in args.truncations.split(","))
        report = endpoint_injection_report(truncs, seed=args.seed)
    payload = _provenance(args)
    payload["report"] = report.to_json_dict()
    write_json(out / f"{args.tag}.json", payload)
    write_csv(out / f"{args.tag}.csv", ["index", "value"],
              list(enumerate(report.values)))
    print(canonical_json(report.summary))
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    results = verify_mod.run_battery(fast=not args.full)
    out = _out_dir(args)
    payload = _provenance(args)
    payload["checks"] = results
    write_json(out / f"{args.tag}.json", payload)
    ok = True
    for check in results:
        print(canonical_json(check))
        ok = ok and check["passed"]
    print(canonical_json({"all_passed": ok, "checks": len(results)}))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dnlslab",
        description="Spectral laboratory for a gauged derivative Schroedinger equation on the torus.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory (default: $DNLSLAB_OUT or .)")
        p.add_argument("--config", default=None, help="JSON file supplying defaults for any flag")
        p.add_argument("--tag", default="report", help="basename for emitted files")

    p = sub.add_parser("solve", help="run the fixed-point solver")
    common(p)
    p.add_argument("--equation", choices=[e.value for e in Equation], default="dnls")
    p.add_argument("--plane-wave", type=_parse_plane_wave, default=None, metavar="A=1,n=1")
    p.add_argument("--datum", default=None, help="field file to use as initial datum")
    p.add_argument("--seed", type=int, default=7, help="seed for a random datum")
    p.add_argument("--amplitude", type=float, default=0.1, help="L2 size of a random datum")
    p.add_argument("--active-band", type=int, default=8, help="active band of a random datum")
    p.add_argument("--cutoff", "-N", "--N", type=int, default=32)
    p.add_argument("--horizon", "-T", "--T", type=float, default=0.1)
    p.add_argument("--steps", "-M", "--M", type=int, default=200)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--via-gauge", action="store_true",
                   help="gauge the datum, solve the transformed equation, ungauge")
    p.add_argument("--cross-check", action="store_true",
                   help="also integrate with the Runge-Kutta stepper and report the gap")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gauge", help="apply the gauge map or its inverse to a file")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="gauged.csv")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--time", type=float, default=0.0, help="evaluation time for a single field")
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("norms", help="evaluate norms of a field or trajectory file")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--p", default="2", help="temporal exponent, a number or 'inf'")
    p.add_argument("--z", action="store_true", help="also report the intersection norm")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("divisors", help="near-diagonal divisor-pair scan")
    common(p)
    p.add_argument("--max", type=int, default=10**6)
    p.add_argument("--refined", action="store_true", help="emit the count histogram CSV")
    p.set_defaults(func=cmd_divisors)

    p = sub.add_parser("scan-sums", help="resonance-weighted lattice sum scans")
    common(p)
    p.add_argument("--variant", choices=list(SUM_VARIANTS) + ["all"], default="all")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--truncations", default="256,512")
    p.add_argument("--a-min", type=float, default=-100.0)
    p.add_argument("--a-max", type=float, default=100.0)
    p.add_argument("--a-step", type=float, default=25.0)
    p.add_argument("--anchor-min", type=int, default=-50)
    p.add_argument("--anchor-max", type=int, default=50)
    p.add_argument("--anchor-step", type=int, default=10)
    p.set_defaults(func=cmd_scan_sums)

    p = sub.add_parser("counterexample", help="divergence sums and the translation gap probe")
    common(p)
    p.add_argument("--mode", choices=["divergence", "translation", "both"], default="both")
    p.add_argument("--truncations", default="1000,10000,100000,1000000")
    p.add_argument("--log-shift", type=float, default=0.0)
    p.add_argument("--n-list", default="4,16,64,256")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--r", type=float, default=2.0)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("ratio-scan", help="estimate-ratio evidence scans")
    common(p)
    p.add_argument("--kind", choices=["cubic", "strichartz", "quintic", "endpoint"],
                   default="cubic")
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--s", type=float, default=0.2)
    p.add_argument("--b", type=float, default=0.45)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--cutoff", "-N", "--N", type=int, default=8)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--truncations", default="100,1000,10000")
    p.set_defaults(func=cmd_ratio_scan)

    p = sub.add_parser("verify", help="run the property-test battery")
    common(p)
    p.add_argument("--full", action="store_true", help="include the slower checks")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config_file(args, parser)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; 2 is reserved here
        return EXIT_BAD_CONFIG if exc.code not in (0, None) else 0
    try:
        return args.func(args, parser)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
