"""Command line interface.

Subcommands, one verb per intent:

* ``remotal profile --config c.json``: run the configured decay profiles;
  flags override config fields.
* ``remotal verify --seed S --trials N``: run the property suite, one JSON
  line per case.
* ``remotal reproduce linf-r2 --n-max 100 --resolution 1000000``: the
  golden antipodal-distance table for the max norm on R^2.
* ``remotal farthest --norm '{"kind":"lp","p":2,"dim":2}' --x 1,0
  --delta 0.1``: one-shot almost-farthest (or nearly-nearest) query.

Exit codes: 0 success, 1 validation error, 2 property failure,
3 acceptance mismatch.  ``REMOTAL_THREADS`` caps worker count.
"""

from __future__ import annotations

import argparse
import json
import sys

from ._version import __version__
from .errors import RemotalError, ValidationError
from .farthest import almost_farthest_set, nearly_nearest_set
from .harness import (
    ExperimentConfig,
    ReproRow,
    repro_rows_to_csv,
    reproduce_linf_r2,
    run_experiment,
    run_property_suite,
)
from .norms import NormSpec
from .sets import Scheme, sample_sphere

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PROPERTY_FAILURE = 2
EXIT_ACCEPTANCE_MISMATCH = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="remotal",
        description="Farthest-point structures and rotundity diagnostics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_prof = sub.add_parser("profile", help="run decay profiles from a config")
    p_prof.add_argument("--config", required=True, help="path to a JSON config")
    p_prof.add_argument("--resolution", type=int, help="override config resolution")
    p_prof.add_argument("--profile", help="override profile kind")
    p_prof.add_argument("--probe", action="append", metavar="X,Y,...",
                        help="override probes (repeatable)")
    p_prof.add_argument("--output", help="override output path")
    p_prof.add_argument("--format", choices=("csv", "json"), help="override output format")

    p_ver = sub.add_parser("verify", help="run the randomized property suite")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--trials", type=int, default=1000,
                       help="trials per property (default 1000)")
    p_ver.add_argument("--summary-only", action="store_true",
                       help="suppress per-case JSON lines")

    p_rep = sub.add_parser("reproduce", help="golden reproductions")
    p_rep.add_argument("target", choices=("linf-r2",))
    p_rep.add_argument("--n-max", type=int, default=100)
    p_rep.add_argument("--resolution", type=int, default=1_000_000)
    p_rep.add_argument("--tol", type=float, default=1e-3,
                       help="acceptance tolerance on |d - expected|")
    p_rep.add_argument("--output", help="write the table as CSV to this path")

    p_far = sub.add_parser("farthest", help="one-shot almost-farthest / nearly-nearest query")
    p_far.add_argument("--norm", required=True, help="norm as JSON")
    p_far.add_argument("--x", required=True, help="probe point, comma separated")
    p_far.add_argument("--delta", type=float, default=0.0)
    p_far.add_argument("--resolution", type=int, default=720)
    p_far.add_argument("--seed", type=int, default=0, help="seed for dim >= 3 sampling")
    p_far.add_argument("--nearest", action="store_true",
                       help="query the nearly-nearest set instead")
    return parser


def _cmd_profile(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if args.resolution is not None:
        raw["resolution"] = args.resolution
    if args.profile is not None:
        raw["profile"] = args.profile
    if args.probe:
        raw["probes"] = [[float(c) for c in p.split(",")] for p in args.probe]
    if args.output is not None or args.format is not None:
        out = raw.get("output", {})
        if args.output is not None:
            out["path"] = args.output
        if args.format is not None:
            out["format"] = args.format
        out.setdefault("format", "csv")
        if "path" not in out:
            raise ValidationError("config.output.path: required when overriding output")
        raw["output"] = out
    config = ExperimentConfig.from_json(raw)
    report = run_experiment(config)
    if config.output_format is None:
        json.dump(report.to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for v in report.verdicts:
            print(json.dumps(v.to_json(), separators=(",", ":")))
        print(f"wrote {config.output_format} output to {config.output_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    summary, cases = run_property_suite(args.seed, args.trials)
    if not args.summary_only:
        for case in cases:
            print(case.to_json_line())
    print(json.dumps({"summary": summary}), file=sys.stderr)
    return EXIT_OK if summary["total_failures"] == 0 else EXIT_PROPERTY_FAILURE


def _cmd_reproduce(args) -> int:
    rows: list[ReproRow] = reproduce_linf_r2(args.n_max, args.resolution)
    csv_text = repro_rows_to_csv(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    worst = max(r.abs_err for r in rows)
    ok = worst <= args.tol
    print(
        json.dumps({"rows": len(rows), "max_abs_err": worst, "tol": args.tol, "pass": ok}),
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_ACCEPTANCE_MISMATCH


def _cmd_farthest(args) -> int:
    norm = NormSpec.from_json(json.loads(args.norm))
    x = [float(c) for c in args.x.split(",")]
    scheme = None if norm.dim == 2 else Scheme("seeded", seed=args.seed)
    sphere = sample_sphere(norm, args.resolution, scheme)
    if args.nearest:
        result = nearly_nearest_set(sphere, x, norm, args.delta)
    else:
        result = almost_farthest_set(sphere, x, norm, args.delta)
    json.dump(result.to_json(), sys.stdout)
    sys.stdout.write("\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "profile": _cmd_profile,
        "verify": _cmd_verify,
        "reproduce": _cmd_reproduce,
        "farthest": _cmd_farthest,
    }
    try:
        return handlers[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except RemotalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
