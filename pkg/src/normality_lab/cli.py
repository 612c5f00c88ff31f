"""Command-line front end.

Stream and matrix specs come in as JSON files, trajectories go out as CSV
(streamable), verdicts as JSON.  Every report embeds the package version,
the numeric mode, and any seed, so runs are reproducible from their
config.  Exit codes: 0 success, 1 unknown command, 2 domain/schema error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .freq import freq_trajectory, freq_matrix
from .ideals import (
    counting_ideal,
    density_ideal,
    empirical_upper_density,
    estimate_gamma,
    hit_set,
    summable_ideal,
)
from .simplex import SimplexPoint, enumerate_rationals
from .streams import BlocksStream, DomainError, RandomStream, stream_from_spec
from .summability import (
    check_core_inclusion,
    factorial_style_matrix,
    matrix_from_spec,
    remark_matrix,
    st_check,
    subsequence_matrix,
    transform,
)
from .synth import (
    WitnessPlan,
    build_witness,
    debruijn_multigraph,
    synthesizer_word,
    synthesize,
)

EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_DOMAIN = 2
EXIT_IO = 3


def _metadata(mode: str = "float", seed=None) -> dict:
    meta = {"version": __version__, "mode": mode}
    if seed is not None:
        meta["seed"] = seed
    threads = os.environ.get("NORMALITY_LAB_THREADS")
    if threads:
        meta["threads"] = threads
    return meta


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _write_json(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _ideal_from_name(name: str):
    if name in ("counting", "fin"):
        return counting_ideal()
    if name == "density":
        return density_ideal()
    if name in ("summable", "weighted"):
        return summable_ideal()
    raise DomainError(f"unknown ideal {name!r}")


def cmd_expand(args) -> int:
    stream = stream_from_spec(_load_json(args.spec))
    digits = stream.take(args.n)
    rows = [[i + 1, int(d)] for i, d in enumerate(digits)]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["position", "digit"])
            writer.writerows(rows)
    else:
        print("".join(str(int(d)) for d in digits))
    return EXIT_OK


def cmd_freq(args) -> int:
    stream = stream_from_spec(_load_json(args.spec))
    horizons = [int(float(h)) for h in args.horizons.split(",")]
    vectors = freq_trajectory(stream, args.k, horizons)
    labels = vectors[0].index.labels()
    rows = []
    for fv in vectors:
        if args.mode == "rational":
            rows.append([fv.n] + [str(e) for e in fv.fractions()])
        else:
            rows.append([fv.n] + [f"{e:.12g}" for e in fv.floats()])
    out = args.out
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(["n"] + labels)
        writer.writerows(rows)
    finally:
        if out:
            fh.close()
    return EXIT_OK


def cmd_simplex(args) -> int:
    if args.simplex_command != "enumerate":
        raise DomainError(f"unknown simplex subcommand {args.simplex_command!r}")
    points = enumerate_rationals(args.b, args.k, args.max_den)
    report = {
        "metadata": _metadata("rational"),
        "base": args.b,
        "k": args.k,
        "max_denominator": args.max_den,
        "count": len(points),
        "points": [p.to_json()["entries"] for p in points],
    }
    _write_json(report, args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    target = SimplexPoint.from_json(_load_json(args.target))
    graph = debruijn_multigraph(target)
    stream = synthesize(target)
    report = {
        "metadata": _metadata("rational"),
        "target": target.to_json(),
        "connected_support": graph.is_connected,
        "stream": stream.to_spec(),
        "is_number": stream.is_number,
    }
    if graph.is_connected:
        report["word"] = "".join(map(str, synthesizer_word(target)))
    _write_json(report, args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    plan_obj = _load_json(args.plan)
    targets = [SimplexPoint.from_json(t) for t in plan_obj["targets"]]
    ratio = float(plan_obj.get("ratio", 9.0))
    if plan_obj.get("assignment", "round-robin") != "round-robin":
        raise DomainError("only round-robin assignment is supported via JSON")
    plan = WitnessPlan.round_robin(targets, ratio=ratio)
    horizon = int(float(args.horizon))
    stream = build_witness(plan, horizon)
    k = targets[0].k
    traj = freq_matrix(stream, k, horizon)
    eps = args.eps
    per_target = []
    for t in targets:
        hits = hit_set(traj, t, eps)
        per_target.append(
            {
                "target": t.to_json()["entries"],
                "eps": eps,
                "hit_count": int(len(hits)),
                "empirical_upper_density": empirical_upper_density(hits),
            }
        )
    report = {
        "metadata": _metadata(),
        "ratio": ratio,
        "horizon": horizon,
        "targets": per_target,
    }
    _write_json(report, args.out)
    return EXIT_OK


def cmd_gamma(args) -> int:
    stream = stream_from_spec(_load_json(args.spec))
    horizon = int(float(args.horizon))
    spec = _ideal_from_name(args.ideal)
    traj = freq_matrix(stream, args.k, horizon)
    candidates = enumerate_rationals(stream.base, args.k, args.max_den)
    kept = estimate_gamma(traj, candidates, args.eps, spec, threshold=args.threshold)
    report = {
        "metadata": _metadata(),
        "ideal": args.ideal,
        "eps": args.eps,
        "horizon": horizon,
        "candidates_considered": len(candidates),
        "retained": [
            {"target": t.to_json()["entries"], "score": s} for t, s in kept
        ],
    }
    _write_json(report, args.out)
    return EXIT_OK


def cmd_st_check(args) -> int:
    matrix = matrix_from_spec(_load_json(args.matrix))
    report = st_check(matrix, row_horizon=args.row_horizon,
                      col_horizon=args.col_horizon)
    _write_json(
        {
            "metadata": _metadata(),
            "matrix": matrix.name,
            "regular": report.regular,
            "strong_norm": report.strong_norm_limit,
            "strong_condition": report.strong_condition,
            "sup_row_norm": report.sup_row_norm,
            "row_sum_tail": report.row_sum_tail,
            "horizon_limited": report.horizon_limited,
        },
        args.out,
    )
    return EXIT_OK


def cmd_core(args) -> int:
    matrix = matrix_from_spec(_load_json(args.matrix))
    stream = stream_from_spec(_load_json(args.spec))
    horizon = int(float(args.horizon))
    traj = freq_matrix(stream, args.k, horizon)
    report = check_core_inclusion(matrix, traj, eps=args.eps)
    _write_json(
        {
            "metadata": _metadata(),
            "matrix": matrix.name,
            "horizon": horizon,
            "rows_used": report.rows_used,
            "original_core": report.original_core.candidates.tolist(),
            "transformed_core": report.transformed_core.candidates.tolist(),
            "violation": report.max_violation,
            "verdict": report.verdict,
            "horizon_limited": True,
        },
        args.out,
    )
    return EXIT_OK


def _demo_remark() -> dict:
    matrix = remark_matrix()
    horizon = 10_000
    x = np.where(np.arange(1, horizon + 1) % 2 == 0, 1.0, -1.0)
    values = transform(matrix, x, range(1, 6))
    rep = check_core_inclusion(matrix, x)
    stc = st_check(matrix)
    return {
        "headline": (
            f"A_n x = {values[0]:g} for all n; core violation "
            f"{rep.max_violation:g} (expected: transformed limit 3, "
            "original core [-1, 1], violation 2)"
        ),
        "transformed_values": [float(v) for v in values],
        "regular": stc.regular,
        "strong_norm": stc.strong_norm_limit,
        "violation": rep.max_violation,
    }


def _demo_factorial(ratio: float = 20.0) -> dict:
    g = lambda i: round(ratio**i)
    matrix = factorial_style_matrix(growth=g)
    horizon = 10**7

    def schedule(q):
        if q == 1:
            return "0", g(1) - 1
        stage, parity = divmod(q - 2, 2)
        if parity == 0:
            return "1", g(2 * stage + 2) - g(2 * stage + 1)
        return "0", g(2 * stage + 3) - g(2 * stage + 2)

    stream = BlocksStream(schedule, 2)
    n_rows = 0
    while g(2 * (n_rows + 1)) <= horizon:
        n_rows += 1
    horizons = sorted({g(i) for i in range(1, 2 * n_rows + 1)})
    freqs = {fv.n: fv.floats()[1] for fv in freq_trajectory(stream, 1, horizons)}
    values = [float(v) for v in transform(matrix, freqs, range(1, n_rows + 1))]
    target = (2 * ratio - 1) / (ratio + 1)
    return {
        "headline": (
            f"A_n pi -> {values[-1]:.6g} vs closed form "
            f"(2r-1)/(r+1) = {target:.6g} > 1: inclusion in [0, 1] violated"
        ),
        "ratio": ratio,
        "transformed_values": values,
        "closed_form_limit": target,
        "outside_unit_interval": all(v > 1 for v in values),
    }


def _demo_example10() -> dict:
    from .streams import PeriodicStream

    horizon = 20_000
    stream = PeriodicStream("01", 2)
    traj = freq_matrix(stream, 1, horizon)
    matrix = subsequence_matrix("even")
    n_rows = matrix.rows_within(horizon)
    transformed = np.vstack(transform(matrix, traj, range(1, n_rows + 1)))
    candidates = enumerate_rationals(2, 1, 8)
    kept = estimate_gamma(transformed, candidates, 1 / 16, counting_ideal())
    return {
        "headline": (
            f"Gamma estimate under the even-subsequence matrix keeps "
            f"{len(kept)} candidate(s): "
            + ", ".join(str([str(e) for e in t.entries]) for t, _ in kept)
        ),
        "retained": [[str(e) for e in t.entries] for t, _ in kept],
    }


def _demo_witness() -> dict:
    targets = [
        SimplexPoint.from_entries([1, 0], 2, 1),
        SimplexPoint.from_entries([Fraction(1, 2), Fraction(1, 2)], 2, 1),
        SimplexPoint.from_entries([0, 1], 2, 1),
    ]
    plan = WitnessPlan.round_robin(targets, ratio=9.0)
    horizon = 10**6
    stream = build_witness(plan, horizon)
    traj = freq_matrix(stream, 1, horizon)
    densities = {}
    for t in targets:
        hits = hit_set(traj, t, 0.1)
        densities[str([str(e) for e in t.entries])] = empirical_upper_density(hits)
    return {
        "headline": (
            "eps=0.1 hit-set empirical upper densities: "
            + ", ".join(f"{k}: {v:.3f}" for k, v in densities.items())
            + " (each expected >= 0.1)"
        ),
        "densities": densities,
    }


def cmd_demo(args) -> int:
    demos = {
        "remark": _demo_remark,
        "factorial": _demo_factorial,
        "example10": _demo_example10,
        "witness": _demo_witness,
    }
    if args.name not in demos:
        raise DomainError(f"unknown demo {args.name!r}")
    report = {"metadata": _metadata(), "demo": args.name, **demos[args.name]()}
    print(report["headline"])
    _write_json(report, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normality-lab",
        description="digit-frequency trajectories, stream synthesis, "
        "ideal-convergence scoring, and Knopp-core checks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("expand", help="materialize a digit-stream prefix")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("freq", help="frequency vectors at several horizons")
    p.add_argument("--spec", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--horizons", required=True)
    p.add_argument("--mode", choices=["rational", "float"], default="rational")
    p.add_argument("--out")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("simplex", help="coupled-simplex utilities")
    p.add_argument("simplex_command", choices=["enumerate"])
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-den", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("synth", help="realizer stream for a rational target")
    p.add_argument("--target", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("witness", help="witness stream hit-set densities")
    p.add_argument("--plan", required=True)
    p.add_argument("--horizon", default="1e6")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("gamma", help="finite-horizon cluster-point estimate")
    p.add_argument("--spec", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--ideal", default="density")
    p.add_argument("--eps", type=float, default=1 / 16)
    p.add_argument("--horizon", default="1e6")
    p.add_argument("--max-den", type=int, default=8)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("st-check", help="regularity row tests for a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--row-horizon", type=int, default=256)
    p.add_argument("--col-horizon", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_st_check)

    p = sub.add_parser("core", help="core-inclusion check for a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--horizon", default="1e5")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("demo", help="canned experiments with headline values")
    p.add_argument("name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    known = {"expand", "freq", "simplex", "synth", "witness", "gamma",
             "st-check", "core", "demo"}
    head = next((a for a in argv if not a.startswith("-")), None)
    if head is not None and head not in known:
        print(f"normality-lab: unknown command {head!r}", file=sys.stderr)
        return EXIT_UNKNOWN
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_help()
            return EXIT_UNKNOWN
        return args.func(args)
    except DomainError as exc:
        print(f"normality-lab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"normality-lab: bad input schema: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"normality-lab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
