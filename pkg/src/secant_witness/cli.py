"""Command-line front end.

Exit codes: 0 when every certificate passes, 1 when a mathematical check
fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__, exactla, gaussmix, ranges, secant, verify, witness
from .errors import InputError, PreconditionError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _envelope(command: str, params: dict, seed, field: str | None, result) -> dict:
    return {
        "tool": "secant-witness",
        "tool_version": __version__,
        "command": command,
        "seed": seed,
        "field": field,
        "params": params,
        "result": result,
    }


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _positive(name: str, value: int, minimum: int = 1) -> None:
    if value < minimum:
        raise InputError(f"--{name} must be >= {minimum}, got {value}")


# -- subcommands ---------------------------------------------------------------


def cmd_check_skew(args) -> int:
    _positive("n", args.n)
    _positive("k", args.k)
    _positive("d", args.d, 2)
    field = args.field or ("rational" if args.witness == "binomial" else "prime")
    if args.witness == "binomial":
        if args.k != 2 or args.n < 2:
            raise InputError("the binomial witness needs k = 2 and n >= 2")
        points = witness.binomial_set(args.n).forms
        if args.m is not None:
            _positive("m", args.m)
            if args.m > len(points):
                raise InputError(f"--m {args.m} exceeds the binomial set size {len(points)}")
            points = points[: args.m]
        report = secant.check_skewness(points, args.d, field=field)
        seed = None
    else:
        m = args.m if args.m is not None else 1
        _positive("m", m)
        _positive("trials", args.trials)
        params = secant.ProblemParams(args.n, args.k, args.d, m)
        report = secant.random_terracini_probe(params, trials=args.trials, seed=args.seed, field=field)
        seed = args.seed
    p = report.params
    if args.format == "json":
        params = {"n": p.n, "k": p.k, "d": p.d, "m": p.m, "witness": args.witness}
        _emit(json.dumps(_envelope("check-skew", params, seed, report.field_used, report.to_dict()), indent=2),
              args.output)
    else:
        status = "skew" if report.skew else "NOT skew"
        _emit(f"[Thm skewness] n={p.n} k={p.k} d={p.d} m={p.m} witness={args.witness}: "
              f"rank {report.rank} / expected {report.expected} -> {status} ({report.field_used})", args.output)
    return EXIT_OK if report.skew else EXIT_FAIL


def cmd_contact_locus(args) -> int:
    if args.n < 2:
        raise InputError(f"--n must be >= 2, got {args.n}")
    v = witness.identifiability_certificate(args.n, field=args.field, max_n=args.max_n)
    if args.format == "json":
        _emit(json.dumps(_envelope("contact-locus", {"n": args.n, "k": 2, "d": 3, "m": v.m}, None,
                                   v.field_used, v.to_dict()), indent=2), args.output)
    else:
        lines = [f"[Thm skewness] n={v.n} m={v.m}: rank {v.skew_rank} / expected {v.expected}"]
        for j, kd in enumerate(v.contact_kernel_dims):
            lines.append(f"[Thm contact locus] point {j}: kernel dim {kd} -> {'ok' if kd == 1 else 'FAIL'}")
        lines.append(f"verdict: {v.verdict} ({v.field_used})")
        _emit("\n".join(lines), args.output)
    return EXIT_OK if v.verdict == witness.PASS else EXIT_FAIL


def cmd_ranges(args) -> int:
    _positive("k", args.k)
    if args.general_d:
        _positive("d-max", args.d_max, 3)
        rows = []
        for d in range(3, args.d_max + 1):
            reg = ranges.general_d_region(d, args.k)
            bound = reg.bounds[0][1] if reg.bounds else None
            rows.append({"d": d, "min_n": reg.min_n, "bound_at_min_n": bound})
        if args.format == "json":
            text = json.dumps(_envelope("ranges", {"k": args.k, "d_max": args.d_max, "general_d": True},
                                        None, None, rows), indent=2)
        else:
            text = "d,min_n,bound_at_min_n\n" + "".join(
                f"{r['d']},{'' if r['min_n'] is None else r['min_n']},"
                f"{'' if r['bound_at_min_n'] is None else r['bound_at_min_n']}\n" for r in rows)
        _emit(text, args.output)
        return EXIT_OK
    _positive("d", args.d, 2)
    _positive("n-max", args.n_max, 2)
    table = ranges.figure_tables(args.k, args.d, args.n_max)
    if args.format == "json":
        text = json.dumps(_envelope("ranges", {"k": args.k, "d": args.d, "n_max": args.n_max}, None, None,
                                    [asdict(r) for r in table]), indent=2)
    elif args.format == "csv":
        text = ranges.rows_to_csv(table)
    else:
        text = "\n".join(
            f"n={r.n:>3}  cond1={'-' if r.cond1_bound is None else r.cond1_bound:>6}  "
            f"cond2={'-' if r.cond2_bound is None else r.cond2_bound:>5}  "
            f"expected={r.expected_generic_rank:>6}  {r.regime}" for r in table)
    _emit(text, args.output)
    if args.emit_gnuplot:
        csv_path = args.output or "ranges.csv"
        if not args.output or args.format != "csv":
            Path(csv_path).write_text(ranges.rows_to_csv(table))
        Path(args.emit_gnuplot).write_text(ranges.gnuplot_script(csv_path, args.k, args.d))
    return EXIT_OK


def cmd_moments(args) -> int:
    try:
        text = Path(args.model).read_text()
    except OSError as exc:
        raise InputError(f"cannot read model file: {exc}") from exc
    try:
        model = gaussmix.MixtureModel.from_json(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"model file is not JSON: {exc}") from exc
    _positive("order", args.order)
    form = gaussmix.mixture_moment_form(model, args.order)
    if args.format == "json":
        _emit(json.dumps(_envelope("moments", {"n": model.n, "m": len(model.weights), "order": args.order},
                                   None, "rational", form.to_dict()), indent=2), args.output)
    else:
        _emit(str(form), args.output)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    witness_fn = verify.tampered_witness if args.inject_fault == "duplicate" else verify.default_witness
    results = verify.run_checks(args.level, witness_fn)
    ok = all(r.passed for r in results)
    field = "prime" if args.level == "quick" else "rational"
    if args.format == "json":
        _emit(json.dumps(_envelope("verify-paper", {"level": args.level, "inject_fault": args.inject_fault},
                                   None, field, {"passed": ok, "checks": [r.to_dict() for r in results]}),
                         indent=2), args.output)
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.check_id:<20} [{r.anchor}]  {r.detail}" for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        _emit("\n".join(lines), args.output)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="secant-witness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("human", "json"), default="human"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("check-skew", help="Terracini rank of a witness tuple")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--m", type=int)
    p.add_argument("--witness", choices=("binomial", "random"), default="binomial")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--field", choices=secant.FIELDS)
    common(p)
    p.set_defaults(func=cmd_check_skew)

    p = sub.add_parser("contact-locus", help="skewness plus contact-locus certificate on the binomial set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", choices=secant.FIELDS, default="rational")
    p.add_argument("--max-n", type=int, default=witness.DEFAULT_MAX_N)
    common(p)
    p.set_defaults(func=cmd_contact_locus)

    p = sub.add_parser("ranges", help="closed-form identifiability ranges")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--general-d", action="store_true", help="minimal n per d for quadratic forms")
    p.add_argument("--d-max", type=int, default=20)
    p.add_argument("--emit-gnuplot", metavar="PATH", help="also write a gnuplot script reading the CSV")
    common(p, ("human", "csv", "json"), "csv")
    p.set_defaults(func=cmd_ranges)

    p = sub.add_parser("moments", help="moment form of a centered Gaussian mixture")
    p.add_argument("--model", required=True, help="mixture model JSON file")
    p.add_argument("--order", type=int, default=6)
    common(p, default="json")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify-paper", help="run the bundled reproduction suite")
    p.add_argument("--level", choices=verify.LEVELS, default="quick")
    p.add_argument("--inject-fault", choices=("duplicate",), help="self-test: corrupt the witness set")
    common(p)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        exactla.witness_prime()
        return args.func(args)
    except (InputError, PreconditionError) as exc:
        print(f"secant-witness: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
