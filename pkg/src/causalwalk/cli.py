"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 numerical-invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import acceptance
from .errors import NumericalError, WalkError
from .experiment import (
    MODES,
    ResultTable,
    build_config,
    emit_csv,
    format_number,
    parse_config,
    parse_number,
    parse_real,
    run_experiment,
    write_atomic,
)
from .figures import FIGURES, entanglement_series, figure_suite, td_series
from .observables import blp_measure

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _angles(text: str) -> tuple[float, ...]:
    try:
        return tuple(parse_real(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _real(text: str) -> float:
    try:
        return parse_real(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex(text: str) -> complex:
    try:
        return complex(parse_number(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def cmd_simulate(args) -> int:
    if args.config:
        config = parse_config(Path(args.config).read_text())
    else:
        if args.thetas is None or args.steps is None:
            raise WalkError("simulate needs --config or both --thetas and --steps")
        values = {"mode": args.mode, "thetas": args.thetas, "steps": args.steps}
        for key in ("k", "theta_s", "alpha", "beta", "lattice"):
            if getattr(args, key) is not None:
                values[key] = getattr(args, key)
        if args.observables:
            values["observables"] = tuple(o.strip() for o in args.observables.split(",") if o.strip())
        if args.allow_wrap:
            values["allow_wrap"] = True
        config = build_config(values)
    out = args.out or config.output
    tables = run_experiment(config)
    for table in tables:
        target = out
        if out is not None and table.name != "series":
            p = Path(out)
            target = p.with_name(f"{p.stem}_{table.name}{p.suffix}")
        _emit(emit_csv(table), target)
    return 0


def cmd_figures(args) -> int:
    names = list(FIGURES) if args.name == "all" else [args.name]
    for name in names:
        for path in figure_suite(name, args.outdir):
            print(path)
    return 0


VERIFIERS = {
    "lemma": acceptance.lemma_iff,
    "expansion": acceptance.expansion_identities,
    "switch": acceptance.switch_consistency,
}
DEFAULT_TOL = {"lemma": 1e-12, "expansion": 1e-10, "switch": 1e-12}


def cmd_verify(args) -> int:
    tol = args.tol if args.tol is not None else DEFAULT_TOL[args.check]
    ok, detail = VERIFIERS[args.check](tol=tol)
    print(f"[{'PASS' if ok else 'FAIL'}] {args.check} (tol {tol:g}): {detail}")
    return 0 if ok else EXIT_NUMERICAL


def cmd_blp(args) -> int:
    d = td_series(args.thetas, args.steps, args.reversal)
    cols = {"t": list(range(args.steps + 1)), **{f"d_{m}": v for m, v in d.items()}}
    meta = {m: format_number(blp_measure(v).value) for m, v in d.items()}
    table = ResultTable("blp", cols, {f"blp_{m}": v for m, v in meta.items()})
    _emit(emit_csv(table), args.out)
    for m, v in meta.items():
        print(f"BLP {m}: {v}", file=sys.stderr)
    return 0


def cmd_entanglement(args) -> int:
    entropy, conc = entanglement_series(args.thetas, args.steps, args.reversal)
    cols = {"t": list(range(args.steps + 1))}
    cols.update({f"s_{m}": v for m, v in entropy.items()})
    cols.update({f"c_{m}": v for m, v in conc.items()})
    _emit(emit_csv(ResultTable("entanglement", cols, {"entropy_base": "2"})), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one experiment and write CSV")
    sim.add_argument("--config", help="key = value configuration file")
    sim.add_argument("--mode", choices=MODES, default="forward")
    sim.add_argument("--thetas", type=_angles, help="comma-separated coin angles, e.g. pi/4,pi/6")
    sim.add_argument("--steps", type=int)
    sim.add_argument("--k", type=int)
    sim.add_argument("--theta-s", dest="theta_s", type=_real)
    sim.add_argument("--alpha", type=_complex)
    sim.add_argument("--beta", type=_complex)
    sim.add_argument("--lattice", type=int)
    sim.add_argument("--allow-wrap", action="store_true")
    sim.add_argument("--observables", help="subset of dist,spread,td,blp,entropy,concurrence")
    sim.add_argument("--out", help="output CSV path (stdout if omitted)")
    sim.set_defaults(func=cmd_simulate)

    fig = sub.add_parser("figures", help="write the CSV panels of a figure preset")
    fig.add_argument("name", choices=list(FIGURES) + ["all"])
    fig.add_argument("--outdir", default="figures")
    fig.set_defaults(func=cmd_figures)

    ver = sub.add_parser("verify", help="run an oracle identity check")
    ver.add_argument("check", choices=list(VERIFIERS))
    ver.add_argument("--tol", type=float)
    ver.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("blp", cmd_blp, "trace distance and BLP for forward, reverse and ICO"),
        ("entanglement", cmd_entanglement, "entropy and concurrence for forward, reverse and ICO"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--thetas", type=_angles, required=True)
        p.add_argument("--steps", type=int, required=True)
        p.add_argument("--reversal", choices=("block", "mirror"), default="block")
        p.add_argument("--out")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (WalkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
