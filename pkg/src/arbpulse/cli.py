"""``arbpulse`` command line: synth, eval, sweep, orderfit, series, scaling.

Exit codes: 0 success, 2 invalid flags, 3 construction or verification
failure, 4 unverifiable sequence file.  All angles are radians.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import analysis, io
from .build import SYNTH_FAMILIES, FlagError, build_sequence, check_request
from .config import ConfigError, Settings, load_settings
from .sequence import ConstructionError, PulseSequence
from .series import SeriesError, sequence_series
from .su2 import error_model, pauli_decompose

EXIT_OK, EXIT_USAGE, EXIT_BUILD, EXIT_FILE = 0, 2, 3, 4

log = logging.getLogger("arbpulse")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _csv(kind):
    def parse(text: str):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}") from None

    return parse


def _report(seq: PulseSequence, settings: Settings) -> List[str]:
    scaled = seq.family in io.SCALED_FAMILIES
    rep = seq.verify(settings.tol_defect, scaled=scaled)
    head = [
        f"sequence: {seq.label} ({seq.model.name} error)",
        f"target: phi={seq.target.phi:.12g} theta={seq.target.theta:.12g}",
        f"pulses: {seq.pulse_count}",
        f"two_pi_equivalents: {seq.two_pi_equivalents:.12g}",
    ]
    if seq.narrowband:
        head.append("narrowband: true")
    return head + rep.lines()


def _load(path: str, settings: Settings) -> PulseSequence:
    try:
        return io.load_sequence(path, tol=settings.tol_defect)
    except io.SequenceFileError as exc:
        raise CliError(EXIT_FILE, str(exc)) from None


def _model(name: Optional[str], seq: Optional[PulseSequence] = None):
    if name is None:
        return seq.model if seq is not None else error_model("amplitude")
    return error_model(name)


def _emit(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        io.write_text(text, out)


def cmd_synth(args, settings: Settings) -> int:
    seq = build_sequence(
        args.family, args.order, args.theta, args.phi, settings.sn_cap, settings.sk_max_level, settings.tol_defect
    )
    print("\n".join(_report(seq, settings)))
    if args.out:
        _emit(io.dumps_sequence(seq), args.out)
    return EXIT_OK


def cmd_eval(args, settings: Settings) -> int:
    seq = _load(args.seq, settings)
    value = analysis.evaluate(seq, _model(args.model, seq), args.value, args.metric)
    print(io.fmt_sci(value))
    return EXIT_OK


def _grid(args, settings: Settings) -> np.ndarray:
    start = settings.eps_start if args.eps_start is None else args.eps_start
    stop = settings.eps_stop if args.eps_stop is None else args.eps_stop
    points = settings.points if args.points is None else args.points
    if not start < stop or points < 2:
        raise FlagError("sweep needs --eps-start < --eps-stop and --points >= 2")
    if args.linear:
        return analysis.linear_grid(start, stop, points)
    return analysis.log_grid(start, stop, points)


def cmd_sweep(args, settings: Settings) -> int:
    grid = _grid(args, settings)
    seqs, seen = [], set()
    for fam in args.families:
        for n in args.orders:
            # fixed-order families ignore --orders
            order = None if fam in ("PB1", "BB1", "NB1") else n
            seq = build_sequence(fam, order, args.theta, 0.0, settings.sn_cap, settings.sk_max_level,
                                 settings.tol_defect)
            if seq.label not in seen:
                seen.add(seq.label)
                seqs.append(seq)
    models = {s.model.name for s in seqs}
    if args.model is None and len(models) > 1:
        raise FlagError("families mix amplitude and detuning compensation; pass --model")
    model = _model(args.model, seqs[0])
    result = analysis.sweep(seqs, model, grid, args.metric, jobs=args.jobs)
    _emit(io.dumps_sweep(result), args.out)
    return EXIT_OK


def cmd_orderfit(args, settings: Settings) -> int:
    seq = _load(args.seq, settings)
    try:
        slope = analysis.fit_order(
            seq, _model(args.model, seq), (args.window_start, args.window_stop), args.points, args.metric
        )
    except analysis.FitError as exc:
        raise CliError(EXIT_BUILD, str(exc)) from None
    print(f"{slope:.6f}")
    return EXIT_OK


def cmd_series(args, settings: Settings) -> int:
    seq = _load(args.seq, settings)
    s = sequence_series(seq.pulses, _model(args.model, seq), args.degree)
    for k in range(s.degree + 1):
        c = s[k]
        print(f"C_{k}: norm={np.linalg.norm(c):.6e}")
        for row in c:
            print("  [" + ", ".join(f"{z.real:+.12e}{z.imag:+.12e}j" for z in row) + "]")
        print(f"  pauli: {pauli_decompose(c)}")
    return EXIT_OK


def cmd_scaling(args, settings: Settings) -> int:
    if args.max_order > settings.scaling_max_order:
        raise FlagError(f"--max-order must be <= {settings.scaling_max_order}")
    result = analysis.scaling_study(args.family, args.max_order, args.theta, max_order=settings.scaling_max_order)
    if args.out:
        io.write_text(io.dumps_scaling(result), args.out)
    else:
        sys.stdout.write(io.dumps_scaling(result))
    lo, hi = result.fit_orders
    print(f"exponent: {result.fitted_exponent:.4f} (pulse count, n={lo}..{hi})")
    print(f"two_pi_exponent: {result.two_pi_exponent:.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arbpulse", description="Arbitrarily accurate composite pulse sequences.")
    p.add_argument("--config", help="key=value settings file (flags override it)")
    p.add_argument("--seed", type=int, help="reserved for future use; currently ignored (every command is deterministic)")
    p.add_argument("-v", "--verbose", action="store_true", help="log construction progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="build, verify and save a sequence")
    s.add_argument("--family", required=True, choices=SYNTH_FAMILIES)
    s.add_argument("--order", type=int, help="compensation order (CORPSE: order in delta)")
    s.add_argument("--theta", type=float, default=math.pi, help="target angle in (0, 2 pi]")
    s.add_argument("--phi", type=float, default=0.0, help="target phase; rotates every pulse phase")
    s.add_argument("--out", help="sequence JSON file ('-' for standard output)")
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("eval", help="evaluate a sequence file at one error value")
    e.add_argument("--seq", required=True)
    e.add_argument("--model", choices=("amplitude", "detuning"), help="default: the error the sequence corrects")
    e.add_argument("--value", type=float, required=True)
    e.add_argument("--metric", choices=analysis.METRICS, default="trace")
    e.set_defaults(func=cmd_eval)

    w = sub.add_parser("sweep", help="error-vs-epsilon table as CSV")
    w.add_argument("--families", type=_csv(str), required=True)
    w.add_argument("--orders", type=_csv(int), default=[2])
    w.add_argument("--theta", type=float, default=math.pi)
    w.add_argument("--model", choices=("amplitude", "detuning"))
    w.add_argument("--eps-start", type=float)
    w.add_argument("--eps-stop", type=float)
    w.add_argument("--points", type=int)
    spacing = w.add_mutually_exclusive_group()
    spacing.add_argument("--log", action="store_true", help="logarithmic grid (the default)")
    spacing.add_argument("--linear", action="store_true", help="linear grid")
    w.add_argument("--metric", choices=analysis.METRICS, default="trace")
    w.add_argument("--out", help="CSV file (default: standard output)")
    w.add_argument("--jobs", type=int, default=1, help="worker processes; output is identical for any value")
    w.set_defaults(func=cmd_sweep)

    o = sub.add_parser("orderfit", help="fitted log-log slope of a sequence file")
    o.add_argument("--seq", required=True)
    o.add_argument("--model", choices=("amplitude", "detuning"))
    o.add_argument("--window-start", type=float, default=analysis.DEFAULT_WINDOW[0])
    o.add_argument("--window-stop", type=float, default=analysis.DEFAULT_WINDOW[1])
    o.add_argument("--points", type=int, default=16)
    o.add_argument("--metric", choices=analysis.METRICS, default="trace")
    o.set_defaults(func=cmd_orderfit)

    r = sub.add_parser("series", help="print error-series coefficients with Pauli decompositions")
    r.add_argument("--seq", required=True)
    r.add_argument("--degree", type=int, default=4)
    r.add_argument("--model", choices=("amplitude", "detuning"))
    r.set_defaults(func=cmd_series)

    c = sub.add_parser("scaling", help="pulse count of SKn/SBn against n")
    c.add_argument("--family", choices=("SK", "SB"), default="SK")
    c.add_argument("--max-order", type=int, default=12)
    c.add_argument("--theta", type=float, default=math.pi / 2)
    c.add_argument("--out", help="'n,count' CSV file (default: standard output)")
    c.set_defaults(func=cmd_scaling)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        settings = load_settings(args.config)
        if args.command == "synth":
            check_request(args.family, args.order)
        return args.func(args, settings)
    except (FlagError, ConfigError) as exc:
        parser.error(str(exc))  # exits with status 2
    except CliError as exc:
        print(f"arbpulse: error: {exc}", file=sys.stderr)
        return exc.code
    except (ConstructionError, SeriesError, ValueError) as exc:
        print(f"arbpulse: error: {exc}", file=sys.stderr)
        return EXIT_BUILD
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
