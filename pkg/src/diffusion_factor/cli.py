"""Command-line entry point: ``factor``, ``order``, ``spectrum`` and ``success-rate``.

Exit codes are 0 on success, 1 for input or usage errors and 2 when the
algorithm ran but produced no answer.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import metadata

from . import __version__
from .diffusion import StepLedger, probability_csv, spectral_data, verify_korobov_bound
from .errors import (
    DecodeFailure,
    DiffusionFactorError,
    NotAUnit,
    OrderNotOdd,
    PreconditionViolated,
    ScreenRejected,
    TooLarge,
)
from .factor import exhaustive_success_rate, factor_once, factor_with_retries
from .numtheory import ScreenKind, exponent_bound, screen_input
from .orderfind import Mode, OrderFindConfig, find_order

EXIT_OK, EXIT_INPUT, EXIT_NO_ANSWER = 0, 1, 2
SPECTRUM_MAX_R = 4096


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return __version__


def _prob(p: float) -> str:
    return f"{p:.17g}"


def _emit(args, command: str, inputs: dict, outcome: dict, ledger: dict,
          started: float, seed=None) -> None:
    if not args.json:
        return
    record = {
        "command": command,
        "inputs": inputs,
        "outcome": outcome,
        "ledger": ledger,
        "wall_time_ms": round((time.perf_counter() - started) * 1000, 3) if args.timing else 0,
        "seed": seed,
        "artifact_version": _version(),
    }
    print(json.dumps(record, indent=2))


def _order_config(args) -> OrderFindConfig:
    return OrderFindConfig(
        mode=Mode(args.mode),
        check_every=args.check_every,
        max_candidates=args.max_candidates,
        steps=getattr(args, "steps", None),
        repetition_shortcut=not getattr(args, "emit_probs", None),
    )


def cmd_factor(args) -> int:
    started = time.perf_counter()
    n = args.N
    try:
        screen = screen_input(n)
    except (ValueError, DiffusionFactorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if screen.kind is not ScreenKind.COMPOSITE:
        print(f"{n}: {screen}", file=sys.stderr)
        return EXIT_INPUT
    config = _order_config(args)
    if args.a is not None:
        if not 1 <= args.a <= n:
            print(f"error: --a must lie in 1..{n}", file=sys.stderr)
            return EXIT_INPUT
        outcomes = [factor_once(n, args.a, config)]
        seed = args.seed
        rng = None
    else:
        report = factor_with_retries(n, args.attempts, args.seed, config)
        outcomes, seed, rng = report.outcomes, report.seed, report.rng_algorithm

    final = outcomes[-1] if outcomes else None
    total = StepLedger()
    for o in outcomes:
        total.absorb(o.ledger)
    ledger = total.as_dict()
    outcome = final.as_dict() if final else {"status": "no_answer", "divisor": None}
    outcome["attempts_used"] = len(outcomes)
    if rng:
        outcome["rng_algorithm"] = rng
    inputs = {"N": n, "a": args.a, "attempts": args.attempts, "mode": args.mode,
              "check_every": args.check_every, "max_candidates": args.max_candidates}
    _emit(args, "factor", inputs, outcome, ledger, started, seed)

    found = final is not None and final.found
    if not args.json:
        if found:
            print(f"{n} = {final.divisor} x {final.cofactor}")
            extra = ", ".join(f"{k}={outcome[k]}" for k in ("s", "q", "x", "r_b", "k", "r_a")
                              if k in outcome)
            print(f"path: {final.path.value}, a={final.chosen_a}" + (f", {extra}" if extra else ""))
        else:
            why = final.reason.value if final else "no attempts"
            print(f"{n}: no divisor after {len(outcomes)} attempt(s) ({why})")
        print(f"diffusion steps: {ledger['matrix_applications']} W-applications + "
              f"{ledger['measurements']} measurements = {ledger['diffusion_steps']}")
    return EXIT_OK if found else EXIT_NO_ANSWER


def cmd_order(args) -> int:
    started = time.perf_counter()
    n, b = args.N, args.b
    if n < 3:
        print("error: N must be >= 3", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = find_order(b, n, _order_config(args))
    except (NotAUnit, OrderNotOdd, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DecodeFailure as exc:
        print(f"no answer: {exc}", file=sys.stderr)
        return EXIT_NO_ANSWER

    if args.emit_probs and result.state is not None:
        with open(args.emit_probs, "w", newline="") as fh:
            fh.write(probability_csv(result.state))

    outcome = {
        "order": result.order,
        "decode_path": result.decode_path.value,
        "candidates_tried": result.candidates_tried,
        "iterations": result.state.iteration if result.state else 0,
        "measured": {str(v): _prob(p) for v, p in result.measured.items()},
        "intervals": {k: v.as_dict() for k, v in result.intervals.items()},
    }
    inputs = {"N": n, "b": b, "mode": args.mode, "steps": args.steps,
              "check_every": args.check_every, "max_candidates": args.max_candidates,
              "emit_probs": args.emit_probs}
    _emit(args, "order", inputs, outcome, result.ledger.as_dict(), started)
    if not args.json:
        led = result.ledger
        print(f"ord_{n}({b % n}) = {result.order}")
        print(f"{led.matrix_applications} W-applications + {led.measurements} measurements "
              f"= {led.diffusion_steps} diffusion steps ({result.decode_path.value})")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    started = time.perf_counter()
    r, M = args.r, args.M
    if r < 1 or r % 2 == 0:
        print("error: r must be a positive odd integer", file=sys.stderr)
        return EXIT_INPUT
    if r > SPECTRUM_MAX_R:
        print(f"error: r > {SPECTRUM_MAX_R} not supported", file=sys.stderr)
        return EXIT_INPUT
    if M < 1:
        print("error: M must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    data = spectral_data(r, M)
    outcome = {
        "r": r,
        "M": M,
        "lambda_star": _prob(data.lambda_star),
        "eigenvalue_bound": _prob(1 - 1 / (2 * (M + 1))),
        "lambdas": [_prob(x) for x in data.lam],
    }
    if args.verify_bound:
        if r < 3:
            outcome["korobov"] = None
        else:
            try:
                ratio, holds = verify_korobov_bound(r, M)
            except PreconditionViolated as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_INPUT
            outcome["korobov"] = {"max_ratio": _prob(ratio),
                                  "threshold": _prob(1 - 1 / (M + 1)), "holds": holds}
    _emit(args, "spectrum", {"r": r, "M": M, "verify_bound": args.verify_bound}, outcome,
          {"matrix_applications": 0, "measurements": 0, "diffusion_steps": 0,
           "digital_ops": 0}, started)
    if not args.json:
        print(f"r={r} M={M} lambda*={data.lambda_star:.12g} "
              f"(bound {1 - 1 / (2 * (M + 1)):.12g})")
        if r <= 64:
            print("lambda_k: " + " ".join(f"{x:.6f}" for x in data.lam))
        kor = outcome.get("korobov")
        if kor:
            print(f"max|eta_k|/(2(M+1)) = {float(kor['max_ratio']):.12g} < "
                  f"{float(kor['threshold']):.12g}: {'holds' if kor['holds'] else 'FAILS'}")
    return EXIT_OK


def cmd_success_rate(args) -> int:
    started = time.perf_counter()
    try:
        rate = exhaustive_success_rate(args.N, _order_config(args))
    except (TooLarge, ScreenRejected, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    total = StepLedger()
    for o in rate.outcomes:
        total.absorb(o.ledger)
    ledger = total.as_dict()
    outcome = {
        "distinct_primes": rate.distinct_primes,
        "bound": str(rate.bound),
        "rate_over_units": str(rate.rate_over_units),
        "rate_over_all": str(rate.rate_over_all),
        "bound_holds": rate.rate_over_units >= rate.bound,
        "histogram": rate.histogram,
    }
    _emit(args, "success-rate", {"N": args.N, "mode": args.mode}, outcome, ledger, started)
    if not args.json:
        print(f"N={args.N} m={rate.distinct_primes} p(m)={rate.bound} "
              f"({float(rate.bound):.4f})")
        print(f"over units: {rate.rate_over_units} ({float(rate.rate_over_units):.4f})")
        print(f"over 1..N:  {rate.rate_over_all} ({float(rate.rate_over_all):.4f})")
        for key, count in rate.histogram.items():
            print(f"  {key:28s} {count}")
    return EXIT_OK


def _add_walk_flags(p, *, steps=False):
    p.add_argument("--mode", choices=[m.value for m in Mode], default="full")
    p.add_argument("--check-every", type=int, default=25)
    p.add_argument("--max-candidates", type=int, default=8)
    if steps:
        p.add_argument("--steps", type=int, default=None, help="override the walk length")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diffusion-factor",
                     description="Factor integers by simulated heat diffusion on Cayley graphs.")
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a RunRecord JSON object")
    common.add_argument("--timing", action="store_true",
                        help="record real wall time (JSON is then not reproducible)")

    p = sub.add_parser("factor", parents=[common], help="find a nontrivial divisor of N")
    p.add_argument("N", type=int)
    p.add_argument("--a", type=int, default=None, help="fix the base instead of drawing it")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--attempts", type=int, default=16)
    _add_walk_flags(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("order", parents=[common], help="order of an odd-order unit b mod N")
    p.add_argument("N", type=int)
    p.add_argument("b", type=int)
    _add_walk_flags(p, steps=True)
    p.add_argument("--emit-probs", metavar="PATH", default=None,
                   help="write the final probability vector as CSV (always walks)")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("spectrum", parents=[common], help="walk eigenvalues of X_{r,S}")
    p.add_argument("r", type=int)
    p.add_argument("M", type=int)
    p.add_argument("--verify-bound", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("success-rate", parents=[common], help="exhaustive success rate over a")
    p.add_argument("N", type=int)
    _add_walk_flags(p)
    p.set_defaults(func=cmd_success_rate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "attempts", 0) < 0:
        print("error: --attempts must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "check_every", 1) < 1 or getattr(args, "max_candidates", 1) < 1:
        print("error: --check-every and --max-candidates must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
