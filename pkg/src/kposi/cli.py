"""``kposi`` command line: classify, signvar, simulate, separation, wedge, compound, gen, selftest.

Exit codes: 0 the property holds / success, 1 refuted or degenerate input,
2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io as kio
from .classify import classify_all, classify_order
from .core import compound, enumerate_sequences
from .dynamics import simulate, wedge_dynamics
from .errors import DegenerateSpectrumError, DimensionError, KposiError, NotFoundError, ParseError, PreconditionError
from .generators import FIXTURE_NAMES, KINDS, GeneratorSpec, generate
from .selftest import run_golden_checks
from .signvar import cone_membership, sign_variations
from .spectral import spectral_split, verify_separation
from .tolerances import ToleranceProfile

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _emit(report: dict, out=None):
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _tolerances(args) -> ToleranceProfile:
    return ToleranceProfile.resolve(
        getattr(args, "tol_profile", None),
        tau_zero=getattr(args, "tau_zero", None),
        tau_spec=getattr(args, "tau_spec", None),
        tau_gap=getattr(args, "tau_gap", None),
        tau_rate=getattr(args, "tau_rate", None),
        state_zero_rel=getattr(args, "state_zero_rel", None),
    )


def _run_report(args, argv, inputs, tol, results, verdicts, passed, started):
    return {
        "command": ["kposi", *argv],
        "inputs": {str(p): kio.file_digest(p) for p in inputs},
        "tolerance_profile": tol.to_dict() if tol else None,
        "results": results,
        "verdicts": verdicts,
        "passed": passed,
        "duration_s": round(time.perf_counter() - started, 6),
    }


def cmd_classify(args, tol):
    A = kio.read_matrix(args.matrix)
    if args.k is not None:
        c = classify_order(A, args.k, tol)
        results = {"shape": list(A.shape), "classification": c.to_dict()}
        holds = c.is_ssr if args.require == "SSR" else c.is_sr
        verdicts = {f"{args.require}_{args.k}": holds}
    else:
        rep = classify_all(A, tol)
        results = {"shape": list(A.shape), **rep.to_dict()}
        holds = rep.is_SSR if args.require == "SSR" else rep.is_SR
        verdicts = {args.require: holds}
    return [args.matrix], results, verdicts, holds


def cmd_signvar(args, tol):
    y = kio.read_vector(args.vector)
    sv = sign_variations(y, args.zero_tol)
    results = {"n": int(y.size), "s_minus": sv.s_minus, "s_plus": sv.s_plus,
               "zero_count": sv.zero_count, "zero_tol": args.zero_tol}
    if args.k is not None:
        results["cone"] = cone_membership(y, args.k, args.zero_tol).to_dict()
    return [args.vector], results, {}, True


def cmd_simulate(args, tol):
    A = kio.read_matrix(args.matrix)
    x0 = kio.read_vector(args.x0)
    if A.shape[0] != A.shape[1] or A.shape[1] != x0.size:
        raise DimensionError(f"matrix {A.shape} and x0 of length {x0.size} are not conformable")
    trace = simulate(A, x0, args.steps, k=args.k, renormalize=args.renorm, zero_rel=tol.state_zero_rel)
    csv_text = kio.trace_to_csv(trace)
    if args.csv_out:
        Path(args.csv_out).write_text(csv_text)
    results = trace.summary()
    results["s_minus_trace"] = trace.s_minus_trace
    results["s_plus_trace"] = trace.s_plus_trace
    if args.csv_out:
        results["csv_out"] = str(args.csv_out)
    verdicts = {}
    passed = True
    # SSR_k maps P^k_- \ {0} into P^k_+: check it whenever it applies
    if A.shape[0] >= args.k and trace.s_minus_trace[0] <= args.k - 1 and np.any(x0):
        if classify_order(A, args.k, tol).is_ssr:
            bound = results["max_s_plus_after_step0"]
            holds = bound is None or bound <= args.k - 1
            verdicts[f"s_plus_after_step0_le_{args.k - 1}"] = holds
            passed = holds
    if not args.csv_out and args.print_csv:
        sys.stderr.write(csv_text)
    return [args.matrix, args.x0], results, verdicts, passed


def cmd_separation(args, tol):
    A = kio.read_matrix(args.matrix)
    try:
        split = spectral_split(A, args.k, tol, check_ssr=not args.skip_ssr_check)
    except DegenerateSpectrumError as exc:
        gap = {"error": str(exc), "moduli": exc.moduli, "k": exc.k, "tau_gap": tol.tau_gap}
        return [args.matrix], gap, {"spectral_gap": False}, False
    except PreconditionError as exc:
        return [args.matrix], {"error": str(exc)}, {"precondition": False}, False
    check = verify_separation(A, args.k, trials=args.trials, horizon=args.horizon,
                              rng_seed=args.seed, tol=tol, split=split)
    results = {"split": split.to_dict(), "separation": check.to_dict()}
    verdicts = {
        "product_sign_check": split.product_sign_check,
        "E_in_cone": check.E_in_cone,
        "Ec_meets_cone_only_at_zero": check.Ec_meets_cone_only_at_zero,
        "rates_within_bound": check.rates_within_bound,
    }
    return [args.matrix], results, verdicts, check.passed and split.product_sign_check


def cmd_wedge(args, tol):
    A = kio.read_matrix(args.matrix)
    inits = [kio.read_vector(p) for p in args.inits]
    trace = wedge_dynamics(A, inits, args.steps)
    results = trace.to_dict()
    results["eta_norm"] = np.linalg.norm(trace.eta, axis=1).tolist()
    return [args.matrix, *args.inits], results, {"paths_agree": trace.paths_agree}, trace.paths_agree


def cmd_compound(args, tol):
    A = kio.read_matrix(args.matrix)
    C = compound(A, args.k)
    results = {
        "k": args.k,
        "shape": list(C.shape),
        "row_sequences": [[i + 1 for i in s] for s in enumerate_sequences(args.k, A.shape[0])],
        "col_sequences": [[i + 1 for i in s] for s in enumerate_sequences(args.k, A.shape[1])],
        "data": C.tolist(),
    }
    return [args.matrix], results, {}, True


def cmd_selftest(args, tol):
    checks = run_golden_checks()
    results = {"checks": [c.to_dict() for c in checks],
               "failures": [c.name for c in checks if not c.passed]}
    return [], results, {"all_golden_checks": not results["failures"]}, not results["failures"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-profile", help="key=value tolerance file (fallback: $KPOSI_TOL_PROFILE)")
    for name in ("tau-zero", "tau-spec", "tau-gap", "tau-rate", "state-zero-rel"):
        common.add_argument(f"--{name}", type=float, default=None, help="override one tolerance")
    common.add_argument("--out", help="write the output here instead of stdout")

    p = _Parser(prog="kposi", description="Analysis of discrete-time k-positive linear systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = add("classify", help="SR_k / SSR_k classification")
    s.add_argument("matrix")
    s.add_argument("--k", type=int)
    s.add_argument("--require", choices=("SSR", "SR"), default="SSR")
    s.set_defaults(func=cmd_classify)

    s = add("signvar", help="s_minus / s_plus of a vector")
    s.add_argument("vector")
    s.add_argument("--k", type=int)
    s.add_argument("--zero-tol", type=float, default=0.0)
    s.set_defaults(func=cmd_signvar)

    s = add("simulate", help="trajectory with sign-variation trace")
    s.add_argument("matrix")
    s.add_argument("x0")
    s.add_argument("--steps", type=int, default=20)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--renorm", action="store_true")
    s.add_argument("--csv-out")
    s.add_argument("--print-csv", action="store_true", help="write the trace CSV to stderr")
    s.set_defaults(func=cmd_simulate)

    s = add("separation", help="spectral split and separation checks")
    s.add_argument("matrix")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--horizon", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--skip-ssr-check", action="store_true",
                   help="run the split without certifying SSR_k first")
    s.set_defaults(func=cmd_separation)

    s = add("wedge", help="exterior-product dynamics and Perron limit")
    s.add_argument("matrix")
    s.add_argument("inits", nargs="+")
    s.add_argument("--steps", type=int, default=15)
    s.set_defaults(func=cmd_wedge)

    s = add("compound", help="k-th multiplicative compound")
    s.add_argument("matrix")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_compound)

    s = add("gen", help="emit a generated or fixture matrix")
    s.add_argument("--kind", choices=KINDS, default="totally_positive")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--k", type=int)
    s.add_argument("--name", choices=FIXTURE_NAMES)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--attempts", type=int, default=10_000)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=None)

    s = add("selftest", help="reproduce every published example value")
    s.set_defaults(func=cmd_selftest)
    return p


def _gen(args, tol):
    spec = GeneratorSpec(n=args.n, kind=args.kind, rng_seed=args.seed, k=args.k,
                         name=args.name, attempts=args.attempts)
    A = generate(spec, tol)
    text = kio.format_matrix_json(A) + "\n" if args.format == "json" else kio.format_matrix_csv(A)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        tol = _tolerances(args)
        if args.command == "gen":
            return _gen(args, tol)
        inputs, results, verdicts, passed = args.func(args, tol)
    except ParseError as exc:
        print(f"kposi: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionError as exc:
        print(f"kposi: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, NotFoundError, KposiError) as exc:
        print(f"kposi: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except (ValueError, KeyError, OSError) as exc:
        print(f"kposi: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(_run_report(args, argv, inputs, tol, results, verdicts, passed, started), args.out)
    return EXIT_OK if passed else EXIT_REFUTED


if __name__ == "__main__":
    raise SystemExit(main())
