"""Command-line surface: estimate, curve, simulate, verify.

Verbs
  estimate   one-shot gain estimate + stopping verdict from an accuracy log
  curve      per-prefix estimate CSV for plotting
  simulate   seeded Monte Carlo experiments against the theoretical envelopes
  verify     the full named-check suite (see nextgain.verify)

Exit codes (stable contract)
  0   success; for estimate: verdict "continue"
  10  estimate verdict "stop"
  11  estimate verdict "inconclusive"
  20  a simulation/verification assertion failed (or a run could not
      produce a usable answer, e.g. too few conditioned trials)
  64  usage error: bad flags, bad flag/env values, k < 2
  65  input data error: parse failure, domain violation, duplicate iteration
  66  input file missing or unreadable
  73  output path unwritable

JSON reports render floats at 17 significant digits (full IEEE double
round-trip) with a frozen field order, so identical runs emit
byte-identical documents. The estimate schema is exactly
{"k", "s_k", "alpha", "epsilon", "lb", "ub", "error_bound",
"confidence", "best_so_far", "verdict"}. Simulation reports never
include wall-clock or worker fields: --workers changes scheduling, not
results, and timing would break the byte-identity guarantee.

Environment: TH_SEED and TH_TRIALS supply simulate defaults; explicit
flags win over the environment, the environment wins over built-ins.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from nextgain import distributions, ecdf, gain_estimator, gaussian_bounds, sim_harness, verify

__all__ = [
    "AccuracyLog",
    "CliUsageError",
    "IngestError",
    "InputReadError",
    "OutputWriteError",
    "ingest",
    "main",
    "render_json",
]


class CliUsageError(Exception):
    """Bad invocation (flags, flag values, env values); exit 64."""


class IngestError(Exception):
    """Input file exists but its content is unusable; exit 65."""


class InputReadError(Exception):
    """Input file missing or unreadable; exit 66."""


class OutputWriteError(Exception):
    """Output path cannot be written; exit 73."""


@dataclass(frozen=True)
class AccuracyLog:
    """Ordered (iteration, accuracy) observations, post-normalization.

    Iterations are strictly increasing; accuracies already lie in [0, 1]
    (ingestion fails otherwise). ``normalization`` records the (min, max)
    pair applied, or None.
    """

    entries: tuple[tuple[int, float], ...]
    normalization: tuple[float, float] | None

    @property
    def accuracies(self) -> tuple[float, ...]:
        return tuple(accuracy for _, accuracy in self.entries)


def _parse_csv(text: str) -> list[tuple[int, float, int]]:
    entries = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line:
            continue
        if lineno == 1 and line.replace(" ", "").lower() == "iteration,accuracy":
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise IngestError(f"line {lineno}: expected 'iteration,accuracy', got {raw!r}")
        try:
            iteration = int(parts[0])
        except ValueError:
            raise IngestError(f"line {lineno}: iteration {parts[0].strip()!r} is not an integer") from None
        try:
            accuracy = float(parts[1])
        except ValueError:
            raise IngestError(f"line {lineno}: accuracy {parts[1].strip()!r} is not a number") from None
        entries.append((iteration, accuracy, lineno))
    return entries


def _parse_json(text: str) -> list[tuple[int, float, int]]:
    # Error locations for JSON logs are entry ordinals, reported with the
    # same "line N" phrasing as CSV so messages stay uniform.
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, list):
        raise IngestError('line 1: expected a JSON array of {"iteration", "accuracy"} objects')
    entries = []
    for index, item in enumerate(data, start=1):
        if not isinstance(item, dict) or "iteration" not in item or "accuracy" not in item:
            raise IngestError(
                f"line {index}: entry must be an object with 'iteration' and 'accuracy'"
            )
        iteration = item["iteration"]
        accuracy = item["accuracy"]
        if not isinstance(iteration, int) or isinstance(iteration, bool):
            raise IngestError(f"line {index}: iteration must be an integer, got {iteration!r}")
        if not isinstance(accuracy, (int, float)) or isinstance(accuracy, bool):
            raise IngestError(f"line {index}: accuracy must be a number, got {accuracy!r}")
        entries.append((iteration, float(accuracy), index))
    return entries


def _finish_log(
    entries: list[tuple[int, float, int]],
    normalization: tuple[float, float] | None,
) -> AccuracyLog:
    if not entries:
        raise IngestError("no accuracy records found")
    for (iteration, _, line), (prev, _, _) in zip(entries[1:], entries):
        if iteration == prev:
            raise IngestError(f"line {line}: duplicate iteration {iteration}")
        if iteration < prev:
            raise IngestError(
                f"line {line}: iterations must be strictly increasing ({iteration} after {prev})"
            )
    for iteration, accuracy, line in entries:
        if iteration < 1:
            raise IngestError(f"line {line}: iteration must be positive, got {iteration}")
        if not math.isfinite(accuracy):
            raise IngestError(f"line {line}: accuracy {accuracy!r} is not finite")
    if normalization is not None:
        lo, hi = normalization
        scaled = [(it, (acc - lo) / (hi - lo), line) for it, acc, line in entries]
    else:
        scaled = entries
    offenders = [
        f"line {line}: {acc:g}" for _, acc, line in scaled if not 0.0 <= acc <= 1.0
    ]
    if offenders:
        hint = "" if normalization is not None else "; use --min/--max to normalize"
        raise IngestError(
            "accuracies outside [0, 1] after "
            + ("minmax normalization" if normalization is not None else "no normalization")
            + ": " + "; ".join(offenders) + hint
        )
    return AccuracyLog(
        entries=tuple((it, acc) for it, acc, _ in scaled),
        normalization=normalization,
    )


def ingest(
    path: str | os.PathLike,
    fmt: str = "auto",
    normalization: tuple[float, float] | None = None,
) -> AccuracyLog:
    """Read an accuracy log (CSV or JSON) into an AccuracyLog.

    CSV: one ``iteration,accuracy`` record per line, optional header,
    UTF-8, LF or CRLF. JSON: an array of {"iteration": int,
    "accuracy": number} objects. ``auto`` sniffs the extension, then the
    first non-blank byte ('{' or '[' means JSON).
    """
    if fmt not in ("csv", "json", "auto"):
        raise CliUsageError(f"unknown format {fmt!r}; expected csv, json or auto")
    if normalization is not None and not normalization[1] > normalization[0]:
        raise CliUsageError(
            f"normalization needs max > min, got min={normalization[0]!r} max={normalization[1]!r}"
        )
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise IngestError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    except OSError as exc:
        raise InputReadError(f"cannot read {path}: {exc.strerror or exc}") from None
    if fmt == "auto":
        suffix = Path(path).suffix.lower()
        if suffix in (".json", ".csv"):
            fmt = suffix[1:]
        else:
            fmt = "json" if text.lstrip()[:1] in ("{", "[") else "csv"
    entries = _parse_json(text) if fmt == "json" else _parse_csv(text)
    return _finish_log(entries, normalization)


def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_render(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    raise TypeError(f"cannot render {type(value).__name__} in a JSON report")


def render_json(fields: dict) -> str:
    """Serialize a report dict: insertion order kept, floats at 17
    significant digits, so equal inputs give byte-equal documents."""
    return _render(fields)


def _print_human(fields: dict) -> None:
    for key, value in fields.items():
        if key == "passed":
            text = "n/a (no assertion)" if value is None else ("PASS" if value else "FAIL")
        elif isinstance(value, float):
            text = format(value, ".6g")
        else:
            text = str(value)
        print(f"{key}: {text}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _norm_pair(args) -> tuple[float, float] | None:
    if (args.norm_min is None) != (args.norm_max is None):
        raise CliUsageError("--min and --max must be given together")
    if args.norm_min is None:
        return None
    return (args.norm_min, args.norm_max)


def _add_input_flags(parser) -> None:
    parser.add_argument("--input", required=True, help="accuracy log path")
    parser.add_argument("--format", choices=("csv", "json", "auto"), default="auto",
                        help="input format (default: auto-sniff)")
    parser.add_argument("--min", dest="norm_min", type=float, default=None,
                        help="normalization lower anchor: a -> (a - min)/(max - min)")
    parser.add_argument("--max", dest="norm_max", type=float, default=None,
                        help="normalization upper anchor (requires --min)")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="nextgain",
        description="Estimate the expected accuracy gain of one more random-search iteration.",
    )
    sub = parser.add_subparsers(dest="command", metavar="VERB", required=True)

    est = sub.add_parser("estimate", help="estimate next-iteration gain and verdict")
    _add_input_flags(est)
    est.add_argument("--threshold", type=float, default=0.0,
                     help="stop threshold on the expected gain (default 0)")
    est.add_argument("--alpha", type=float, default=None,
                     help="override the DKW band level (default 1/sqrt(2k))")
    est.add_argument("--json", action="store_true", help="emit the JSON report schema")

    curve = sub.add_parser("curve", help="write the per-prefix estimate curve as CSV")
    _add_input_flags(curve)
    curve.add_argument("--out", required=True, help="output CSV path")

    sim = sub.add_parser(
        "simulate",
        help="run a seeded experiment",
        epilog="Defaults: --seed from TH_SEED else 0; --trials from TH_TRIALS else "
               "a per-experiment default. Explicit flags beat the environment.",
    )
    sim.add_argument("--experiment", required=True,
                     choices=("error-bound", "dkw-coverage", "bracketing", "discrepancy", "mae"))
    sim.add_argument("--dist", default="uniform",
                     help="uniform | beta:a,b | truncnormal:mu,sigma (sampling experiments)")
    sim.add_argument("--k", type=int, default=None,
                     help="draws per trial: iterations k for error-bound/bracketing, "
                          "sample size n for dkw-coverage/discrepancy/mae")
    sim.add_argument("--trials", type=int, default=None, help="number of independent trials")
    sim.add_argument("--seed", type=int, default=None, help="experiment seed")
    sim.add_argument("--alpha", type=float, default=None,
                     help="band level for dkw-coverage/bracketing; improvement threshold for mae")
    sim.add_argument("--epsilon", type=float, default=None,
                     help="bracketing only: fixed band radius instead of the DKW radius")
    sim.add_argument("--probe-grid", type=int, default=10**6,
                     help="quadrature resolution for ground truth (default 1e6)")
    sim.add_argument("--mu", type=float, default=0.0, help="Gaussian mean (discrepancy/mae)")
    sim.add_argument("--sigma", type=float, default=1.0,
                     help="Gaussian standard deviation (discrepancy/mae)")
    sim.add_argument("--couple-alpha", action="store_true",
                     help="mae only: use each trial's best draw as the threshold (no assertion)")
    sim.add_argument("--workers", type=int, default=1,
                     help="worker threads; never changes results, only scheduling")
    sim.add_argument("--json", action="store_true", help="emit a JSON report")

    ver = sub.add_parser("verify", help="run the named verification checks")
    ver.add_argument("--only", action="append", metavar="NAME", default=None,
                     help="run a single named check (repeatable); see README for names")
    ver.add_argument("--json", action="store_true", help="emit a JSON report")
    return parser


def _read_log_or_usage(args) -> AccuracyLog:
    log = ingest(args.input, args.format, _norm_pair(args))
    if len(log.entries) < 2:
        raise CliUsageError(
            f"need at least 2 accuracies for an estimate, got {len(log.entries)}"
        )
    return log


_VERDICT_EXIT = {
    gain_estimator.Verdict.CONTINUE: 0,
    gain_estimator.Verdict.STOP: 10,
    gain_estimator.Verdict.INCONCLUSIVE: 11,
}


def cmd_estimate(args) -> int:
    log = _read_log_or_usage(args)
    sample = ecdf.SortedSample.from_unsorted(log.accuracies)
    try:
        report = gain_estimator.estimate_report(sample, args.threshold, args.alpha)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None
    fields = {
        "k": report.k,
        "s_k": report.s_k,
        "alpha": report.alpha,
        "epsilon": report.epsilon,
        "lb": report.lb,
        "ub": report.ub,
        "error_bound": report.error_bound,
        "confidence": report.confidence,
        "best_so_far": report.best_so_far,
        "verdict": report.verdict.value,
    }
    if args.json:
        print(render_json(fields))
    else:
        _print_human(fields)
    return _VERDICT_EXIT[report.verdict]


def cmd_curve(args) -> int:
    log = _read_log_or_usage(args)
    try:
        points = gain_estimator.gain_curve(log.accuracies)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None
    lines = ["k,s_k,lb,ub,error_bound,best_so_far"]
    for pt in points:
        lines.append(
            f"{pt.k},{pt.s_k:.12g},{pt.lb:.12g},{pt.ub:.12g},"
            f"{pt.error_bound:.12g},{pt.best_so_far:.12g}"
        )
    text = "\n".join(lines) + "\n"
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise OutputWriteError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    print(f"wrote {len(points)} rows to {args.out}")
    return 0


def _env_int(var: str, flag_value: int | None, default: int) -> int:
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(var)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise CliUsageError(f"environment variable {var}={raw!r} is not an integer") from None


# Per-experiment defaults for --k (draws per trial), --trials, --alpha.
_EXPERIMENT_DEFAULTS = {
    "error-bound": (256, 2000, None),
    "dkw-coverage": (200, 5000, 0.1),
    "bracketing": (64, 2000, 0.05),
    "discrepancy": (10, 100000, None),
    "mae": (10, 100000, 0.0),
}


def cmd_simulate(args) -> int:
    default_k, default_trials, default_alpha = _EXPERIMENT_DEFAULTS[args.experiment]
    seed = _env_int("TH_SEED", args.seed, 0)
    trials = _env_int("TH_TRIALS", args.trials, default_trials)
    k = args.k if args.k is not None else default_k
    alpha = args.alpha if args.alpha is not None else default_alpha
    if args.workers < 1:
        raise CliUsageError(f"--workers must be >= 1, got {args.workers}")
    start = time.perf_counter()
    try:
        if args.experiment == "error-bound":
            dist = distributions.parse_dist(args.dist)
            spec = sim_harness.SimulationSpec(dist, k, trials, seed, args.probe_grid)
            report = sim_harness.estimator_error_experiment(spec, workers=args.workers)
            slack = 3.0 * math.sqrt(report.allowed_rate * (1.0 - report.allowed_rate) / trials)
            passed = report.passed
            fields = {
                "experiment": "error-bound",
                "dist": dist.label,
                "k": k,
                "trials": trials,
                "seed": seed,
                "probe_grid": args.probe_grid,
                "violation_rate": report.violation_rate,
                "mean_abs_error": report.mean_abs_error,
                "bound": report.bound,
                "allowed_rate": report.allowed_rate,
                "slack": slack,
                "passed": passed,
            }
        elif args.experiment == "dkw-coverage":
            epsilon = ecdf.dkw_epsilon(k, alpha)
            rate = sim_harness.dkw_coverage_experiment(k, alpha, trials, seed,
                                                       workers=args.workers)
            slack = 3.0 * math.sqrt(alpha * (1.0 - alpha) / trials)
            passed = rate <= alpha + slack
            fields = {
                "experiment": "dkw-coverage",
                "n": k,
                "alpha": alpha,
                "trials": trials,
                "seed": seed,
                "epsilon": epsilon,
                "violation_rate": rate,
                "allowed_rate": alpha,
                "slack": slack,
                "passed": passed,
            }
        elif args.experiment == "bracketing":
            if not 0.0 < alpha < 1.0:
                raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
            dist = distributions.parse_dist(args.dist)
            spec = sim_harness.SimulationSpec(dist, k, trials, seed, args.probe_grid)
            coverage = sim_harness.bracketing_experiment(spec, alpha, epsilon=args.epsilon,
                                                         workers=args.workers)
            epsilon = ecdf.dkw_epsilon(k, alpha) if args.epsilon is None else args.epsilon
            required = (1.0 - alpha) - 3.0 * math.sqrt(alpha * (1.0 - alpha) / trials)
            passed = coverage >= required
            fields = {
                "experiment": "bracketing",
                "dist": dist.label,
                "k": k,
                "alpha": alpha,
                "epsilon": epsilon,
                "trials": trials,
                "seed": seed,
                "probe_grid": args.probe_grid,
                "coverage": coverage,
                "required_coverage": required,
                "passed": passed,
            }
        elif args.experiment == "discrepancy":
            mu_gaps, sigma_gaps = sim_harness.discrepancy_gap_samples(
                args.sigma, k, trials, seed, workers=args.workers
            )
            mu_mean = float(mu_gaps.mean())
            mu_se = float(mu_gaps.std(ddof=1)) / math.sqrt(mu_gaps.size)
            sigma_mean = float(sigma_gaps.mean())
            mu_expected = gaussian_bounds.mu_gap_conditional_mean(args.sigma, k)
            sigma_bound = gaussian_bounds.sigma_gap_lower_bound(args.sigma, k)
            passed = abs(mu_mean - mu_expected) <= 3.0 * mu_se and sigma_mean >= sigma_bound
            fields = {
                "experiment": "discrepancy",
                "sigma": args.sigma,
                "n": k,
                "trials": trials,
                "seed": seed,
                "mu_gap_mean": mu_mean,
                "mu_gap_expected": mu_expected,
                "mu_gap_se": mu_se,
                "sigma_gap_mean": sigma_mean,
                "sigma_gap_bound": sigma_bound,
                "passed": passed,
            }
        else:
            p = gaussian_bounds.GaussianParams(args.mu, args.sigma, alpha)
            errors = sim_harness.plug_in_errors(p, k, trials, seed,
                                                couple_alpha=args.couple_alpha,
                                                workers=args.workers)
            mae = float(errors.mean())
            se = float(errors.std(ddof=1)) / math.sqrt(trials)
            bounds = gaussian_bounds.err_ma_lower_bounds(p, k)
            if args.couple_alpha:
                passed = None
            else:
                passed = mae >= bounds.err_ma_general - 3.0 * se and (
                    bounds.err_ma_tail is None or mae >= bounds.err_ma_tail - 3.0 * se
                )
            fields = {
                "experiment": "mae",
                "mu": args.mu,
                "sigma": args.sigma,
                "alpha": alpha,
                "n": k,
                "trials": trials,
                "seed": seed,
                "couple_alpha": args.couple_alpha,
                "mae": mae,
                "mae_se": se,
                "err_ma_general": bounds.err_ma_general,
                "err_ma_tail": bounds.err_ma_tail,
                "passed": passed,
            }
    except (ValueError, TypeError) as exc:
        raise CliUsageError(str(exc)) from None
    if args.json:
        print(render_json(fields))
    else:
        _print_human(fields)
        print(f"elapsed: {time.perf_counter() - start:.3f}s")
    return 0 if passed in (True, None) else 20


def cmd_verify(args) -> int:
    try:
        results = verify.run_checks(args.only)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None
    all_passed = all(r.passed for r in results)
    if args.json:
        fields = {
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
            "passed": all_passed,
        }
        print(render_json(fields))
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.name:<{width}}  {status}  {r.elapsed:7.2f}s  {r.detail}")
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if all_passed else 20


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        print(f"nextgain: error: {exc}", file=sys.stderr)
        return 64
    except SystemExit as exc:  # argparse --help exits instead of returning
        return 0 if exc.code in (None, 0) else 64
    handlers = {
        "estimate": cmd_estimate,
        "curve": cmd_curve,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except CliUsageError as exc:
        print(f"nextgain: error: {exc}", file=sys.stderr)
        return 64
    except IngestError as exc:
        print(f"nextgain: error: {exc}", file=sys.stderr)
        return 65
    except InputReadError as exc:
        print(f"nextgain: error: {exc}", file=sys.stderr)
        return 66
    except OutputWriteError as exc:
        print(f"nextgain: error: {exc}", file=sys.stderr)
        return 73
    except RuntimeError as exc:
        print(f"nextgain: error: {exc}", file=sys.stderr)
        return 20


if __name__ == "__main__":
    sys.exit(main())
