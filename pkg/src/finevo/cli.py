"""Command-line front end: analyze | simulate | verify | example.

Exit codes: 0 = all checks pass, 1 = a statistical check failed at alpha,
2 = structural inconsistency, 3 = input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import analyze_law, example_law
from .cliques import InvariantFamily, classify_family
from .errors import FinevoError, InputError
from .limits import cesaro_average, exact_vs_float_sup, float_limit_oracle
from .measure import MappingLaw, RationalMeasure, as_fraction
from .report import build_report, render_text, report_to_json
from .semigroup import DEFAULT_ELEMENT_CAP
from .simulate import (
    sample_stationary,
    sample_nonstationary,
    verify_factorization,
    verify_mono_projection,
    verify_nonstationary_joint,
    verify_path_exact,
    verify_third_noise,
)
from .stats import Check, VerificationReport
from .transform import tuple_from_literal

EXIT_OK = 0
EXIT_STATISTICAL = 1
EXIT_STRUCTURAL = 2
EXIT_INPUT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_output_flags(p):
    p.add_argument("--out", help="write the report to this file")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp field (byte-identical reruns)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="emit JSON (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text",
                     help="emit a human-readable rendering of the JSON")
    p.set_defaults(fmt="json")


def _add_sim_flags(p):
    p.add_argument("--config", help="simulation config JSON file")
    p.add_argument("--mode", choices=("stationary", "nonstationary"))
    p.add_argument("--replications", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--k-min", type=int, dest="k_min")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--window", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finevo",
                     description="Exact limit structure and seeded simulation "
                                 "of random compositions of transformations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural analysis of a mapping law")
    p.add_argument("--law", required=True, help="mapping-law JSON file")
    p.add_argument("--cap", type=int, default=DEFAULT_ELEMENT_CAP,
                   help="closure element cap (default 10^6)")
    p.add_argument("--seed", type=int, help="echoed into the report")
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="seeded simulation with exact and "
                                        "statistical verification")
    p.add_argument("--law", help="mapping-law JSON file")
    p.add_argument("--cap", type=int, default=DEFAULT_ELEMENT_CAP)
    _add_sim_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="full verification battery including "
                                      "the floating-point limit oracle")
    p.add_argument("--law", required=True, help="mapping-law JSON file")
    p.add_argument("--cap", type=int, default=DEFAULT_ELEMENT_CAP)
    _add_sim_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("example", help="run analyze + simulate on the "
                                       "built-in two-generator law")
    p.add_argument("--replications", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    _add_output_flags(p)

    return parser


def _load_law(path: str) -> MappingLaw:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read law file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"law file {path} is not valid JSON "
                         f"(line {exc.lineno}, column {exc.colno})") from exc
    return MappingLaw.from_dict(obj)


def _load_sim_config(args) -> dict:
    config = {
        "mode": "stationary",
        "k_min": -64,
        "k_max": 0,
        "replications": 10_000,
        "seed": 42,
        "alpha": 0.001,
        "window": 3,
        "Lambda_W": None,
        "family": None,
        "law_file": None,
    }
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config {args.config} is not valid JSON "
                             f"(line {exc.lineno}, column {exc.colno})") from exc
        unknown = set(file_cfg) - set(config)
        if unknown:
            raise InputError(f"unknown config fields: {sorted(unknown)}")
        config.update(file_cfg)
    for field in ("mode", "replications", "seed", "alpha", "k_min", "k_max", "window"):
        value = getattr(args, field, None)
        if value is not None:
            config[field] = value
    if getattr(args, "law", None):
        config["law_file"] = args.law
    if not config["law_file"]:
        raise InputError("a law file is required (--law or config law_file)")
    if config["replications"] < 1:
        raise InputError("replications must be >= 1")
    if config["alpha"] is not None and not 0 < config["alpha"] < 1:
        raise InputError("alpha must be in (0, 1)")
    if config["k_min"] >= config["k_max"]:
        raise InputError("k_min must be less than k_max")
    if config["window"] < 1:
        raise InputError("window must be >= 1")
    return config


def _parse_tuple_measure(obj: dict) -> RationalMeasure:
    return RationalMeasure({tuple_from_literal(k): v for k, v in obj.items()})


def _resolve_lambda_w(config, analysis) -> RationalMeasure:
    if config["Lambda_W"] is None:
        return RationalMeasure.uniform(analysis.cliques.W)
    return _parse_tuple_measure(config["Lambda_W"])


def _resolve_family(config, analysis) -> InvariantFamily:
    family_cfg = config["family"]
    if family_cfg is None:
        raise InputError("nonstationary mode needs a family in the config")
    try:
        coeffs = [as_fraction(c) for c in family_cfg["c"]]
        lambdas = [_parse_tuple_measure(entry) for entry in family_cfg["Lambda_W"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad family config: {exc}") from exc
    p = analysis.limits.p
    if len(coeffs) != p or len(lambdas) != p:
        raise InputError(f"family needs exactly p = {p} coefficients and laws")
    if sum(coeffs) != 1:
        raise InputError("family coefficients must sum to 1")
    if any(c < 0 for c in coeffs):
        raise InputError("family coefficients must be nonnegative")
    wset = set(analysis.cliques.W)
    for lam in lambdas:
        bad = [w for w in lam.support() if w not in wset]
        if bad:
            raise InputError(f"family law has mass outside W at {bad[0]}")
    family = InvariantFamily(limits=analysis.limits, c=tuple(coeffs),
                             Lambda_W=tuple(lambdas))
    # round-trip through the classifier to validate the family form
    classify_family(analysis.limits, analysis.cliques, family.law_at(0))
    return family


def _emit(report: dict, args) -> None:
    payload = report_to_json(report) if args.fmt == "json" else render_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def _exit_code(verification: VerificationReport) -> int:
    if verification.exact_failures:
        return EXIT_STRUCTURAL
    if verification.statistical_failures:
        return EXIT_STATISTICAL
    return EXIT_OK


def _run_simulation_battery(analysis, config) -> VerificationReport:
    limits = analysis.limits
    cd = analysis.cliques
    seed = config["seed"]
    alpha = config["alpha"]
    verification = VerificationReport(
        replications=config["replications"],
        seed=seed,
        alpha=alpha,
        config={k: config[k] for k in ("mode", "k_min", "k_max", "window")},
    )

    if config["mode"] == "nonstationary":
        family = _resolve_family(config, analysis)
        path = sample_nonstationary(
            limits, cd, family, config["k_min"], config["k_max"], seed
        )
    else:
        lambda_w = _resolve_lambda_w(config, analysis)
        path = sample_stationary(
            limits, cd, lambda_w, config["k_min"], config["k_max"], seed
        )
    verification.extend(verify_path_exact(path, limits, cd))
    verification.add(verify_factorization(path, limits, config["k_max"]))

    if config["mode"] == "nonstationary":
        verification.extend(
            verify_nonstationary_joint(
                limits, cd, family,
                replications=config["replications"],
                k_min=config["k_min"],
                steps=config["window"],
                seed=seed,
                alpha=alpha,
            ).checks
        )
    else:
        verification.extend(
            verify_third_noise(
                limits, cd, lambda_w,
                replications=config["replications"],
                k=0,
                window=config["window"],
                seed=seed,
                alpha=alpha,
            ).checks
        )
        if analysis.law == example_law():
            verification.extend(
                verify_mono_projection(
                    limits, cd,
                    replications=config["replications"],
                    k=0,
                    window=config["window"],
                    seed=seed,
                    alpha=alpha,
                ).checks
            )
    return verification


def cmd_analyze(args) -> int:
    law = _load_law(args.law)
    analysis = analyze_law(law, cap=args.cap)
    report = build_report(analysis, seed=args.seed,
                          timestamp=not args.no_timestamp)
    _emit(report, args)
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _load_sim_config(args)
    law = _load_law(config["law_file"])
    analysis = analyze_law(law, cap=args.cap)
    verification = _run_simulation_battery(analysis, config)
    report = build_report(analysis, seed=config["seed"],
                          timestamp=not args.no_timestamp)
    report["verification"] = verification.to_json()
    _emit(report, args)
    return _exit_code(verification)


def cmd_verify(args) -> int:
    config = _load_sim_config(args)
    law = _load_law(config["law_file"])
    analysis = analyze_law(law, cap=args.cap)

    verification = _run_simulation_battery(analysis, config)
    est = float_limit_oracle(law, max_lag=max(64, len(analysis.rd.G)))
    if not est.converged:
        verification.add(Check("float limit oracle converged", "exact", False))
        eta_err = nu_err = float("nan")
    else:
        eta_err = exact_vs_float_sup(analysis.limits.eta, est.eta_est)
        nu_err = exact_vs_float_sup(analysis.limits.nu, est.nu_est)
        verification.add(
            Check("oracle period matches exact p", "exact",
                  est.p_est == analysis.limits.p,
                  note=f"p_est={est.p_est}, p={analysis.limits.p}")
        )
        verification.add(
            Check("oracle eta within 1e-9 of exact", "exact", eta_err < 1e-9,
                  note=f"sup error {eta_err:.3e}")
        )
        verification.add(
            Check("oracle nu within 1e-9 of exact", "exact", nu_err < 1e-9,
                  note=f"sup error {nu_err:.3e}")
        )

    report = build_report(analysis, seed=config["seed"],
                          timestamp=not args.no_timestamp)
    report["verification"] = verification.to_json()
    report["oracle"] = {
        "converged": est.converged,
        "p_est": est.p_est,
        "iterations": est.iterations,
        "eta_sup_error": eta_err,
        "nu_sup_error": nu_err,
    }
    # informational: the literal running average converges like C/n, far
    # slower than the cycle average checked above
    avg = cesaro_average(law, 10_000)
    report["cesaro"] = {
        "n": 10_000,
        "sup_error_vs_nu": exact_vs_float_sup(analysis.limits.nu, avg),
    }
    _emit(report, args)
    return _exit_code(verification)


def cmd_example(args) -> int:
    law = example_law()
    analysis = analyze_law(law)
    config = {
        "mode": "stationary",
        "k_min": -64,
        "k_max": 0,
        "replications": args.replications,
        "seed": args.seed,
        "alpha": 0.001,
        "window": 3,
        "Lambda_W": None,
        "family": None,
        "law_file": "<built-in>",
    }
    verification = _run_simulation_battery(analysis, config)
    report = build_report(analysis, seed=args.seed,
                          timestamp=not args.no_timestamp)
    report["verification"] = verification.to_json()
    _emit(report, args)
    return _exit_code(verification)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": cmd_analyze,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
        "example": cmd_example,
    }
    try:
        return handlers[args.command](args)
    except FinevoError as exc:
        print(f"finevo: error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_INPUT)


if __name__ == "__main__":
    raise SystemExit(main())
