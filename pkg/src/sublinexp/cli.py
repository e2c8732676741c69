"""Command-line surface: config ingestion, subcommand dispatch, report emission.

A run is described by a single JSON config (versionable artifact) plus a
few flag overrides.  Every subcommand writes a CSV report with a JSON
mirror under ``--out`` and prints a one-line summary.  Exit statuses:
0 success, 1 validation error, 2 budget error, 3 property violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, Optional

from .ambiguity import AmbiguitySet, sublinear_expect, validate_ambiguity_set
from .counterexamples import (
    ParametricFamily,
    exm3_report,
    heavy_lln_lower_bound,
    heavy_lln_value,
)
from .errors import EngineError, InputError, PropertyViolation
from .functions import TestFunction, abs_excess, clamp, constant, piecewise_linear, psi_fn, tent
from .inequalities import VIOLATED, capacity_product_identity, ottaviani_check
from .lattice_dp import (
    DEFAULT_STATE_BUDGET,
    PathEvent,
    capacity,
    policy_value,
    robust_value,
)
from .lln import lln_sweep, maximal_dist_value, peng_condition_report, chebyshev_bound_check
from .montecarlo import SimConfig, constant_policy, simulate
from .oracle import DEFAULT_ENUMERATION_BUDGET, brute_force_value
from .reports import write_report

_TOP_KEYS = {
    "lattice",
    "generators",
    "family",
    "function",
    "horizons",
    "n",
    "n_max",
    "event",
    "side",
    "alpha",
    "c",
    "eps",
    "threshold",
    "seed",
    "paths",
    "policy",
    "lambdas",
    "ms",
    "K",
    "budgets",
    "out",
}


def _check_keys(obj: Dict, allowed, where: str):
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise InputError("BAD_CONFIG", f"unknown key {unknown[0]!r} in {where}")


def load_config(path: Optional[str]) -> Dict:
    if path is None:
        return {}
    try:
        with open(path) as handle:
            cfg = json.load(handle)
    except OSError as e:
        raise InputError("BAD_CONFIG", f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise InputError("BAD_CONFIG", f"config is not valid JSON: {e}") from None
    if not isinstance(cfg, dict):
        raise InputError("BAD_CONFIG", "config root must be a JSON object")
    _check_keys(cfg, _TOP_KEYS, "config")
    if "lattice" in cfg:
        _check_keys(cfg["lattice"], {"step", "origin"}, "config.lattice")
    if "family" in cfg:
        _check_keys(cfg["family"], {"name", "truncation"}, "config.family")
    if "function" in cfg:
        _check_keys(cfg["function"], {"kind", "params"}, "config.function")
    if "event" in cfg:
        _check_keys(cfg["event"], {"kind", "threshold", "from_index"}, "config.event")
    if "budgets" in cfg:
        _check_keys(cfg["budgets"], {"states", "enumeration"}, "config.budgets")
    return cfg


def build_set(cfg: Dict) -> AmbiguitySet:
    if "generators" not in cfg:
        raise InputError("BAD_CONFIG", "config key 'generators' is required here")
    lattice = cfg.get("lattice", {})
    return validate_ambiguity_set(
        {
            "step": lattice.get("step", 1),
            "origin": lattice.get("origin", 0),
            "generators": cfg["generators"],
        }
    )


def build_family(cfg: Dict) -> ParametricFamily:
    fam = cfg.get("family")
    if not fam:
        raise InputError("BAD_CONFIG", "config key 'family' is required here")
    if "name" not in fam or "truncation" not in fam:
        raise InputError("BAD_CONFIG", "config.family needs 'name' and 'truncation'")
    return ParametricFamily(str(fam["name"]).upper(), int(fam["truncation"]))


def build_source(cfg: Dict):
    if "family" in cfg:
        if "generators" in cfg:
            raise InputError(
                "BAD_CONFIG", "config keys 'family' and 'generators' are exclusive"
            )
        return build_family(cfg)
    return build_set(cfg)


def build_function(cfg: Dict) -> TestFunction:
    spec = cfg.get("function")
    if not spec:
        raise InputError("BAD_CONFIG", "config key 'function' is required here")
    kind = spec.get("kind")
    params = spec.get("params", {})
    try:
        if kind == "pwl":
            return piecewise_linear([tuple(p) for p in params["breakpoints"]])
        if kind == "tent":
            return tent(params["center"], params["halfwidth"])
        if kind == "clamp":
            return clamp(params["n"])
        if kind == "psi":
            return psi_fn(params["n"])
        if kind == "abs_excess":
            return abs_excess(params["lambda"])
        if kind == "constant":
            return constant(params["value"])
        if kind in ("abs", "square", "identity"):
            return TestFunction(kind)
    except KeyError as e:
        raise InputError(
            "BAD_CONFIG", f"config.function.params missing {e.args[0]!r} for kind {kind!r}"
        ) from None
    raise InputError("BAD_CONFIG", f"config.function.kind {kind!r} is not recognized")


def build_event(cfg: Dict) -> PathEvent:
    spec = cfg.get("event")
    if not spec:
        raise InputError("BAD_CONFIG", "config key 'event' is required here")
    if "kind" not in spec or "threshold" not in spec:
        raise InputError("BAD_CONFIG", "config.event needs 'kind' and 'threshold'")
    return PathEvent(spec["kind"], spec["threshold"], spec.get("from_index"))


def _state_budget(cfg: Dict) -> int:
    return int(cfg.get("budgets", {}).get("states", DEFAULT_STATE_BUDGET))


def _enum_budget(cfg: Dict) -> int:
    return int(cfg.get("budgets", {}).get("enumeration", DEFAULT_ENUMERATION_BUDGET))


def _require(cfg: Dict, key: str, what: str):
    if cfg.get(key) is None:
        raise InputError("BAD_CONFIG", f"config key {key!r} is required for {what}")
    return cfg[key]


def _out_dir(cfg: Dict) -> Path:
    return Path(cfg.get("out") or ".")


def _say(args, text: str):
    if not args.quiet:
        print(text)


# -- subcommand handlers -----------------------------------------------


def _cmd_eval(cfg, args) -> int:
    set_ = build_set(cfg)
    f = build_function(cfg)
    sv = sublinear_expect(set_, f)
    write_report(
        _out_dir(cfg),
        "eval",
        ["upper", "lower", "argmax_upper", "argmin_lower"],
        [[sv.upper, sv.lower, sv.argmax_upper, sv.argmin_lower]],
        {"set": set_.describe(), "function": f.describe()},
    )
    _say(args, f"eval: upper {sv.upper:.12g} lower {sv.lower:.12g}")
    return 0


def _cmd_capacity(cfg, args) -> int:
    set_ = build_set(cfg)
    n = int(_require(cfg, "n", "capacity"))
    event = build_event(cfg)
    side = str(cfg.get("side", "UPPER")).upper()
    value = capacity(set_, n, event, side, state_budget=_state_budget(cfg))
    write_report(
        _out_dir(cfg),
        "capacity",
        ["n", "event", "side", "value"],
        [[n, event.describe(), side, value]],
        {"set": set_.describe()},
    )
    _say(args, f"capacity: {side} {event.describe()} at n={n} -> {value:.12g}")
    return 0


def _cmd_lln_sweep(cfg, args) -> int:
    set_ = build_set(cfg)
    f = build_function(cfg)
    horizons = [int(n) for n in _require(cfg, "horizons", "lln-sweep")]
    report = lln_sweep(set_, f, horizons, state_budget=_state_budget(cfg))
    write_report(
        _out_dir(cfg),
        "lln_sweep",
        ["n", "dp_value", "limit_value", "abs_error"],
        [[r.n, r.dp_value, r.limit_value, r.abs_error] for r in report.rows],
        {"set": report.set_description, "function": report.function_description},
    )
    last = report.rows[-1]
    _say(args, f"lln-sweep: abs_error at n={last.n} is {last.abs_error:.6g}")
    return 0


def _cmd_conditions(cfg, args) -> int:
    source = build_source(cfg)
    n_max = int(_require(cfg, "n_max", "conditions"))
    report = peng_condition_report(source, n_max)
    meta = {
        "source": report.source_description,
        "condition_i_trend": report.condition_i_trend,
        "mu_upper_limit": report.mu_upper_limit,
        "mu_lower_limit": report.mu_lower_limit,
        "warnings": sorted(set(report.warnings)),
    }
    write_report(
        _out_dir(cfg),
        "conditions",
        ["n", "nV_tail", "psi_expect", "mu_lower_n", "mu_upper_n"],
        [[r.n, r.nV_tail, r.psi_expect, r.mu_lower_n, r.mu_upper_n] for r in report.rows],
        meta,
    )
    _say(args, f"conditions: {report.condition_i_trend}")
    return 0


def _cmd_ottaviani(cfg, args) -> int:
    set_ = build_set(cfg)
    n = int(_require(cfg, "n", "ottaviani"))
    alpha = float(_require(cfg, "alpha", "ottaviani"))
    c = float(_require(cfg, "c", "ottaviani"))
    report = ottaviani_check(set_, n, alpha, c, state_budget=_state_budget(cfg))
    write_report(
        _out_dir(cfg),
        "ottaviani",
        ["premise_value", "c", "lhs", "rhs", "status"],
        [[report.premise_value, report.c, report.lhs, report.rhs, report.status]],
        {"set": set_.describe(), "n": n, "alpha": alpha},
    )
    _say(args, f"ottaviani: {report.status} (lhs {report.lhs:.6g}, rhs {report.rhs:.6g})")
    if report.status == VIOLATED:
        raise PropertyViolation(
            "OTTAVIANI_VIOLATED", "maximal inequality failed on a valid instance"
        )
    return 0


def _cmd_product_identity(cfg, args) -> int:
    set_ = build_set(cfg)
    n = int(_require(cfg, "n", "product-identity"))
    threshold = float(_require(cfg, "threshold", "product-identity"))
    report = capacity_product_identity(set_, n, threshold, state_budget=_state_budget(cfg))
    write_report(
        _out_dir(cfg),
        "product_identity",
        ["lhs", "rhs", "delta"],
        [[report.lhs, report.rhs, report.delta]],
        {"set": set_.describe(), "n": n, "threshold": threshold},
    )
    _say(args, f"product-identity: delta {report.delta:.3g}")
    if report.delta > 1e-9:
        raise PropertyViolation(
            "PRODUCT_IDENTITY_MISMATCH", f"delta {report.delta} exceeds 1e-9"
        )
    return 0


def _cmd_chebyshev(cfg, args) -> int:
    set_ = build_set(cfg)
    n = int(_require(cfg, "n", "chebyshev"))
    eps = float(_require(cfg, "eps", "chebyshev"))
    check = chebyshev_bound_check(set_, n, eps, state_budget=_state_budget(cfg))
    write_report(
        _out_dir(cfg),
        "chebyshev",
        ["lhs", "rhs", "holds"],
        [[check.lhs, check.rhs, check.holds]],
        {"set": set_.describe(), "n": n, "eps": eps},
    )
    _say(args, f"chebyshev: lhs {check.lhs:.6g} <= rhs {check.rhs:.6g}: {check.holds}")
    if not check.holds:
        raise PropertyViolation("CHEBYSHEV_VIOLATED", "tail bound failed")
    return 0


def _cmd_counterexample(cfg, args) -> int:
    which = args.which
    if which == "exm3":
        truncation = int(args.K or cfg.get("K") or cfg.get("family", {}).get("truncation", 10_000))
        lambdas = [float(x) for x in cfg.get("lambdas", [10, 20, 50, 100])]
        ms = [int(x) for x in cfg.get("ms", [10, 20, 50, 100])]
        report = exm3_report(truncation, lambdas, ms)
        meta = {"truncation": truncation, "warnings": sorted(set(report.warnings))}
        write_report(
            _out_dir(cfg),
            "exm3_excess",
            ["lambda", "value"],
            [[lam, v] for lam, v in report.lambda_rows],
            meta,
        )
        write_report(
            _out_dir(cfg),
            "exm3_tail",
            ["m", "psi_expect", "m_V_tail"],
            [[m, p, t] for m, p, t in report.m_rows],
            meta,
        )
        lam, v = report.lambda_rows[-1]
        _say(args, f"counterexample exm3: E[(|X|-{lam:g})^+] = {v:.6g}")
        return 0
    # HEAVY
    K = int(args.K or cfg.get("K") or cfg.get("family", {}).get("truncation", 200))
    n = int(args.n or cfg.get("n") or 20)
    value = heavy_lln_value(K, n, state_budget=_state_budget(cfg))
    bound = heavy_lln_lower_bound(K, n)
    limit = maximal_dist_value(
        piecewise_linear([(0.0, 1.0), (1.0, 0.0)]), 1.0, 1.0
    )
    write_report(
        _out_dir(cfg),
        "heavy",
        ["K", "n", "value", "lower_bound"],
        [[K, n, value, bound]],
        {"maximal_distribution_value": limit},
    )
    _say(
        args,
        f"counterexample heavy: value {value:.6g} >= {bound:.6g}, "
        f"maximal-distribution prediction {limit:g}",
    )
    return 0


def _cmd_simulate(cfg, args) -> int:
    set_ = build_set(cfg)
    f = build_function(cfg)
    n = int(args.n or _require(cfg, "n", "simulate"))
    paths = int(_require(cfg, "paths", "simulate"))
    seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
    policy_spec = cfg.get("policy", "robust")
    if policy_spec == "robust":
        policy = robust_value(set_, n, f, state_budget=_state_budget(cfg)).policy
    elif isinstance(policy_spec, dict) and "constant" in policy_spec:
        policy = constant_policy(set_, n, int(policy_spec["constant"]))
    else:
        raise InputError(
            "BAD_CONFIG", "config key 'policy' must be \"robust\" or {\"constant\": index}"
        )
    result = simulate(SimConfig(policy, set_, n, paths, seed), f)
    exact = policy_value(set_, policy, n, f, state_budget=_state_budget(cfg))
    write_report(
        _out_dir(cfg),
        "simulate",
        ["estimate", "stderr", "paths", "policy_value"],
        [[result.estimate, result.stderr, result.paths, exact]],
        {"set": set_.describe(), "function": f.describe(), "n": n, "seed": seed},
    )
    _say(
        args,
        f"simulate: estimate {result.estimate:.6g} +/- {result.stderr:.2g} "
        f"(exact {exact:.6g})",
    )
    return 0


def _cmd_oracle(cfg, args) -> int:
    set_ = build_set(cfg)
    f = build_function(cfg)
    n = int(args.n or _require(cfg, "n", "oracle"))
    oracle_value = brute_force_value(set_, n, f, budget=_enum_budget(cfg))
    dp = robust_value(set_, n, f, state_budget=_state_budget(cfg)).value
    delta = abs(oracle_value - dp)
    write_report(
        _out_dir(cfg),
        "oracle",
        ["n", "oracle_value", "dp_value", "delta"],
        [[n, oracle_value, dp, delta]],
        {"set": set_.describe(), "function": f.describe()},
    )
    _say(args, f"oracle: brute force {oracle_value:.12g}, dp {dp:.12g}, delta {delta:.3g}")
    if delta > 1e-9:
        raise PropertyViolation("ORACLE_MISMATCH", f"delta {delta} exceeds 1e-9")
    return 0


_HANDLERS = {
    "eval": _cmd_eval,
    "capacity": _cmd_capacity,
    "lln-sweep": _cmd_lln_sweep,
    "conditions": _cmd_conditions,
    "ottaviani": _cmd_ottaviani,
    "product-identity": _cmd_product_identity,
    "chebyshev": _cmd_chebyshev,
    "counterexample": _cmd_counterexample,
    "simulate": _cmd_simulate,
    "oracle": _cmd_oracle,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sublinexp",
        description="Exact engine for upper/lower expectations on finite ambiguity sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name)
        if name == "counterexample":
            p.add_argument("which", choices=["exm3", "heavy"])
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", default=None, help="output directory for reports")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--K", type=int, default=None)
        p.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.out is not None:
            cfg["out"] = args.out
        if args.n is not None:
            cfg["n"] = args.n
        if args.seed is not None:
            cfg["seed"] = args.seed
        return _HANDLERS[args.command](cfg, args)
    except EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_status


if __name__ == "__main__":
    sys.exit(main())
