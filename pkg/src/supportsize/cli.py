"""Command-line front end: estimate, simulate, probe, coeffs, theory.

Exit codes: 0 on success, 2 for domain errors (a machine-readable JSON error
record goes to stderr), 3 for I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys

import numpy as np

from . import theory
from .errors import ParameterError, SupportSizeError
from .estimators import (
    EstimatorConfig,
    chao_lee,
    chebyshev_estimate,
    efron_thisted,
    good_toulmin,
    good_turing,
    plug_in,
)
from .ingest import (
    TokenizerConfig,
    build_histogram,
    fingerprint_of,
    read_fingerprint_file,
    resample,
    split_paragraphs,
    tokenize,
)
from .sweep import (
    CSV_COLUMNS,
    ESTIMATORS,
    SweepSpec,
    emit_csv,
    emit_json,
    probe_sample_complexity,
    run_sweep,
)
from .synth import parse_family


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master seed for anything random")
    parser.add_argument("--output", default="-", help="output path, '-' for stdout")
    parser.add_argument("--format", choices=["csv", "json"], default=None,
                        help="output format (default: json for records, csv for tables)")
    parser.add_argument("--config", default=None,
                        help="optional key=value file; keys mirror long flag names")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supportsize",
        description="Support-size estimation from samples or fingerprints, "
                    "simulation sweeps, and lower-bound diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate support size from a token or fingerprint file")
    _add_common(est)
    src = est.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="text file of tokens (whitespace separated)")
    src.add_argument("--fingerprint", help="fingerprint file with 'j h_j' lines")
    est.add_argument("--encoding", default="utf-8")
    est.add_argument("--k", type=float, required=True,
                     help="reciprocal of the smallest possible nonzero mass")
    est.add_argument("--estimator", choices=sorted(ESTIMATORS), default="wy")
    est.add_argument("--c0", type=float, default=0.45)
    est.add_argument("--c1", type=float, default=0.5)
    est.add_argument("--degree", type=int, default=None, help="override the polynomial degree L")
    est.add_argument("--t", type=float, default=1.0, help="extrapolation ratio for et/gtoulmin")
    est.add_argument("--J", type=int, default=10, help="series cutoff for the et estimator")
    est.add_argument("--clamp", action="store_true",
                     help="clamp the estimate into [plug-in count, k]")
    est.add_argument("--round", action="store_true", dest="round_output",
                     help="report the rounded value as the estimate")
    est.add_argument("--no-case-fold", action="store_true")
    est.add_argument("--keep-punctuation", action="store_true")
    est.add_argument("--resample-fraction", type=float, default=None,
                     help="resample this fraction of units with replacement before estimating")
    est.add_argument("--resample-unit", choices=["word", "paragraph"], default="word")

    sim = sub.add_parser(
        "simulate",
        help="sweep estimators over a synthetic family",
        epilog="CSV columns, in order: " + ", ".join(CSV_COLUMNS),
    )
    _add_common(sim)
    sim.add_argument("--family", required=True,
                     help="uniform:k=..., zipf:k=...,alpha=..., or mixture:k=...")
    sim.add_argument("--n-grid", default=None, help="comma-separated sample sizes")
    sim.add_argument("--n-min", type=int, default=None)
    sim.add_argument("--n-max", type=int, default=None)
    sim.add_argument("--n-points", type=int, default=10)
    sim.add_argument("--trials", type=int, default=50)
    sim.add_argument("--estimators", default="wy,plugin,gt")
    sim.add_argument("--sampling", choices=["iid", "poissonized"], default="iid")
    sim.add_argument("--c0", type=float, default=0.45)
    sim.add_argument("--c1", type=float, default=0.5)

    prb = sub.add_parser("probe", help="empirical sample complexity at a target accuracy")
    _add_common(prb)
    prb.add_argument("--family", required=True)
    prb.add_argument("--estimator", choices=sorted(ESTIMATORS), default="wy")
    prb.add_argument("--epsilon", type=float, required=True)
    prb.add_argument("--delta", type=float, default=0.1)
    prb.add_argument("--trials", type=int, default=50)
    prb.add_argument("--ceiling", type=int, default=None)
    prb.add_argument("--sampling", choices=["iid", "poissonized"], default="iid")

    cfs = sub.add_parser("coeffs", help="dump the weight table (j, a_j, g_j) as CSV")
    _add_common(cfs)
    cfs.add_argument("--k", type=float, required=True)
    cfs.add_argument("--n", type=int, required=True)
    cfs.add_argument("--c0", type=float, default=0.45)
    cfs.add_argument("--c1", type=float, default=0.5)
    cfs.add_argument("--degree", type=int, default=None)

    thy = sub.add_parser("theory", help="lower-bound laboratory")
    _add_common(thy)
    thysub = thy.add_subparsers(dest="action", required=True)

    ap = thysub.add_parser("approx", help="best polynomial approximation of 1/x on [a, b]")
    _add_common(ap)
    ap.add_argument("--degree", type=int, required=True)
    ap.add_argument("--a", type=float, required=True)
    ap.add_argument("--b", type=float, required=True)

    pr = thysub.add_parser("priors", help="moment-matched prior pair on {0} U [1+nu, lam]")
    _add_common(pr)
    pr.add_argument("--order", type=int, required=True, help="number of matched moments L")
    pr.add_argument("--nu", type=float, default=0.0)
    pr.add_argument("--lam", type=float, required=True)

    tv = thysub.add_parser("tv", help="certified TV between the pair's Poisson mixtures")
    _add_common(tv)
    tv.add_argument("--order", type=int, required=True)
    tv.add_argument("--nu", type=float, default=0.0)
    tv.add_argument("--lam", type=float, required=True)
    tv.add_argument("--scale", type=float, required=True, help="Poisson scale (plays n/k)")
    tv.add_argument("--cutoff", type=int, default=None)

    ct = thysub.add_parser("certify", help="numeric sample-complexity lower-bound certificate")
    _add_common(ct)
    ct.add_argument("--k", type=float, required=True)
    ct.add_argument("--n", type=float, required=True)
    ct.add_argument("--epsilon", type=float, required=True)
    ct.add_argument("--order", type=int, default=None, help="explicit L (otherwise use the recipe)")
    ct.add_argument("--lam", type=float, default=None)
    ct.add_argument("--nu", type=float, default=None)
    ct.add_argument("--alpha", type=float, default=None)
    ct.add_argument("--c0", type=float, default=1.0, help="recipe degree constant")
    ct.add_argument("--gamma", type=float, default=2.4, help="recipe interval constant")

    mx = thysub.add_parser("maxcheb", help="maximize exp(-beta x) T_L(x) over x >= 1")
    _add_common(mx)
    mx.add_argument("--beta", type=float, required=True)
    mx.add_argument("--degree", type=int, required=True)

    return parser


def _apply_config(ns: argparse.Namespace, argv) -> None:
    """Fold key=value config pairs into the parsed namespace.

    A config value applies only when the matching flag was not given on the
    command line, so explicit flags always win.  Keys mirror long flag names
    (dashes or underscores); keys that do not belong to the invoked command
    are ignored, letting one file serve several subcommands.  Flags argparse
    marks as required must still be given on the command line.
    """
    if not getattr(ns, "config", None):
        return
    tokens = list(sys.argv[1:] if argv is None else argv)
    explicit = {
        tok.split("=", 1)[0][2:].replace("-", "_")
        for tok in tokens
        if isinstance(tok, str) and tok.startswith("--")
    }
    with open(ns.config, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ParameterError(f"{ns.config}:{lineno}: expected key=value, got {line!r}")
            dest = key.strip().replace("-", "_")
            if dest in explicit or not hasattr(ns, dest):
                continue
            setattr(ns, dest, _coerce(val.strip()))


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            continue
    return value


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="ascii", newline=""), True


def _write_records(records: list[dict], ns) -> None:
    fmt = ns.format or "json"
    out, close = _open_output(ns.output)
    try:
        if fmt == "json":
            for rec in records:
                out.write(json.dumps(rec) + "\n")
        else:
            writer = csv.writer(out, lineterminator="\n")
            keys = list(records[0].keys()) if records else []
            writer.writerow(keys)
            for rec in records:
                writer.writerow(["" if rec[c] is None else rec[c] for c in keys])
    finally:
        if close:
            out.close()


def _cmd_estimate(ns) -> int:
    cfg = EstimatorConfig(c0=ns.c0, c1=ns.c1, override_L=ns.degree)
    if ns.fingerprint:
        fp = read_fingerprint_file(ns.fingerprint)
    else:
        with open(ns.input, "rb") as fh:
            tokens = list(tokenize(
                fh,
                TokenizerConfig(case_fold=not ns.no_case_fold,
                                strip_punctuation=not ns.keep_punctuation),
                encoding=ns.encoding,
            ))
        if ns.resample_fraction is not None:
            if ns.resample_unit == "paragraph":
                with open(ns.input, "r", encoding=ns.encoding) as fh:
                    paras = split_paragraphs(fh.read())
                tok_cfg = TokenizerConfig(case_fold=not ns.no_case_fold,
                                          strip_punctuation=not ns.keep_punctuation)
                units = [list(tokenize(p, tok_cfg, encoding=ns.encoding)) for p in paras]
            else:
                units = tokens
            tokens = resample(units, ns.resample_fraction, ns.seed)
        fp = fingerprint_of(build_histogram(tokens))

    name = ns.estimator
    if name == "wy":
        res = chebyshev_estimate(fp, ns.k, cfg)
    elif name == "plugin":
        res = plug_in(fp)
    elif name == "gt":
        res = good_turing(fp)
    elif name == "cl1":
        res = chao_lee(fp, 1)
    elif name == "cl2":
        res = chao_lee(fp, 2)
    elif name == "et":
        res = efron_thisted(fp, t=ns.t, J=ns.J)
    else:
        res = good_toulmin(fp, t=ns.t)

    value = res.value
    if ns.clamp:
        value = min(max(value, float(fp.distinct)), ns.k)
    if ns.round_output:
        value = float(round(value))
    record = {
        "estimator": name,
        "value": value,
        "rounded": round(value),
        "n": fp.n,
        "k": ns.k,
        "L": res.params.get("L"),
        "l": res.params.get("l"),
        "r": res.params.get("r"),
    }
    _write_records([record], ns)
    return 0


def _geometric_grid(n_min: int, n_max: int, points: int) -> list[int]:
    if n_min < 1 or n_max <= n_min or points < 2:
        raise ParameterError("need 1 <= n-min < n-max and n-points >= 2")
    raw = np.geomspace(n_min, n_max, points)
    grid = sorted({int(round(v)) for v in raw})
    return grid


def _cmd_simulate(ns) -> int:
    family = parse_family(ns.family)
    if ns.n_grid:
        grid = sorted({int(v) for v in ns.n_grid.split(",")})
    elif ns.n_min is not None and ns.n_max is not None:
        grid = _geometric_grid(ns.n_min, ns.n_max, ns.n_points)
    else:
        raise ParameterError("give either --n-grid or --n-min/--n-max")
    spec = SweepSpec(
        family=family,
        n_grid=grid,
        trials=ns.trials,
        estimators=tuple(e.strip() for e in ns.estimators.split(",") if e.strip()),
        seed=ns.seed,
        sampling=ns.sampling,
    )
    rows = run_sweep(spec, EstimatorConfig(c0=ns.c0, c1=ns.c1))
    fmt = ns.format or "csv"
    if ns.output in (None, "-"):
        recs = [dataclasses.asdict(r) for r in rows]
        ns.format = fmt
        _write_records(recs, ns)
    elif fmt == "csv":
        emit_csv(rows, ns.output)
    else:
        emit_json(rows, ns.output)
    return 0


def _cmd_probe(ns) -> int:
    family = parse_family(ns.family)
    res = probe_sample_complexity(
        family, ns.estimator, ns.epsilon,
        delta=ns.delta, trials=ns.trials, seed=ns.seed,
        ceiling=ns.ceiling, sampling=ns.sampling,
    )
    rec = dataclasses.asdict(res)
    rec["evaluations"] = rec["evaluations"][-12:]  # keep the record short
    _write_records([rec], ns)
    return 0


def _cmd_coeffs(ns) -> int:
    from .estimators import degree_params
    from .chebyshev import g_table

    cfg = EstimatorConfig(c0=ns.c0, c1=ns.c1, override_L=ns.degree)
    L, l, r = degree_params(ns.k, ns.n, cfg)
    table = g_table(L, l, r, ns.n)
    out, close = _open_output(ns.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["j", "a_j", "g_j"])
        for j in range(L + 1):
            writer.writerow([j, repr(float(table.a[j])), repr(float(table.g[j]))])
    finally:
        if close:
            out.close()
    return 0


def _cmd_theory(ns) -> int:
    if ns.action == "approx":
        res = theory.best_inv_approx(ns.degree, ns.a, ns.b)
        rec = {
            "degree": res.degree, "a": res.a, "b": res.b,
            "error": res.error,
            "closed_form_error": theory.closed_form_error(res.degree + 1, res.a, res.b),
            "coeffs": res.coeffs.tolist(),
            "extrema": res.extrema.tolist(),
        }
    elif ns.action == "priors":
        pair = theory.construct_prior_pair(ns.order, ns.nu, ns.lam)
        rec = {
            "L": pair.L, "nu": pair.nu, "lam": pair.lam, "gap": pair.gap,
            "atoms_u": pair.atoms_u.tolist(), "weights_u": pair.weights_u.tolist(),
            "atoms_u_prime": pair.atoms_v.tolist(), "weights_u_prime": pair.weights_v.tolist(),
        }
    elif ns.action == "tv":
        pair = theory.construct_prior_pair(ns.order, ns.nu, ns.lam)
        est = theory.tv_exact(pair, ns.scale, ns.cutoff)
        bound = theory.tv_bound(ns.scale * ns.lam, ns.order)
        rec = {
            "L": ns.order, "nu": ns.nu, "lam": ns.lam, "scale": ns.scale,
            "tv_lower": est.lower, "tv_upper": est.upper,
            "tail_bound": est.tail_bound, "cutoff": est.cutoff,
            "bound_full": bound.full, "bound_simplified": bound.simplified,
            "bound": bound.value,
        }
    elif ns.action == "certify":
        if ns.order is None:
            params = theory.lecam_recipe(ns.k, ns.epsilon, c0=ns.c0, gamma=ns.gamma)
        else:
            if None in (ns.lam, ns.nu, ns.alpha):
                raise ParameterError("--order requires --lam, --nu and --alpha")
            params = {"L": ns.order, "lam": ns.lam, "nu": ns.nu, "alpha": ns.alpha}
        cert = theory.lecam_certificate(
            ns.k, ns.n, ns.epsilon,
            L=params["L"], lam=params["lam"], nu=params["nu"], alpha=params["alpha"],
        )
        rec = {
            "k": ns.k, "n": ns.n, "epsilon": ns.epsilon, **params,
            "valid": cert.valid, "lhs": cert.lhs, "gap": cert.gap,
            "implied_epsilon": cert.implied_epsilon, "meets_target": cert.meets_target,
            "terms": list(cert.terms),
        }
    else:  # maxcheb
        res = theory.max_exp_cheby(ns.beta, ns.degree)
        rec = {
            "beta": ns.beta, "L": ns.degree,
            "x_star": res.x_star, "value": res.value,
            "log_value": res.log_value, "residual": res.residual,
        }
    _write_records([rec], ns)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config(ns, argv)
        if ns.command == "estimate":
            return _cmd_estimate(ns)
        if ns.command == "simulate":
            return _cmd_simulate(ns)
        if ns.command == "probe":
            return _cmd_probe(ns)
        if ns.command == "coeffs":
            return _cmd_coeffs(ns)
        return _cmd_theory(ns)
    except SupportSizeError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except OSError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc),
                   "path": getattr(exc, "filename", None)}, sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
