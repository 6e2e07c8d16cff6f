"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input or assumption error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .analysis import Variant, all_equilibria, loss_minimal
from .asymmetric import SWEEP_COLUMNS, sweep_k
from .errors import Infeasible, InvalidProfile
from .io import atomic_write_text, csv_text, fmt, write_csv, write_json
from .model import StrategyProfile
from .montecarlo import compare_to_theory, simulate
from .oracle import DEFAULT_EPS, best_response_check, is_equilibrium
from .params import GameParams, load_config, params_from_config, validate_params
from .sweep import COLUMNS, SweepSpec, run_sweep

log = logging.getLogger("announcegame")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _config(path: str) -> tuple[dict, GameParams, Variant]:
    try:
        cfg = load_config(path)
    except OSError as exc:
        raise InputError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    p = validate_params(params_from_config(cfg))
    return cfg, p, Variant.from_config(cfg.get("variant"))


def _profile(path: str) -> StrategyProfile:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read profile: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"profile is not valid JSON: {exc}") from exc
    return StrategyProfile.from_dict(data)


def _match(p: GameParams, s: StrategyProfile) -> None:
    if s.n != p.n:
        raise InvalidProfile(f"profile has {s.n} validators, config says n={p.n}")


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# -- equilibria ---------------------------------------------------------------

EQ_COLUMNS = ("index", "kind", "m", "k", "beta", "alphas", "gammas", "loss",
              "min_slack", "oracle", "loss_minimal")


def _alphas(r) -> str:
    return ";".join(fmt(a) for a in r.profile.alphas)


def cmd_equilibria(args) -> int:
    _, p, variant = _config(args.config)
    results = all_equilibria(p, variant, include_asym=not args.no_asym)
    best = loss_minimal(results)
    rows = []
    for i, r in enumerate(results):
        ok = r.verify(args.eps)
        slacks = [s for _, _, s in r.feasibility]
        rows.append({
            "index": i, "kind": r.kind, "m": r.m, "k": r.extra.get("k"),
            "beta": r.beta, "alphas": _alphas(r),
            "gammas": ";".join(fmt(v.gamma) for v in r.profile.validators),
            "loss": r.loss, "min_slack": min(slacks) if slacks else None,
            "oracle": "pass" if ok else "FAIL", "loss_minimal": i == best,
        })
        if not ok:
            log.warning("equilibrium %d (%s) does not pass the oracle at eps=%g", i, r.kind, args.eps)
    print(f"n={p.n} variant={variant.kind} A={fmt(p.A)} R={fmt(p.R)} equilibria={len(rows)}")
    print(f"{'#':>2} {'kind':<20} {'m':>3} {'k':>3} {'beta':>14} {'loss':>14} "
          f"{'min_slack':>12} {'oracle':>6}")
    for r in rows:
        mark = " *" if r["loss_minimal"] else ""
        print(f"{r['index']:>2} {r['kind']:<20} {fmt(r['m']):>3} {fmt(r['k']):>3} "
              f"{r['beta']:>14.9f} {r['loss']:>14.9f} {fmt(r['min_slack']):>12} "
              f"{r['oracle']:>6}{mark}")
    if args.out:
        if args.out.endswith(".csv"):
            write_csv(args.out, EQ_COLUMNS, rows)
        else:
            write_json(args.out, {
                "params": p.to_dict(), "variant": variant.to_dict(), "eps": args.eps,
                "loss_minimal": best,
                "equilibria": [dict(r.to_dict(), oracle=row["oracle"])
                               for r, row in zip(results, rows)],
            })
    return EXIT_OK


# -- sweep --------------------------------------------------------------------

def cmd_sweep(args) -> int:
    cfg, p, variant = _config(args.config)
    sw = dict(cfg.get("sweep") or {})
    for key, val in (("param", args.param), ("from", args.from_), ("to", args.to),
                     ("steps", args.steps), ("scale", args.scale), ("m", args.m)):
        if val is not None:
            sw[key] = val
    if args.target:
        sw["target"] = args.target
    spec = SweepSpec.from_config(sw)
    rows = run_sweep(p, spec, variant)
    flagged = sum(1 for r in rows if r["violates_assumptions"])
    if flagged:
        log.warning("%d of %d rows violate an assumption", flagged, len(rows))
    _emit(csv_text(COLUMNS, rows), args.out)
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def cmd_verify(args) -> int:
    _, p, _ = _config(args.config)
    s = _profile(args.profile)
    _match(p, s)
    reports = best_response_check(p, s, args.eps)
    ok = is_equilibrium(reports, args.eps)
    for r in reports:
        utils = " ".join(f"{a}={fmt(u)}" for a, u in r.action_utilities.items())
        status = "ok" if r.passes(args.eps) else "DEVIATES"
        print(f"{r.player:<14} {status:<8} spread={fmt(r.support_spread)} "
              f"gain={fmt(r.best_deviation_gain)} {utils}")
    print("epsilon-equilibrium" if ok else "NOT an epsilon-equilibrium", f"(eps={args.eps:g})")
    return EXIT_OK if ok else EXIT_FAIL


# -- simulate -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    _, p, _ = _config(args.config)
    s = _profile(args.profile)
    _match(p, s)
    if args.rounds < 1:
        raise InputError("--rounds must be >= 1")
    if args.seed < 0:
        raise InputError("--seed must be non-negative")
    rep = simulate(p, s, args.rounds, args.seed, workers=args.workers)
    cmp = compare_to_theory(rep, p, s)
    print(f"rounds={rep.rounds} seed={rep.seed}")
    print(f"{'statistic':<32} {'observed':>14} {'theory':>14} {'z':>8}")
    obs = {"aggregator": rep.mean_utility_aggregator, "loss": rep.empirical_loss_per_round,
           "attack_rate": rep.attack_rate, "detection_rate": rep.detection_rate}
    for i, (m, _) in enumerate(rep.mean_utility_validators):
        obs[f"validator[{i}]"] = m
    for k, z in cmp.z_scores.items():
        o = obs.get(k)
        if o is None:
            player, act = k.rsplit(".", 1)
            o = rep.action_means[player][act][0]
        print(f"{k:<32} {o:>14.6f} {cmp.targets[k]:>14.6f} {z:>8.2f}")
    print("compare_to_theory:", "pass" if cmp.passed else
          ("inconclusive" if cmp.inconclusive else "FAIL " + ",".join(cmp.failures)))
    if args.out:
        atomic_write_text(args.out, rep.to_json())
    return EXIT_OK


# -- asym ---------------------------------------------------------------------

def cmd_asym(args) -> int:
    cfg, p, _ = _config(args.config)
    m = args.m if args.m is not None else cfg.get("sweep", {}).get("m")
    if m is None:
        raise InputError("asym needs --m")
    lo = args.from_ if args.from_ is not None else 0.05
    hi = args.to if args.to is not None else 0.95
    steps = args.steps if args.steps is not None else 50
    if steps < 2 or not lo < hi:
        raise InputError("need steps >= 2 and from < to")
    grid = np.linspace(lo, hi, steps)
    rows, errors = sweep_k(p, p.n, int(m), grid, via=args.via)
    for (k, R), msg in sorted(errors.items()):
        log.info("k=%d R=%s: %s", k, fmt(R), msg)
    _emit(csv_text(SWEEP_COLUMNS, rows), args.out)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="announcegame", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, profile=False):
        sp.add_argument("--config", required=True)
        sp.add_argument("--out")
        if profile:
            sp.add_argument("--profile", required=True)

    sp = sub.add_parser("equilibria", help="list all equilibria with oracle status")
    common(sp)
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    sp.add_argument("--no-asym", action="store_true", help="skip the asymmetric search")
    sp.set_defaults(func=cmd_equilibria)

    sp = sub.add_parser("sweep", help="single-parameter sweep to CSV")
    common(sp)
    sp.add_argument("--param")
    sp.add_argument("--from", dest="from_", type=float)
    sp.add_argument("--to", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--scale", choices=("linear", "log"))
    sp.add_argument("--target", action="append")
    sp.add_argument("--m", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="best-response check of a profile")
    common(sp, profile=True)
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("simulate", help="Monte Carlo of a profile")
    common(sp, profile=True)
    sp.add_argument("--rounds", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("asym", help="asymmetric roots over an R grid to CSV")
    common(sp)
    sp.add_argument("--m", type=int)
    sp.add_argument("--from", dest="from_", type=float)
    sp.add_argument("--to", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--via", choices=("f_p", "T"), default="f_p")
    sp.set_defaults(func=cmd_asym)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValueError, Infeasible, ArithmeticError) as exc:
        # AssumptionViolated, InvalidProfile and BadGroupSizes are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
