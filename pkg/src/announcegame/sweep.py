"""Single-parameter sweeps emitting one CSV row per (grid point, target)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import Variant, all_equilibria
from .closed_form import Delta_m, EquilibriumResult, Gamma_m, symmetric_mne
from .errors import AssumptionViolated, DegenerateA, Infeasible, NoAdmissibleRoot
from .extensions import (NonKycParams, TieBreakParams, nonkyc_beta, tiebreak_alpha,
                         tiebreak_beta, tiebreak_dEA_dZ)
from .params import GameParams, check_assumptions

PARAMS = ("Z", "S", "B", "T", "C", "V", "delta", "f_p", "f_n", "n", "D", "V_max", "V_star", "m")
INT_PARAMS = ("n", "m")
TARGETS = ("loss_worst", "loss_best", "beta", "equilibrium_count", "Gamma_m", "Delta_m",
           "beta_nonkyc", "tiebreak_alpha", "tiebreak_dEA_dZ")
COLUMNS = ("param", "x", "target", "y", "violates_assumptions")


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"
    targets: tuple[str, ...] = ("loss_worst",)
    m: int | None = None  # index for Gamma_m / Delta_m when m is not swept

    def __post_init__(self):
        if self.param not in PARAMS:
            raise AssumptionViolated("unknown_param", f"{self.param!r} not in {PARAMS}")
        bad = [t for t in self.targets if t not in TARGETS]
        if bad or not self.targets:
            raise AssumptionViolated("unknown_target", f"{bad} not in {TARGETS}")
        if self.steps < 2:
            raise AssumptionViolated("steps_lt_2", str(self.steps))
        if not self.start < self.stop:
            raise AssumptionViolated("start_ge_stop", f"{self.start} >= {self.stop}")
        if self.scale not in ("linear", "log"):
            raise AssumptionViolated("unknown_scale", repr(self.scale))
        if self.scale == "log" and self.start <= 0:
            raise AssumptionViolated("log_scale_nonpositive", str(self.start))

    def grid(self) -> list[float]:
        if self.scale == "log":
            xs = np.geomspace(self.start, self.stop, self.steps)
        else:
            xs = np.linspace(self.start, self.stop, self.steps)
        if self.param in INT_PARAMS:
            return [int(round(x)) for x in xs]
        return [float(x) for x in xs]

    @classmethod
    def from_config(cls, d: dict) -> "SweepSpec":
        t = d.get("target", d.get("targets", "loss_worst"))
        targets = (t,) if isinstance(t, str) else tuple(t)
        try:
            return cls(d["param"], float(d["from"]), float(d["to"]), int(d["steps"]),
                       d.get("scale", "linear"), targets, d.get("m"))
        except KeyError as exc:
            raise AssumptionViolated("missing_key", f"sweep needs {exc}") from exc


@dataclass
class SweepPoint:
    params: GameParams
    variant: Variant
    m: int | None
    flag: str = ""


def _point(p: GameParams, variant: Variant, spec: SweepSpec, x) -> SweepPoint:
    name = spec.param
    m = spec.m
    if name == "m":
        m = x
    elif name == "D":
        variant = Variant("tie_break", tie_break=TieBreakParams(x))
    elif name in ("V_max", "V_star"):
        nk = variant.non_kyc or NonKycParams(0.0, 100.0, 50.0)
        vals = {"V_min": nk.V_min, "V_max": nk.V_max, "V_star": nk.V_star, name: x}
        try:
            variant = Variant("non_kyc", non_kyc=NonKycParams(**vals))
        except ValueError:
            return SweepPoint(p, variant, m, "invalid_variant")
    else:
        p = p.with_(**{name: x})
    return SweepPoint(p, variant, m, check_assumptions(p) or "")


def evaluate(target: str, pt: SweepPoint) -> float:
    """Target value at one point; nan where it is undefined."""
    p, v = pt.params, pt.variant
    try:
        if target in ("loss_worst", "beta"):
            w = _worst(p, v)
            return w.loss if target == "loss_worst" else w.beta
        if target in ("loss_best", "equilibrium_count"):
            res = all_equilibria(p, v, include_asym=False)
            if target == "equilibrium_count":
                return float(len(res))
            return min((r.loss for r in res), default=math.nan)
        if target in ("Gamma_m", "Delta_m"):
            m = pt.m if pt.m is not None else p.n
            return (Gamma_m if target == "Gamma_m" else Delta_m)(p.A, m)
        if target == "beta_nonkyc":
            nk = v.non_kyc or NonKycParams(0.0, 100.0, 50.0)
            return nonkyc_beta(p, nk)[1]
        if target == "tiebreak_alpha":
            return tiebreak_alpha(p, _tb(v), tiebreak_beta(p))
        if target == "tiebreak_dEA_dZ":
            return tiebreak_dEA_dZ(p, _tb(v))[0]
    except AssumptionViolated:
        raise
    except (Infeasible, ArithmeticError, NoAdmissibleRoot, DegenerateA, ValueError):
        return math.nan
    raise ValueError(target)


def _worst(p: GameParams, v: Variant) -> EquilibriumResult:
    """The n-NE for kyc with n > 1 (the worst symmetric one); otherwise the
    highest-loss result of the variant."""
    if v.kind == "kyc" and p.n > 1:
        return symmetric_mne(p, p.n, p.n)
    res = all_equilibria(p, v, include_asym=False)
    return max(res, key=lambda r: r.loss)


def _tb(v: Variant) -> TieBreakParams:
    if v.tie_break is None:
        raise AssumptionViolated("missing_key", "tie-break targets need variant D")
    return v.tie_break


def run_sweep(p: GameParams, spec: SweepSpec, variant: Variant | None = None) -> list[dict]:
    """Rows of COLUMNS. Points that violate an assumption are kept and flagged."""
    variant = variant or Variant()
    rows = []
    for x in spec.grid():
        pt = _point(p, variant, spec, x)
        for t in spec.targets:
            y = math.nan if pt.flag else evaluate(t, pt)
            rows.append({"param": spec.param, "x": x, "target": t, "y": y,
                         "violates_assumptions": pt.flag})
    return rows
