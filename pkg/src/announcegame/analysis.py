"""Equilibrium enumeration across variants, shared by the CLI and the sweeps."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .asymmetric import AsymSolution, solve_asymmetric
from .closed_form import (EquilibriumResult, enumerate_symmetric_equilibria,
                          single_validator_equilibria)
from .errors import AssumptionViolated
from .extensions import (NonKycParams, TieBreakParams, nonkyc_two_validator_equilibrium,
                         tiebreak_profile)
from .oracle import system_loss
from .params import GameParams, validate_params

log = logging.getLogger(__name__)

VARIANTS = ("kyc", "non_kyc", "tie_break")
ASYM_MAX_N = 15


@dataclass(frozen=True)
class Variant:
    kind: str = "kyc"
    non_kyc: NonKycParams | None = None
    tie_break: TieBreakParams | None = None

    @classmethod
    def from_config(cls, cfg: dict | str | None) -> "Variant":
        if cfg is None:
            return cls()
        if isinstance(cfg, str):
            cfg = {"kind": cfg}
        kind = cfg.get("kind", "kyc")
        if kind not in VARIANTS:
            raise AssumptionViolated("unknown_variant", repr(kind))
        try:
            if kind == "non_kyc":
                return cls(kind, non_kyc=NonKycParams(float(cfg.get("V_min", 0.0)),
                                                      float(cfg["V_max"]), float(cfg["V_star"])))
            if kind == "tie_break":
                return cls(kind, tie_break=TieBreakParams(float(cfg["D"])))
        except KeyError as exc:
            raise AssumptionViolated("missing_key", f"variant {kind} needs {exc}") from exc
        except ValueError as exc:
            raise AssumptionViolated("invalid_variant", str(exc)) from exc
        return cls(kind)

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.non_kyc:
            d.update(V_min=self.non_kyc.V_min, V_max=self.non_kyc.V_max,
                     V_star=self.non_kyc.V_star)
        if self.tie_break:
            d.update(D=self.tie_break.D)
        return d


def asym_as_result(s: AsymSolution) -> EquilibriumResult:
    return EquilibriumResult(
        "asym", s.profile(), s.params, m=s.m, feasibility=list(s.feasibility), loss=s.loss,
        extra={"k": s.k, "alpha1": s.alpha1, "alpha2": s.alpha2, "branch": s.branch,
               "residual_max": s.residual_max})


def asymmetric_equilibria(p: GameParams, max_n: int = ASYM_MAX_N) -> list[EquilibriumResult]:
    """Every feasible asymmetric equilibrium, all (m, k) with 1 <= k <= m/2."""
    if p.n < 2 or p.n > max_n:
        if p.n > max_n:
            log.warning("skipping asymmetric search for n=%d > %d", p.n, max_n)
        return []
    out = []
    for m in range(2, p.n + 1):
        for k in range(1, m // 2 + 1):
            out.extend(asym_as_result(s) for s in solve_asymmetric(p, p.n, m, k))
    return out


def all_equilibria(p: GameParams, variant: Variant | None = None, *,
                   include_asym: bool = True) -> list[EquilibriumResult]:
    """All equilibria the library can construct for ``(p, variant)``."""
    variant = variant or Variant()
    validate_params(p)
    if variant.kind == "non_kyc":
        return [nonkyc_two_validator_equilibrium(p, variant.non_kyc)]
    if variant.kind == "tie_break":
        if p.n != 1:
            raise AssumptionViolated("tie_break_needs_n_1", f"n={p.n}")
        prof = tiebreak_profile(p, variant.tie_break)
        # no Nash claim here: see the verification column
        return [EquilibriumResult("tie_break_foc", prof, p, loss=system_loss(p, prof))]
    if p.n == 1:
        return single_validator_equilibria(p)
    out = enumerate_symmetric_equilibria(p)
    if include_asym:
        out += asymmetric_equilibria(p)
    return out


def loss_minimal(results: list[EquilibriumResult]) -> int | None:
    """Index of the loss-minimal result (first on ties), None if empty."""
    if not results:
        return None
    return min(range(len(results)), key=lambda i: (results[i].loss, i))
