"""Closed-form equilibria: one validator, two validators, symmetric m-NE family."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateA, Infeasible, NegativeDenominator
from .model import StrategyProfile
from .oracle import DEFAULT_EPS, best_response_check, is_equilibrium, system_loss
from .params import GameParams, validate_params

TRIPLE_POINT_RTOL = 1e-9


# -- m-indexed sequences (functions of A alone) -----------------------------

def _check_A(A: float) -> None:
    if not 0.0 < A < 1.0:
        raise DegenerateA(f"A={A} must lie in (0, 1)")


def alpha_m(A: float, m: int) -> float:
    """Per-validator verification probability with (1 - alpha)^m = A."""
    _check_A(A)
    return -math.expm1(math.log(A) / m)


def P_m(A: float, m: int) -> float:
    return (1.0 - A) / (m * alpha_m(A, m))


def Q_m(A: float, m: int) -> float:
    return A / (1.0 - alpha_m(A, m))


def Gamma_m(A: float, m: int) -> float:
    """Largest R for which the m-NE keeps the n - m free riders put."""
    if m == 0:
        return 0.0
    a = alpha_m(A, m)
    bracket = (1.0 / A - 1.0) / (m * (m + 1)) - a / (m + 1)
    return bracket * (1.0 - a) / (a * a)


def Delta_m(A: float, m: int) -> float:
    """beta_m < beta_{m+1} iff R < Delta_m."""
    return (P_m(A, m) - P_m(A, m + 1)) / (Q_m(A, m) - Q_m(A, m + 1))


@dataclass(frozen=True)
class DerivedQuantities:
    A: float
    R: float
    P_m: float
    Q_m: float
    Delta_m: float
    Gamma_m: float
    alpha_m: float
    m: int
    n: int


def derived_quantities(p: GameParams, n: int, m: int) -> DerivedQuantities:
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    A = p.A
    _check_A(A)
    R = (p.T / n + p.f_p * p.V) / p.dS
    return DerivedQuantities(A=A, R=R, P_m=P_m(A, m), Q_m=Q_m(A, m), Delta_m=Delta_m(A, m),
                             Gamma_m=Gamma_m(A, m), alpha_m=alpha_m(A, m), m=m, n=n)


# -- results ------------------------------------------------------------------

@dataclass
class EquilibriumResult:
    kind: str
    profile: StrategyProfile
    params: GameParams
    m: int | None = None
    feasibility: list[tuple[str, bool, float]] = field(default_factory=list)
    loss: float = math.nan
    extra: dict = field(default_factory=dict)

    @property
    def beta(self) -> float:
        return self.profile.beta

    @property
    def feasible(self) -> bool:
        return all(ok for _, ok, _ in self.feasibility)

    def verify(self, eps: float = DEFAULT_EPS) -> bool:
        return is_equilibrium(best_response_check(self.params, self.profile, eps), eps)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "profile": self.profile.to_dict(),
            "feasibility": [{"condition": c, "satisfied": ok, "slack": sl}
                            for c, ok, sl in self.feasibility],
            "loss": self.loss,
            **({"extra": self.extra} if self.extra else {}),
        }


def _result(kind: str, p: GameParams, profile: StrategyProfile, **kw) -> EquilibriumResult:
    return EquilibriumResult(kind, profile, p, loss=system_loss(p, profile), **kw)


# -- one validator ------------------------------------------------------------

def chance_taker_threshold(p: GameParams) -> float:
    """Cost at which verifying and blind challenging tie for the validator."""
    fnV = p.f_n * p.V
    return (p.dS - p.T) * (p.T + fnV) / (p.dS + fnV)


def single_validator_equilibria(p: GameParams) -> list[EquilibriumResult]:
    validate_params(p)
    if p.n != 1:
        raise ValueError("single-validator game needs n == 1")
    fnV = p.f_n * p.V
    c_star = chance_taker_threshold(p)
    gap = c_star - p.C
    at_triple = abs(gap) <= TRIPLE_POINT_RTOL * max(1.0, c_star)
    alpha_v = (p.Z - p.B) / (p.Z + p.S)
    gamma_c = (p.Z - p.B) / (p.Z + p.S + p.lam * fnV)
    beta_v = p.C / (p.dS - p.T)
    beta_c = (p.T + fnV) / (p.dS + fnV)

    out = []
    if gap < 0 or at_triple:
        prof = StrategyProfile.of(beta_c, [0.0], [gamma_c])
        out.append(_result("single_chance_taker", p, prof,
                           feasibility=[("C_ge_Cstar", True, -gap)]))
    if gap > 0 or at_triple:
        prof = StrategyProfile.of(beta_v, [alpha_v], [0.0])
        out.append(_result("single_verifier", p, prof,
                           feasibility=[("C_le_Cstar", True, gap)]))
    if at_triple:
        # Any convex combination of the two validator strategies keeps the
        # aggregator indifferent; report the midpoint as the full-support point.
        prof = StrategyProfile.of(beta_c, [alpha_v / 2], [gamma_c / 2])
        out.append(_result("single_triple_point", p, prof,
                           feasibility=[("C_eq_Cstar", True, gap)]))
    return out


# -- two validators -----------------------------------------------------------

def two_validator_equilibria(p: GameParams) -> list[EquilibriumResult]:
    validate_params(p)
    if p.n != 2:
        raise ValueError("two-validator game needs n == 2")
    fpV = p.f_p * p.V
    R = (p.T / 2 + fpV) / p.dS
    alpha = 1.0 - math.sqrt(p.A)
    denom = p.dS * (1 - alpha / 2) + alpha * (p.T / 2 + fpV) - p.T / 2
    if denom <= 0:
        raise NegativeDenominator(f"symmetric two-validator beta denominator {denom:g} <= 0")
    beta1 = p.C / denom
    out = [_result("two_sym", p, StrategyProfile.of(beta1, [alpha, alpha]), m=2,
                   feasibility=[("beta_le_1", beta1 <= 1, 1 - beta1)])]
    if R <= 0.5:
        alpha1 = (p.Z - p.B) / (p.Z + p.S)
        beta2 = p.C / (p.dS - p.T / 2)
        out.append(_result("two_one_freerider", p, StrategyProfile.of(beta2, [alpha1, 0.0]), m=1,
                           feasibility=[("R_le_half", True, 0.5 - R),
                                        ("beta_le_1", beta2 <= 1, 1 - beta2)]))
    return out


# -- symmetric m-NE -----------------------------------------------------------

def symmetric_candidate(p: GameParams, n: int, m: int) -> EquilibriumResult:
    """The m-NE candidate with every existence condition evaluated, not enforced."""
    q = p.with_(n=n)
    dq = derived_quantities(q, n, m)
    fpV = q.f_p * q.V
    denom = dq.P_m * q.dS - dq.Q_m * (fpV + q.T / n) + fpV
    beta = q.C / denom if denom > 0 else math.inf
    feas = [("beta_denominator_positive", denom > 0, denom),
            ("beta_le_1", beta <= 1, 1 - beta)]
    if m < n:
        feas.append(("R_le_Gamma_m", dq.R <= dq.Gamma_m, dq.Gamma_m - dq.R))
    alphas = [dq.alpha_m] * m + [0.0] * (n - m)
    prof = StrategyProfile.of(min(beta, 1.0), alphas)
    res = EquilibriumResult("sym_mNE", prof, q, m=m, feasibility=feas,
                            extra={"R": dq.R, "Gamma_m": dq.Gamma_m, "Delta_m": dq.Delta_m,
                                   "beta_raw": beta})
    res.loss = system_loss(q, prof) if beta <= 1 else math.nan
    return res


def symmetric_mne(p: GameParams, n: int, m: int) -> EquilibriumResult:
    res = symmetric_candidate(p, n, m)
    for name, ok, slack in res.feasibility:
        if not ok:
            raise Infeasible(name, slack, f"m={m}, n={n}")
    return res


def enumerate_symmetric_equilibria(p: GameParams, n: int | None = None) -> list[EquilibriumResult]:
    """All feasible m-NE for m = 1..n, ordered by m.

    The first entry is the loss-minimal one; the n-NE is always last.
    """
    n = p.n if n is None else n
    if n < 1:
        raise ValueError("n must be >= 1")
    return [r for r in (symmetric_candidate(p, n, m) for m in range(1, n + 1)) if r.feasible]


def worst_case_loss(p: GameParams, n: int | None = None) -> float:
    """Loss of the n-NE, the worst symmetric equilibrium."""
    n = p.n if n is None else n
    res = symmetric_candidate(p, n, n)
    return res.loss
