"""Mechanism variants: free deposit choice (non-KYC) and the interference term D."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .closed_form import EquilibriumResult, two_validator_equilibria
from .errors import (Infeasible, NegativeBeta, NegativeDenominator, NoAdmissibleRoot,
                     SingularDenominator)
from .model import NonKycStake, StrategyProfile, TieBreak
from .oracle import system_loss
from .params import GameParams, validate_params


@dataclass(frozen=True)
class NonKycParams:
    V_min: float
    V_max: float
    V_star: float  # stake posted when not verifying; an input, not solved for

    def __post_init__(self):
        if not (0 <= self.V_min <= self.V_star <= self.V_max and self.V_max > 0):
            raise ValueError(f"need 0 <= V_min <= V_star <= V_max, V_max > 0; got {self}")


@dataclass(frozen=True)
class TieBreakParams:
    D: float


def nonkyc_beta(p: GameParams, nk: NonKycParams) -> tuple[float, float]:
    """(alpha, beta) of the symmetric two-validator non-KYC equilibrium."""
    alpha = 1.0 - math.sqrt(p.A)
    lever = nk.V_max * p.T / (nk.V_max + nk.V_star)
    num = p.C - lever + p.T / 2
    den = p.dS * (1 - alpha / 2) + alpha * (p.T / 2 + p.f_p * nk.V_star) - lever
    if den <= 0:
        raise NegativeDenominator(f"non-KYC beta denominator {den:g} <= 0")
    if num < 0:
        raise NegativeBeta(f"non-KYC beta numerator {num:g} < 0")
    return alpha, num / den


def nonkyc_two_validator_equilibrium(p: GameParams, nk: NonKycParams) -> EquilibriumResult:
    validate_params(p)
    if p.n != 2:
        raise ValueError("non-KYC equilibrium is derived for n == 2 only")
    alpha, beta = nonkyc_beta(p, nk)
    if beta > 1:
        raise Infeasible("beta_le_1", 1 - beta)
    prof = StrategyProfile.of(beta, [alpha, alpha], variant="non_kyc",
                              payload=NonKycStake(nk.V_max, (nk.V_star, nk.V_star)))
    return EquilibriumResult("nonkyc", prof, p, m=2, loss=system_loss(p, prof),
                             feasibility=[("beta_le_1", True, 1 - beta)])


def kyc_beta_at(p: GameParams, V: float) -> float:
    """Symmetric two-validator KYC beta with the fixed deposit set to ``V``."""
    return two_validator_equilibria(p.with_(V=V, n=2))[0].beta


# -- interference term -------------------------------------------------------

def tiebreak_beta(p: GameParams) -> float:
    """Validator indifference is untouched by D."""
    return p.C / (p.dS - p.T)


def tiebreak_alpha(p: GameParams, tb: TieBreakParams, beta: float, Z: float | None = None) -> float:
    """Root in [0, 1] of 2 beta D a^2 + (Z + S) a + (B - Z) = 0.

    When both roots qualify, the one continuous with the D = 0 solution wins.
    """
    Z = p.Z if Z is None else Z
    a, b, c = 2.0 * beta * tb.D, Z + p.S, p.B - Z
    base = (Z - p.B) / (Z + p.S)
    if a == 0.0:
        roots = [-c / b]
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            raise NoAdmissibleRoot(f"negative discriminant {disc:g}")
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = [c / q, q / a]
    ok = [r for r in roots if 0.0 <= r <= 1.0]
    if not ok:
        raise NoAdmissibleRoot(f"roots {roots} outside [0, 1]")
    return min(ok, key=lambda r: abs(r - base))


def tiebreak_expected_utility(p: GameParams, tb: TieBreakParams, Z: float,
                              alpha: float, beta: float) -> float:
    """Aggregator's expected utility with the interference term, unsimplified."""
    return beta * ((1 - alpha) * Z + alpha * (-p.S - alpha * beta * tb.D)) + (1 - beta) * p.B


def tiebreak_dEA_dZ(p: GameParams, tb: TieBreakParams, Z: float | None = None):
    """(dE_A/dZ, alpha, beta) along the curve alpha(Z) at the validator-indifferent beta."""
    Z = p.Z if Z is None else Z
    beta = tiebreak_beta(p)
    alpha = tiebreak_alpha(p, tb, beta, Z)
    den = 4 * alpha * beta * tb.D + p.S + Z
    if den == 0:
        raise SingularDenominator("4 alpha beta D + S + Z == 0")
    dalpha = (1 - alpha) / den
    return 2 * alpha * beta ** 2 * tb.D * dalpha, alpha, beta


def tiebreak_profile(p: GameParams, tb: TieBreakParams) -> StrategyProfile:
    beta = tiebreak_beta(p)
    return StrategyProfile.of(beta, [tiebreak_alpha(p, tb, beta)], variant="tie_break",
                              payload=TieBreak(tb.D))
