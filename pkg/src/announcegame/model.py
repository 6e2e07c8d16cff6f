"""Actions, strategy profiles and single-round payoff functions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BlindChallengeUnsupported, InvalidProfile
from .params import GameParams

_PROB_TOL = 1e-12


class AggregatorAction(str, enum.Enum):
    HONEST = "honest"
    ATTACK = "attack"


class ValidatorAction(str, enum.Enum):
    VERIFY = "verify"
    FREE_RIDE = "free_ride"
    BLIND_CHALLENGE = "blind_challenge"


HONEST, ATTACK = AggregatorAction.HONEST, AggregatorAction.ATTACK
VERIFY = ValidatorAction.VERIFY
FREE_RIDE = ValidatorAction.FREE_RIDE
BLIND = ValidatorAction.BLIND_CHALLENGE


@dataclass(frozen=True)
class ValidatorStrategy:
    alpha: float = 0.0  # P(verify)
    gamma: float = 0.0  # P(blind challenge)

    @property
    def free_ride(self) -> float:
        return 1.0 - self.alpha - self.gamma

    def prob(self, action: ValidatorAction) -> float:
        if action is VERIFY:
            return self.alpha
        if action is BLIND:
            return self.gamma
        return max(self.free_ride, 0.0)


@dataclass(frozen=True)
class NonKycStake:
    """Non-KYC payload: verifiers stake ``V_max``; ``deposits[i]`` is the
    stake validator i posts when it does not verify."""

    V_max: float
    deposits: tuple[float, ...]


@dataclass(frozen=True)
class TieBreak:
    D: float


@dataclass(frozen=True)
class StrategyProfile:
    beta: float
    validators: tuple[ValidatorStrategy, ...]
    variant: str = "kyc"
    payload: NonKycStake | TieBreak | None = field(default=None)

    @classmethod
    def of(cls, beta: float, alphas: Sequence[float], gammas: Sequence[float] | None = None,
           variant: str = "kyc", payload=None) -> "StrategyProfile":
        gammas = gammas if gammas is not None else [0.0] * len(alphas)
        vs = tuple(ValidatorStrategy(float(a), float(g)) for a, g in zip(alphas, gammas))
        return cls(float(beta), vs, variant, payload)

    @property
    def n(self) -> int:
        return len(self.validators)

    @property
    def alphas(self) -> list[float]:
        return [v.alpha for v in self.validators]

    def validate(self) -> "StrategyProfile":
        if not (0.0 <= self.beta <= 1.0) or math.isnan(self.beta):
            raise InvalidProfile(f"beta={self.beta} not in [0, 1]")
        if not self.validators:
            raise InvalidProfile("profile has no validators")
        for i, v in enumerate(self.validators):
            if v.alpha < 0 or v.gamma < 0 or v.alpha + v.gamma > 1 + _PROB_TOL:
                raise InvalidProfile(f"validator {i}: alpha={v.alpha}, gamma={v.gamma}")
            if self.n > 1 and v.gamma != 0:
                raise InvalidProfile(f"validator {i}: blind challenge needs a single validator")
        if self.variant == "kyc":
            if self.payload is not None:
                raise InvalidProfile("kyc variant takes no payload")
        elif self.variant == "non_kyc":
            if not isinstance(self.payload, NonKycStake):
                raise InvalidProfile("non_kyc variant needs V_max and deposits")
            if len(self.payload.deposits) != self.n:
                raise InvalidProfile("one deposit per validator required")
            if any(g for g in (v.gamma for v in self.validators)):
                raise InvalidProfile("non_kyc has no blind challenge")
        elif self.variant == "tie_break":
            if not isinstance(self.payload, TieBreak):
                raise InvalidProfile("tie_break variant needs D")
            if self.n != 1 or self.validators[0].gamma != 0:
                raise InvalidProfile("tie_break is a single-validator verify/free-ride game")
        else:
            raise InvalidProfile(f"unknown variant {self.variant!r}")
        return self

    def to_dict(self) -> dict:
        variant: dict = {"kind": self.variant}
        if isinstance(self.payload, NonKycStake):
            variant.update(V_max=self.payload.V_max, deposits=list(self.payload.deposits))
        elif isinstance(self.payload, TieBreak):
            variant.update(D=self.payload.D)
        return {
            "beta": self.beta,
            "validators": [{"alpha": v.alpha, "gamma": v.gamma} for v in self.validators],
            "variant": variant,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StrategyProfile":
        try:
            vs = tuple(ValidatorStrategy(float(v["alpha"]), float(v.get("gamma", 0.0)))
                       for v in data["validators"])
            beta = float(data["beta"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidProfile(f"malformed profile: {exc}") from exc
        variant = data.get("variant", {"kind": "kyc"})
        if isinstance(variant, str):
            variant = {"kind": variant}
        kind = variant.get("kind", "kyc")
        payload = None
        if kind == "non_kyc":
            payload = NonKycStake(float(variant["V_max"]),
                                  tuple(float(d) for d in variant["deposits"]))
        elif kind == "tie_break":
            payload = TieBreak(float(variant["D"]))
        return cls(beta, vs, kind, payload).validate()


# -- payoffs ---------------------------------------------------------------

def payoff_single(p: GameParams, a: AggregatorAction, v: ValidatorAction) -> tuple[float, float]:
    """One aggregator, one validator; the blind-challenge row carries lambda."""
    if a is HONEST:
        if v is FREE_RIDE:
            return p.B, p.T
        if v is VERIFY:
            return p.B, p.T - p.C
        return p.B + p.lam * p.f_n * p.V, -p.f_n * p.V
    if v is FREE_RIDE:
        return p.Z, p.T
    if v is VERIFY:
        return -p.S, p.dS - p.C
    return -p.S, p.dS


def payoff_multi(p: GameParams, a: AggregatorAction,
                 actions: Sequence[ValidatorAction]) -> tuple[float, list[float]]:
    """One aggregator and ``p.n`` validators (verify / free ride only)."""
    n = len(actions)
    if n != p.n:
        raise ValueError(f"expected {p.n} validator actions, got {n}")
    if BLIND in actions:
        if n > 1:
            raise BlindChallengeUnsupported("blind challenge only in the single-validator game")
        ua, uv = payoff_single(p, a, actions[0])
        return ua, [uv]
    share = p.T / n
    verifiers = sum(1 for x in actions if x is VERIFY)
    if a is HONEST:
        return p.B, [share - p.C if x is VERIFY else share for x in actions]
    if verifiers == 0:
        return p.Z, [share] * n
    bounty = p.dS / verifiers
    return -p.S, [bounty - p.C if x is VERIFY else -p.f_p * p.V for x in actions]


def payoff_tiebreak(p: GameParams, D: float, alpha: float, beta: float,
                    a: AggregatorAction, v: ValidatorAction) -> tuple[float, float]:
    """Single-validator payoffs with the interference term on the caught cell."""
    if v is BLIND:
        raise BlindChallengeUnsupported("tie-break game has no blind challenge")
    ua, uv = payoff_single(p, a, v)
    if a is ATTACK and v is VERIFY:
        ua = -p.S - alpha * beta * D
    return ua, uv


def payoff_nonkyc(p: GameParams, a: AggregatorAction, actions: Sequence[ValidatorAction],
                  V_max: float, deposits: Sequence[float]) -> tuple[float, list[float]]:
    """Deposit-weighted payoffs: a verifier stakes ``V_max``, a free rider
    its own ``deposits[i]``; rewards split pro rata, penalties scale with stake."""
    if BLIND in actions:
        raise BlindChallengeUnsupported("non-KYC game has no blind challenge")
    stakes = [V_max if x is VERIFY else d for x, d in zip(actions, deposits)]
    total = sum(stakes)
    shares = [p.T * s / total if total > 0 else p.T / len(stakes) for s in stakes]
    verifiers = [i for i, x in enumerate(actions) if x is VERIFY]
    if a is HONEST:
        return p.B, [sh - p.C if x is VERIFY else sh for sh, x in zip(shares, actions)]
    if not verifiers:
        return p.Z, shares
    vstake = sum(stakes[i] for i in verifiers)
    out = []
    for i, x in enumerate(actions):
        if x is VERIFY:
            out.append(p.dS * stakes[i] / vstake - p.C)
        else:
            out.append(-p.f_p * stakes[i])
    return -p.S, out


def round_payoffs(p: GameParams, s: StrategyProfile, a: AggregatorAction,
                  actions: Sequence[ValidatorAction]) -> tuple[float, list[float]]:
    """Payoffs of one realized round under the profile's variant."""
    if s.variant == "non_kyc":
        return payoff_nonkyc(p, a, actions, s.payload.V_max, s.payload.deposits)
    if s.variant == "tie_break":
        ua, uv = payoff_tiebreak(p, s.payload.D, s.validators[0].alpha, s.beta, a, actions[0])
        return ua, [uv]
    return payoff_multi(p, a, actions)


def detected(actions: Sequence[ValidatorAction]) -> bool:
    """An attack is stopped by any verifier or blind challenger."""
    return any(x is not FREE_RIDE for x in actions)
