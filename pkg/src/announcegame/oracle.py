"""Exact expected utilities and best-response verification.

Two backends compute validator utilities:

* ``binomial`` -- closed-form sums over the (Poisson-)binomial count of other
  verifiers;
* ``enumerate`` -- brute force over every realized action vector, scoring each
  with the round payoff tables in :mod:`announcegame.model`.

The second is deliberately naive so it can serve as an oracle for the first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import BlindChallengeUnsupported
from .model import (ATTACK, BLIND, FREE_RIDE, HONEST, VERIFY, AggregatorAction,
                    StrategyProfile, ValidatorAction, round_payoffs)
from .params import GameParams

DEFAULT_EPS = 1e-9
MAX_ENUMERATE_N = 16


def _player_actions(s: StrategyProfile) -> tuple[ValidatorAction, ...]:
    if s.n == 1 and s.variant == "kyc":
        return (VERIFY, FREE_RIDE, BLIND)
    return (VERIFY, FREE_RIDE)


def _count_distribution(alphas: list[float]) -> list[float]:
    """P(K = k) for K a sum of independent Bernoulli(alpha_j)."""
    dist = [1.0]
    for a in alphas:
        nxt = [0.0] * (len(dist) + 1)
        for k, pk in enumerate(dist):
            nxt[k] += pk * (1.0 - a)
            nxt[k + 1] += pk * a
        dist = nxt
    return dist


def _realizations(s: StrategyProfile, skip: int | None = None):
    """Yield (probability, actions) over all action vectors with non-zero mass.

    Validator ``skip`` is left as ``None`` in the vector.
    """
    per_player = []
    for i, v in enumerate(s.validators):
        if i == skip:
            per_player.append([(1.0, None)])
            continue
        opts = [(v.alpha, VERIFY), (v.free_ride, FREE_RIDE)]
        if v.gamma:
            opts.append((v.gamma, BLIND))
        per_player.append([(pr, a) for pr, a in opts if pr > 0])
    for combo in itertools.product(*per_player):
        prob = math.prod(pr for pr, _ in combo)
        yield prob, [a for _, a in combo]


def _undetected_prob(s: StrategyProfile) -> float:
    return math.prod(max(v.free_ride, 0.0) for v in s.validators)


def _check_n(p: GameParams, s: StrategyProfile) -> None:
    if p.n != s.n:
        raise ValueError(f"profile has {s.n} validators but params say n={p.n}")


def expected_utility_aggregator(p: GameParams, s: StrategyProfile, a: AggregatorAction,
                                backend: str = "binomial") -> float:
    _check_n(p, s)
    if backend == "enumerate":
        return math.fsum(pr * round_payoffs(p, s, a, acts)[0]
                         for pr, acts in _realizations(s))
    if a is HONEST:
        if s.n == 1:
            return p.B + s.validators[0].gamma * p.lam * p.f_n * p.V
        return p.B
    q = _undetected_prob(s)
    if s.variant == "tie_break":
        v = s.validators[0]
        return v.alpha * (-p.S - v.alpha * s.beta * s.payload.D) + v.gamma * (-p.S) + q * p.Z
    return q * p.Z - (1.0 - q) * p.S


def expected_utility_validator(p: GameParams, s: StrategyProfile, i: int,
                               action: ValidatorAction, backend: str = "binomial") -> float:
    """Expected utility of validator ``i`` playing ``action`` against ``s``."""
    _check_n(p, s)
    n = s.n
    if not 0 <= i < n:
        raise IndexError(i)
    if action is BLIND and n > 1:
        raise BlindChallengeUnsupported("blind challenge only in the single-validator game")
    if backend == "enumerate" or s.variant == "non_kyc":
        if n - 1 > MAX_ENUMERATE_N:
            raise ValueError(f"enumeration limited to n <= {MAX_ENUMERATE_N + 1}")
        terms = []
        for b, pb in ((ATTACK, s.beta), (HONEST, 1.0 - s.beta)):
            if pb == 0:
                continue
            for pr, acts in _realizations(s, skip=i):
                acts[i] = action
                terms.append(pb * pr * round_payoffs(p, s, b, acts)[1][i])
        return math.fsum(terms)

    beta = s.beta
    share = p.T / n
    if action is BLIND:
        return (1.0 - beta) * (-p.f_n * p.V) + beta * p.dS
    others = [v.alpha for j, v in enumerate(s.validators) if j != i]
    if action is VERIFY:
        dist = _count_distribution(others)
        bounty = math.fsum(pk * p.dS / (k + 1) for k, pk in enumerate(dist))
        return beta * bounty + (1.0 - beta) * share - p.C
    # free ride
    caught = 1.0 - math.prod(1.0 - a for a in others)
    return (1.0 - beta * caught) * share - beta * caught * p.f_p * p.V


@dataclass
class DeviationReport:
    player: str  # "aggregator" or "validator[i]"
    action_utilities: dict[str, float]
    support: list[str]
    support_spread: float
    best_deviation_gain: float

    def passes(self, eps: float = DEFAULT_EPS) -> bool:
        return self.support_spread <= eps and self.best_deviation_gain <= eps


def _report(player: str, utilities: dict, probs: dict) -> DeviationReport:
    support = [a for a, pr in probs.items() if pr > 0]
    sup_u = [utilities[a] for a in support]
    top = max(sup_u)
    out_u = [utilities[a] for a in utilities if a not in support]
    gain = max([u - top for u in out_u], default=0.0)
    return DeviationReport(player, utilities, support, top - min(sup_u), max(gain, 0.0))


def best_response_check(p: GameParams, s: StrategyProfile, eps: float = DEFAULT_EPS,
                        backend: str = "binomial") -> list[DeviationReport]:
    """One report per player; see :func:`is_equilibrium`."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    s.validate()
    reports = []
    ua = {a.value: expected_utility_aggregator(p, s, a, backend) for a in (HONEST, ATTACK)}
    reports.append(_report("aggregator", ua, {"attack": s.beta, "honest": 1.0 - s.beta}))
    acts = _player_actions(s)
    for i, v in enumerate(s.validators):
        uv = {a.value: expected_utility_validator(p, s, i, a, backend) for a in acts}
        probs = {a.value: v.prob(a) for a in acts}
        reports.append(_report(f"validator[{i}]", uv, probs))
    return reports


def is_equilibrium(reports: list[DeviationReport], eps: float = DEFAULT_EPS) -> bool:
    return all(r.passes(eps) for r in reports)


def system_loss(p: GameParams, s: StrategyProfile) -> float:
    """Expected value of finalized malicious blocks per round."""
    return s.beta * _undetected_prob(s) * p.Z
