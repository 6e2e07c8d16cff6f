"""Seeded Monte Carlo of repeated rounds under a fixed strategy profile.

Rounds are cut into fixed-size blocks. Block ``b`` draws from
``Philox(SeedSequence([seed, b]))`` so the stream for any round depends only on
``(seed, round index)``, never on how blocks are spread over workers. Each
block yields (count, mean, M2) per statistic; blocks are merged in index order
with the pairwise update of Chan et al., so results are bit-identical for any
worker count.

Besides realized utilities, every round also scores each player's
counterfactual payoff for every pure action (everyone else as realized). Those
give the per-action conditional means that the indifference conditions are
about, including actions played with probability zero.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .model import ATTACK, BLIND, FREE_RIDE, HONEST, VERIFY, StrategyProfile, round_payoffs
from .oracle import (_player_actions, _undetected_prob, expected_utility_aggregator,
                     expected_utility_validator, system_loss)
from .params import GameParams

BLOCK = 1 << 16
MIN_ROUNDS = 10_000

_CODES = (VERIFY, FREE_RIDE, BLIND)  # action code = index


class MinimumRoundsWarning(UserWarning):
    pass


@dataclass
class SimulationReport:
    rounds: int
    seed: int
    mean_utility_aggregator: float
    se_aggregator: float
    mean_utility_validators: list[tuple[float, float]]
    empirical_loss_per_round: float
    se_loss: float
    attack_rate: float
    detection_rate: float
    se_attack_rate: float = 0.0
    se_detection_rate: float = 0.0
    # player -> action -> (mean, se) of the counterfactual payoff
    action_means: dict[str, dict[str, tuple[float, float]]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mean_utility_validators"] = [list(x) for x in self.mean_utility_validators]
        d["action_means"] = {k: {a: list(v) for a, v in m.items()}
                             for k, m in self.action_means.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationReport":
        d = dict(d)
        d["mean_utility_validators"] = [tuple(x) for x in d["mean_utility_validators"]]
        d["action_means"] = {k: {a: tuple(v) for a, v in m.items()}
                             for k, m in d.get("action_means", {}).items()}
        return cls(**d)


# -- moments ------------------------------------------------------------------

@dataclass
class _Moments:
    n: np.ndarray
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        """Column-wise moments of a (rows, k) array."""
        cnt = np.full(x.shape[1], x.shape[0], dtype=float)
        if x.shape[0] == 0:
            z = np.zeros(x.shape[1])
            return cls(cnt, z, z.copy())
        mu = x.mean(axis=0)
        return cls(cnt, mu, ((x - mu) ** 2).sum(axis=0))

    def merge(self, o: "_Moments") -> "_Moments":
        n = self.n + o.n
        with np.errstate(invalid="ignore", divide="ignore"):
            d = o.mean - self.mean
            w = np.where(n > 0, o.n / np.where(n > 0, n, 1), 0.0)
            mean = self.mean + d * w
            m2 = self.m2 + o.m2 + d * d * self.n * w
        return _Moments(n, mean, m2)

    def se(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            var = np.where(self.n > 1, self.m2 / np.maximum(self.n - 1, 1), 0.0)
            return np.where(self.n > 0, np.sqrt(var / np.maximum(self.n, 1)), math.nan)


# -- per-block sampling ---------------------------------------------------------

class _Scorer:
    """Caches round payoffs keyed by (aggregator action, action vector)."""

    def __init__(self, p: GameParams, s: StrategyProfile):
        self.p, self.s = p, s
        self.cache: dict[tuple, tuple[float, list[float]]] = {}

    def __call__(self, a: int, acts: tuple[int, ...]):
        key = (a, acts)
        hit = self.cache.get(key)
        if hit is None:
            hit = round_payoffs(self.p, self.s, ATTACK if a else HONEST, [_CODES[c] for c in acts])
            self.cache[key] = hit
        return hit


def _score(scorer: _Scorer, attack: np.ndarray, acts: np.ndarray):
    """(aggregator, validators) utilities for each row, scoring unique rows only."""
    n = acts.shape[1]
    weights = 3 ** np.arange(n, dtype=np.int64)
    keys = attack.astype(np.int64) * 3 ** n + acts.astype(np.int64) @ weights
    uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    ua = np.empty(len(uniq))
    uv = np.empty((len(uniq), n))
    for r, j in enumerate(first):
        x, y = scorer(int(attack[j]), tuple(int(c) for c in acts[j]))
        ua[r] = x
        uv[r] = y
    return ua[inv], uv[inv]


def _layout(s: StrategyProfile):
    acts = _player_actions(s)
    names = ["aggregator"] + [f"validator[{i}]" for i in range(s.n)]
    cols = ["u_agg"] + [f"u_v{i}" for i in range(s.n)] + ["loss", "attack"]
    cols += ["cf_agg_honest", "cf_agg_attack"]
    cols += [f"cf_v{i}_{a.value}" for i in range(s.n) for a in acts]
    return acts, names, cols


def _block(p: GameParams, s: StrategyProfile, seed: int, b: int, size: int):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, b])))
    n = s.n
    u = rng.random((size, n + 1))
    attack = u[:, 0] < s.beta
    alpha = np.array([v.alpha for v in s.validators])
    ag = alpha + np.array([v.gamma for v in s.validators])
    uv_draw = u[:, 1:]
    acts = np.where(uv_draw < alpha, 0, np.where(uv_draw < ag, 2, 1)).astype(np.int8)

    scorer = _Scorer(p, s)
    ua, uvs = _score(scorer, attack, acts)
    undetected = np.all(acts == 1, axis=1)
    loss = np.where(attack & undetected, p.Z, 0.0)

    cols = [ua[:, None], uvs, loss[:, None], attack.astype(float)[:, None]]
    for a in (False, True):
        cols.append(_score(scorer, np.full(size, a), acts)[0][:, None])
    action_set = _player_actions(s)
    for i in range(n):
        for a in action_set:
            alt = acts.copy()
            alt[:, i] = _CODES.index(a)
            cols.append(_score(scorer, attack, alt)[1][:, i][:, None])
    allm = _Moments.of(np.hstack(cols))
    det = (~undetected[attack]).astype(float)[:, None]
    return allm, _Moments.of(det)


def simulate(p: GameParams, s: StrategyProfile, rounds: int, seed: int,
             workers: int = 1) -> SimulationReport:
    s.validate()
    if p.n != s.n:
        raise ValueError(f"profile has {s.n} validators but params say n={p.n}")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    sizes = [BLOCK] * (rounds // BLOCK) + ([rounds % BLOCK] if rounds % BLOCK else [])

    def run(b):
        return _block(p, s, seed, b, sizes[b])

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]

    tot, det = parts[0]
    for a, d in parts[1:]:
        tot, det = tot.merge(a), det.merge(d)
    se = tot.se()
    mu = tot.mean
    acts, names, cols = _layout(s)
    idx = {c: j for j, c in enumerate(cols)}

    def pair(c):
        return float(mu[idx[c]]), float(se[idx[c]])

    action_means = {"aggregator": {"honest": pair("cf_agg_honest"),
                                   "attack": pair("cf_agg_attack")}}
    for i in range(s.n):
        action_means[names[i + 1]] = {a.value: pair(f"cf_v{i}_{a.value}") for a in acts}
    has_attack = det.n[0] > 0
    return SimulationReport(
        rounds=rounds, seed=seed,
        mean_utility_aggregator=float(mu[0]), se_aggregator=float(se[0]),
        mean_utility_validators=[pair(f"u_v{i}") for i in range(s.n)],
        empirical_loss_per_round=float(mu[idx["loss"]]), se_loss=float(se[idx["loss"]]),
        attack_rate=float(mu[idx["attack"]]), se_attack_rate=float(se[idx["attack"]]),
        detection_rate=float(det.mean[0]) if has_attack else math.nan,
        se_detection_rate=float(det.se()[0]) if has_attack else math.nan,
        action_means=action_means,
    )


# -- comparison -----------------------------------------------------------------

@dataclass
class Comparison:
    passed: bool
    z_scores: dict[str, float]
    failures: list[str]
    targets: dict[str, float]
    inconclusive: bool = False

    def __bool__(self) -> bool:
        return self.passed


def _z(obs: float, se: float, target: float) -> float:
    if math.isnan(obs):
        return math.nan
    diff = obs - target
    if se > 0:
        return diff / se
    # zero spread: exact agreement or an impossible observation
    return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(target)) else math.copysign(math.inf, diff)


def theory_targets(p: GameParams, s: StrategyProfile) -> dict[str, float]:
    t = {}
    ua = {a: expected_utility_aggregator(p, s, a) for a in (HONEST, ATTACK)}
    t["aggregator"] = s.beta * ua[ATTACK] + (1 - s.beta) * ua[HONEST]
    t["aggregator.honest"] = ua[HONEST]
    t["aggregator.attack"] = ua[ATTACK]
    for i, v in enumerate(s.validators):
        u = {a: expected_utility_validator(p, s, i, a) for a in _player_actions(s)}
        t[f"validator[{i}]"] = math.fsum(v.prob(a) * x for a, x in u.items())
        for a, x in u.items():
            t[f"validator[{i}].{a.value}"] = x
    t["loss"] = system_loss(p, s)
    t["attack_rate"] = s.beta
    t["detection_rate"] = 1.0 - _undetected_prob(s)
    return t


def compare_to_theory(report: SimulationReport, p: GameParams, s: StrategyProfile,
                      z_threshold: float = 3.0) -> Comparison:
    """Flag every statistic whose |z| against the oracle exceeds ``z_threshold``.

    Below MIN_ROUNDS a MinimumRoundsWarning is issued and the result is marked
    inconclusive: it never reports a pass from a degenerate sample.
    """
    t = theory_targets(p, s)
    obs = {"aggregator": (report.mean_utility_aggregator, report.se_aggregator),
           "loss": (report.empirical_loss_per_round, report.se_loss),
           "attack_rate": (report.attack_rate, report.se_attack_rate),
           "detection_rate": (report.detection_rate, report.se_detection_rate)}
    for i, x in enumerate(report.mean_utility_validators):
        obs[f"validator[{i}]"] = tuple(x)
    for player, m in report.action_means.items():
        for a, x in m.items():
            obs[f"{player}.{a}"] = tuple(x)
    z = {k: _z(o, se, t[k]) for k, (o, se) in obs.items() if k in t}
    failures = [k for k, v in z.items() if not math.isnan(v) and abs(v) > z_threshold]
    inconclusive = report.rounds < MIN_ROUNDS
    if inconclusive:
        warnings.warn(f"{report.rounds} rounds < {MIN_ROUNDS}; comparison is not meaningful",
                      MinimumRoundsWarning, stacklevel=2)
    return Comparison(not failures and not inconclusive, z, failures, t, inconclusive)
