"""Asymmetric m-NE: k mixers verify w.p. alpha1, m - k w.p. alpha2 > alpha1.

Strategy: the aggregator condition fixes alpha2 as a function of alpha1, so the
group-difference condition becomes a scalar equation in alpha1. It is scanned
on a grid, every sign change is bisected, and roots are polished with Newton.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .closed_form import alpha_m
from .errors import BadGroupSizes, NoConvergence
from .model import FREE_RIDE, VERIFY, StrategyProfile
from .oracle import best_response_check, expected_utility_validator, is_equilibrium, system_loss
from .params import GameParams, check_assumptions

log = logging.getLogger(__name__)

GRID_POINTS = 2048
DOMAIN_EPS = 1e-12
BISECT_TOL = 1e-12
SYMMETRIC_TOL = 1e-9


@dataclass(frozen=True)
class CombinatorialTerms:
    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    k: int
    m: int
    alpha1: float
    alpha2: float


def _check_groups(k: int, m: int) -> None:
    if not 1 <= k <= m - 1:
        raise BadGroupSizes(
            f"k={k}, m={m}: both groups must be non-empty; k=0 or k=m is the "
            "symmetric case (use closed_form.symmetric_mne)")


def _pmf(n: int, a: float) -> list[float]:
    return [comb(n, i) * a ** i * (1.0 - a) ** (n - i) for i in range(n + 1)]


def _harmonic_sum(w1: list[float], w2: list[float], offset: int) -> float:
    return math.fsum(x * y / (i + j + offset)
                     for i, x in enumerate(w1) for j, y in enumerate(w2))


def combinatorial_terms(alpha1: float, alpha2: float, k: int, m: int) -> CombinatorialTerms:
    """Expectations of the bounty share seen by each group.

    p1, p2 are evaluated from their own defining sums (not from p3/p4).
    """
    _check_groups(k, m)
    w1 = _pmf(k - 1, alpha1)
    w2 = _pmf(m - k - 1, alpha2)
    p1 = _harmonic_sum(w1, _pmf(m - k, alpha2), 1)
    p2 = _harmonic_sum(_pmf(k, alpha1), w2, 1)
    p3 = _harmonic_sum(w1, w2, 2)
    p4 = _harmonic_sum(w1, w2, 1)
    p5 = (1.0 - alpha1) ** (k - 1) * (1.0 - alpha2) ** (m - k - 1)
    return CombinatorialTerms(p1, p2, p3, p4, p5, k, m, alpha1, alpha2)


def alpha2_from_alpha1(A: float, alpha1, k: int, m: int):
    """Solve (1-alpha1)^k (1-alpha2)^(m-k) = A for alpha2 (scalar or array)."""
    return -np.expm1((np.log(A) - k * np.log1p(-np.asarray(alpha1, dtype=float))) / (m - k))


def _scan_arrays(A: float, k: int, m: int, grid: int):
    """(alpha1 grid, p3 - p4, p5) evaluated on the whole grid at once."""
    hi = alpha_m(A, m) - DOMAIN_EPS
    a1 = np.linspace(DOMAIN_EPS, hi, grid)
    a2 = alpha2_from_alpha1(A, a1, k, m)

    def pmf(nn, a):
        i = np.arange(nn + 1)
        c = np.array([comb(nn, x) for x in i], dtype=float)
        return c * a[:, None] ** i * (1.0 - a[:, None]) ** (nn - i)

    w1, w2 = pmf(k - 1, a1), pmf(m - k - 1, a2)
    ij = np.add.outer(np.arange(k), np.arange(m - k))
    diff = np.einsum("gi,ij,gj->g", w1, 1.0 / (ij + 2) - 1.0 / (ij + 1), w2)
    p5 = (1.0 - a1) ** (k - 1) * (1.0 - a2) ** (m - k - 1)
    return a1, diff, p5


@dataclass
class AsymSolution:
    alpha1: float
    alpha2: float
    beta: float
    residuals: tuple[float, float, float]
    loss: float
    k: int
    m: int
    n: int
    branch: int
    params: GameParams
    free_rider_slack: float | None = None
    feasibility: list[tuple[str, bool, float]] = field(default_factory=list)

    @property
    def residual_max(self) -> float:
        return max(abs(r) for r in self.residuals)

    @property
    def feasible(self) -> bool:
        return all(ok for _, ok, _ in self.feasibility)

    def profile(self) -> StrategyProfile:
        alphas = [self.alpha1] * self.k + [self.alpha2] * (self.m - self.k) + [0.0] * (self.n - self.m)
        return StrategyProfile.of(self.beta, alphas)

    def verify(self, eps: float = 1e-6) -> bool:
        return is_equilibrium(best_response_check(self.params, self.profile(), eps), eps)


def _residual_4a(q: GameParams, a1: float, a2: float, k: int, m: int) -> float:
    t = combinatorial_terms(a1, a2, k, m)
    return (t.p3 - t.p4) * q.dS + t.p5 * (q.f_p * q.V + q.T / q.n)


def reduced_residuals(q: GameParams, a1: float, a2: float, beta: float, k: int, m: int):
    """Residuals of the three necessary conditions (money units)."""
    t = combinatorial_terms(a1, a2, k, m)
    X = q.f_p * q.V + q.T / q.n
    r_a = (t.p3 - t.p4) * q.dS + t.p5 * X
    r_b = q.C / beta - t.p4 * q.dS - q.f_p * q.V + t.p5 * X
    undetected = (1.0 - a1) ** k * (1.0 - a2) ** (m - k)
    r_c = undetected * q.Z - (1.0 - undetected) * q.S - q.B
    return r_a, r_b, r_c


def raw_indifference_residuals(q: GameParams, a1: float, a2: float, beta: float,
                               k: int, m: int) -> tuple[float, float]:
    """Verify-minus-free-ride utility for each group, from the full sums."""
    t = combinatorial_terms(a1, a2, k, m)
    share = q.T / q.n
    fpV = q.f_p * q.V
    out = []
    for bounty, none_other in ((t.p1, (1 - a1) ** (k - 1) * (1 - a2) ** (m - k)),
                               (t.p2, (1 - a1) ** k * (1 - a2) ** (m - k - 1))):
        lhs = beta * bounty * q.dS + (1 - beta) * share - q.C
        caught = 1.0 - none_other
        rhs = beta * caught * (-fpV) + (1.0 - beta * caught) * share
        out.append(lhs - rhs)
    return out[0], out[1]


def _bisect(f, lo: float, hi: float, flo: float, tol: float = BISECT_TOL, maxiter: int = 200) -> float:
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= tol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    raise NoConvergence(f"bisection did not reach {tol} in {maxiter} steps")


def _polish(f, x: float, lo: float, hi: float, steps: int = 3) -> float:
    fx = f(x)
    for _ in range(steps):
        h = 1e-7 * max(x, 1e-6)
        d = (f(x + h) - f(x - h)) / (2 * h)
        if d == 0 or not math.isfinite(d):
            break
        x_new = x - fx / d
        if not lo <= x_new <= hi:
            break
        f_new = f(x_new)
        if abs(f_new) >= abs(fx):
            break
        x, fx = x_new, f_new
    return x


def _free_rider_slack(q: GameParams, prof: StrategyProfile, m: int) -> float | None:
    if m >= q.n:
        return None
    return (expected_utility_validator(q, prof, m, FREE_RIDE)
            - expected_utility_validator(q, prof, m, VERIFY))


def solve_asymmetric(p: GameParams, n: int, m: int, k: int, *, grid: int = GRID_POINTS,
                     observation: bool = True, feasible_only: bool = True) -> list[AsymSolution]:
    """All asymmetric equilibria with k validators at alpha1 < alpha2.

    ``observation`` restricts to k <= m/2 (larger group verifies more);
    ``feasible_only`` drops roots with beta outside (0, 1] or a profitable
    deviation for the pure free riders.
    """
    _check_groups(k, m)
    if m > n:
        raise BadGroupSizes(f"m={m} exceeds n={n}")
    if observation and 2 * k > m:
        return []
    q = p.with_(n=n)
    A = q.A
    R = (q.f_p * q.V + q.T / n) / q.dS
    a1s, diff, p5s = _scan_arrays(A, k, m, grid)
    g = diff + p5s * R

    def f(x):
        a2 = float(alpha2_from_alpha1(A, x, k, m))
        t = combinatorial_terms(x, a2, k, m)
        return (t.p3 - t.p4) + t.p5 * R

    roots = []
    for i in range(len(a1s) - 1):
        if g[i] == 0.0:
            roots.append(float(a1s[i]))
        elif g[i] * g[i + 1] < 0:
            lo, hi = float(a1s[i]), float(a1s[i + 1])
            x = _bisect(f, lo, hi, f(lo))
            roots.append(_polish(f, x, lo, hi))

    out = []
    for a1 in roots:
        a2 = float(alpha2_from_alpha1(A, a1, k, m))
        if a2 - a1 < SYMMETRIC_TOL:
            continue
        t = combinatorial_terms(a1, a2, k, m)
        denom = t.p4 * q.dS - t.p5 * (q.f_p * q.V + q.T / n) + q.f_p * q.V
        beta = q.C / denom if denom > 0 else math.inf
        feas = [("beta_denominator_positive", denom > 0, denom), ("beta_le_1", beta <= 1, 1 - beta)]
        b = min(beta, 1.0)
        sol = AsymSolution(a1, a2, b, reduced_residuals(q, a1, a2, b, k, m), math.nan,
                           k, m, n, len(out), q, feasibility=feas)
        prof = sol.profile()
        sol.loss = system_loss(q, prof)
        sol.free_rider_slack = _free_rider_slack(q, prof, m)
        if sol.free_rider_slack is not None:
            feas.append(("free_riders_stay", sol.free_rider_slack >= -1e-12, sol.free_rider_slack))
        if feasible_only and not sol.feasible:
            log.debug("dropping infeasible root k=%d a1=%.6g: %s", k, a1, feas)
            continue
        sol.branch = len(out)
        out.append(sol)
    return out


def params_for_R(p: GameParams, n: int, R: float, via: str = "f_p") -> GameParams:
    """Parameters with (T/n + f_p V) / (delta S) = R, moving one knob."""
    q = p.with_(n=n)
    if via == "f_p":
        if q.V <= 0:
            raise ValueError("cannot move f_p when V == 0")
        return q.with_(f_p=(R * q.dS - q.T / n) / q.V)
    if via == "T":
        return q.with_(T=n * (R * q.dS - q.f_p * q.V))
    raise ValueError(f"via must be 'f_p' or 'T', got {via!r}")


SWEEP_COLUMNS = ("k", "R", "branch", "alpha1", "alpha2", "beta", "loss", "residual_max")


def sweep_k(p: GameParams, n: int, m: int, R_grid, *, via: str = "f_p",
            ks=None, observation: bool = True):
    """Rows of SWEEP_COLUMNS for every (k, R) cell, plus per-cell errors.

    Returns ``(rows, errors)``; ``errors`` maps (k, R) to a message.
    """
    ks = list(ks) if ks is not None else list(range(1, m))
    rows, errors = [], {}
    for k in ks:
        for R in R_grid:
            R = float(R)
            q = params_for_R(p, n, R, via)
            bad = check_assumptions(q)
            if bad:
                errors[(k, R)] = f"violates_assumptions:{bad}"
                continue
            try:
                sols = solve_asymmetric(q, n, m, k, observation=observation)
            except (NoConvergence, ArithmeticError, ValueError) as exc:
                errors[(k, R)] = f"{type(exc).__name__}: {exc}"
                continue
            for s in sols:
                rows.append({"k": k, "R": R, "branch": s.branch, "alpha1": s.alpha1,
                             "alpha2": s.alpha2, "beta": s.beta, "loss": s.loss,
                             "residual_max": s.residual_max})
    rows.sort(key=lambda r: (r["k"], r["R"], r["branch"]))
    return rows, errors
