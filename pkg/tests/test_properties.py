"""Invariants over randomly drawn admissible parameter sets."""

import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from announcegame.closed_form import (Delta_m, Gamma_m, enumerate_symmetric_equilibria,
                                      single_validator_equilibria, symmetric_candidate)
from announcegame.model import ATTACK, FREE_RIDE, HONEST, VERIFY, StrategyProfile
from announcegame.oracle import (best_response_check, expected_utility_aggregator,
                                 expected_utility_validator, is_equilibrium)
from announcegame.params import GameParams, check_assumptions


@st.composite
def game_params(draw, n=st.integers(1, 6)):
    Z = draw(st.floats(10, 2000))
    S = draw(st.floats(10, 2000))
    B = draw(st.floats(0, 0.95)) * Z
    delta = draw(st.floats(0.05, 1))
    T = draw(st.floats(0, 0.95)) * delta * S
    p = GameParams(Z=Z, S=S, B=B, T=T, C=draw(st.floats(0.01, 100)), V=draw(st.floats(0, 1000)),
                   delta=delta, f_p=draw(st.floats(0, 1)), f_n=draw(st.floats(0, 1)),
                   lam=draw(st.floats(0, 1)), n=draw(n))
    assume(check_assumptions(p) is None)
    return p


@given(game_params(n=st.just(1)))
def test_single_validator_results_are_equilibria(p):
    res = single_validator_equilibria(p)
    assume(all(r.beta <= 1 for r in res))
    assert 1 <= len(res) <= 3
    for r in res:
        assert is_equilibrium(best_response_check(p, r.profile, 1e-7), 1e-7)


@settings(max_examples=40, deadline=None)
@given(game_params(n=st.integers(2, 6)))
def test_feasible_symmetric_results_are_equilibria(p):
    for r in enumerate_symmetric_equilibria(p):
        scale = max(1.0, p.Z, p.S, p.V, p.T, p.C)
        assert is_equilibrium(best_response_check(p, r.profile, 1e-9 * scale), 1e-9 * scale)
        # every validator sees the same miss probability A
        assert r.loss == pytest.approx(r.beta * p.A * p.Z, rel=1e-9)


@given(game_params(n=st.integers(2, 6)))
def test_n_ne_needs_only_beta_feasibility(p):
    cand = symmetric_candidate(p, p.n, p.n)
    assert [name for name, _, _ in cand.feasibility] == ["beta_denominator_positive", "beta_le_1"]


@given(game_params(n=st.integers(3, 8)), st.data())
def test_beta_ordering_follows_delta(p, data):
    m = data.draw(st.integers(1, p.n - 1))
    lo, hi = symmetric_candidate(p, p.n, m), symmetric_candidate(p, p.n, m + 1)
    assume(lo.feasibility[0][1] and hi.feasibility[0][1])
    b_lo, b_hi = lo.extra["beta_raw"], hi.extra["beta_raw"]
    d = Delta_m(p.A, m)
    assume(abs(lo.extra["R"] - d) > 1e-9)
    assert (b_lo < b_hi) == (lo.extra["R"] < d)


@given(st.floats(0.01, 0.99), st.integers(2, 200))
def test_gamma_below_delta(A, m):
    g, d = Gamma_m(A, m), Delta_m(A, m)
    assert 0.5 < g < d


@given(game_params(n=st.integers(1, 6)), st.data())
def test_aggregator_indifferent_at_every_m_ne(p, data):
    m = data.draw(st.integers(1, p.n))
    r = symmetric_candidate(p, p.n, m)
    ua = expected_utility_aggregator(p, r.profile, ATTACK)
    assert ua == pytest.approx(expected_utility_aggregator(p, r.profile, HONEST), rel=1e-9, abs=1e-9)


@given(game_params(n=st.integers(2, 6)), st.data())
def test_validator_utilities_permutation_invariant(p, data):
    alphas = data.draw(st.lists(st.floats(0, 1), min_size=p.n, max_size=p.n))
    beta = data.draw(st.floats(0, 1))
    perm = data.draw(st.permutations(range(p.n)))
    s = StrategyProfile.of(beta, alphas)
    t = StrategyProfile.of(beta, [alphas[j] for j in perm])
    for new_i, old_i in enumerate(perm):
        for a in (VERIFY, FREE_RIDE):
            assert expected_utility_validator(p, t, new_i, a) == pytest.approx(
                expected_utility_validator(p, s, old_i, a), rel=1e-12, abs=1e-12)


@given(st.floats(0, 1), st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=5))
def test_profile_round_trip(beta, pairs):
    alphas = [a for a, _ in pairs]
    gammas = [(1 - a) * g if len(pairs) == 1 else 0.0 for a, g in pairs]
    s = StrategyProfile.of(beta, alphas, gammas).validate()
    assert StrategyProfile.from_dict(s.to_dict()) == s
    assert all(math.isclose(sum(v.prob(a) for a in (VERIFY, FREE_RIDE)) + v.gamma, 1.0)
               for v in s.validators)
