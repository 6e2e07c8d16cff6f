import pytest

from announcegame.errors import BlindChallengeUnsupported, InvalidProfile
from announcegame.model import (ATTACK, BLIND, FREE_RIDE, HONEST, VERIFY, NonKycStake,
                                StrategyProfile, TieBreak, detected, payoff_multi,
                                payoff_nonkyc, payoff_single, payoff_tiebreak, round_payoffs)
from announcegame.params import REFERENCE


# reference: B=20, T=10, C=8, Z=200, S=100, dS=50, f_n V=5, lam=1
@pytest.mark.parametrize("a,v,expected", [
    (HONEST, FREE_RIDE, (20, 10)),
    (HONEST, VERIFY, (20, 2)),
    (HONEST, BLIND, (25, -5)),
    (ATTACK, FREE_RIDE, (200, 10)),
    (ATTACK, VERIFY, (-100, 42)),
    (ATTACK, BLIND, (-100, 50)),
])
def test_single_table(a, v, expected):
    assert payoff_single(REFERENCE, a, v) == pytest.approx(expected)


def test_lambda_scales_the_aggregator_side_only():
    p = REFERENCE.with_(lam=0.0)
    assert payoff_single(p, HONEST, BLIND) == pytest.approx((20, -5))


def test_multi_splits_bounty_and_reward():
    p = REFERENCE.with_(n=3)
    ua, uv = payoff_multi(p, ATTACK, [VERIFY, VERIFY, FREE_RIDE])
    assert ua == -100
    assert uv == pytest.approx([25 - 8, 25 - 8, -5])
    ua, uv = payoff_multi(p, ATTACK, [FREE_RIDE] * 3)
    assert ua == 200 and uv == pytest.approx([10 / 3] * 3)
    ua, uv = payoff_multi(p, HONEST, [VERIFY, FREE_RIDE, FREE_RIDE])
    assert ua == 20 and uv == pytest.approx([10 / 3 - 8, 10 / 3, 10 / 3])


def test_multi_with_one_validator_matches_single_table():
    for a in (HONEST, ATTACK):
        for v in (VERIFY, FREE_RIDE, BLIND):
            ua, uv = payoff_multi(REFERENCE, a, [v])
            assert (ua, uv[0]) == pytest.approx(payoff_single(REFERENCE, a, v))


def test_multi_rejects_blind_and_wrong_length():
    p = REFERENCE.with_(n=2)
    with pytest.raises(BlindChallengeUnsupported):
        payoff_multi(p, ATTACK, [BLIND, VERIFY])
    with pytest.raises(ValueError):
        payoff_multi(p, ATTACK, [VERIFY])


def test_tiebreak_only_changes_caught_cell():
    D, alpha, beta = -50.0, 0.626136, 0.2
    for a in (HONEST, ATTACK):
        for v in (VERIFY, FREE_RIDE):
            got = payoff_tiebreak(REFERENCE, D, alpha, beta, a, v)
            base = payoff_single(REFERENCE, a, v)
            if (a, v) == (ATTACK, VERIFY):
                assert got == pytest.approx((-100 + alpha * beta * 50, 42))
            else:
                assert got == base
    assert payoff_tiebreak(REFERENCE, D, alpha, beta, ATTACK, VERIFY)[0] == pytest.approx(-93.7386, abs=1e-4)


def test_nonkyc_equal_stakes_reduce_to_kyc():
    p = REFERENCE.with_(n=2)
    for a in (HONEST, ATTACK):
        for acts in ([VERIFY, VERIFY], [VERIFY, FREE_RIDE], [FREE_RIDE, FREE_RIDE]):
            assert payoff_nonkyc(p, a, acts, 50.0, [50.0, 50.0]) == pytest.approx(
                payoff_multi(p, a, acts))


def test_nonkyc_pro_rata():
    p = REFERENCE.with_(n=2)
    ua, uv = payoff_nonkyc(p, HONEST, [VERIFY, FREE_RIDE], 100.0, [50.0, 50.0])
    assert uv == pytest.approx([10 * 100 / 150 - 8, 10 * 50 / 150])
    ua, uv = payoff_nonkyc(p, ATTACK, [VERIFY, FREE_RIDE], 100.0, [50.0, 50.0])
    assert ua == -100 and uv == pytest.approx([42, -0.1 * 50])


def test_detected():
    assert not detected([FREE_RIDE, FREE_RIDE])
    assert detected([FREE_RIDE, VERIFY])
    assert detected([BLIND])


def test_profile_validation():
    with pytest.raises(InvalidProfile):
        StrategyProfile.of(1.2, [0.5]).validate()
    with pytest.raises(InvalidProfile):
        StrategyProfile.of(0.2, [1.2]).validate()
    with pytest.raises(InvalidProfile):
        StrategyProfile.of(0.2, [0.6, 0.5], [0.3, 0.0]).validate()
    with pytest.raises(InvalidProfile):
        StrategyProfile.of(0.2, [0.6, 0.5], variant="tie_break", payload=TieBreak(1.0)).validate()
    with pytest.raises(InvalidProfile):
        StrategyProfile.of(0.2, [0.6, 0.5], variant="non_kyc",
                           payload=NonKycStake(100.0, (50.0,))).validate()
    with pytest.raises(InvalidProfile):
        StrategyProfile.of(0.2, [0.6], variant="weird").validate()


@pytest.mark.parametrize("prof", [
    StrategyProfile.of(0.2, [0.6]),
    StrategyProfile.of(3 / 11, [0.0], [0.59]),
    StrategyProfile.of(0.2, [0.3, 0.3], variant="non_kyc", payload=NonKycStake(100.0, (50.0, 50.0))),
    StrategyProfile.of(0.2, [0.62], variant="tie_break", payload=TieBreak(-50.0)),
])
def test_profile_dict_round_trip(prof):
    assert StrategyProfile.from_dict(prof.to_dict()) == prof


def test_from_dict_malformed():
    with pytest.raises(InvalidProfile):
        StrategyProfile.from_dict({"validators": []})


def test_round_payoffs_dispatch():
    s = StrategyProfile.of(0.2, [0.62], variant="tie_break", payload=TieBreak(-50.0))
    ua, uv = round_payoffs(REFERENCE, s, ATTACK, [VERIFY])
    assert ua == pytest.approx(-100 + 0.62 * 0.2 * 50)
