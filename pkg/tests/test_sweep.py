import math

import pytest

from announcegame.analysis import Variant, all_equilibria, loss_minimal
from announcegame.errors import AssumptionViolated
from announcegame.params import REFERENCE
from announcegame.sweep import SweepSpec, evaluate, run_sweep, _point


@pytest.mark.parametrize("kw,name", [
    (dict(param="zeta"), "unknown_param"),
    (dict(targets=("loss",)), "unknown_target"),
    (dict(steps=1), "steps_lt_2"),
    (dict(start=5.0, stop=1.0), "start_ge_stop"),
    (dict(scale="cubic"), "unknown_scale"),
    (dict(scale="log", start=0.0), "log_scale_nonpositive"),
])
def test_spec_validation(kw, name):
    args = dict(param="S", start=1.0, stop=2.0, steps=3) | kw
    with pytest.raises(AssumptionViolated) as ei:
        SweepSpec(**args)
    assert ei.value.name == name


def test_grids():
    assert SweepSpec("S", 1, 100, 3, "log").grid() == pytest.approx([1, 10, 100])
    assert SweepSpec("n", 1, 4, 4).grid() == [1, 2, 3, 4]
    assert all(isinstance(x, int) for x in SweepSpec("m", 1, 9, 5).grid())


def test_violating_points_are_flagged_not_dropped():
    rows = run_sweep(REFERENCE.with_(n=2), SweepSpec("T", 10, 90, 5))
    assert len(rows) == 5
    flags = [r["violates_assumptions"] for r in rows]
    assert flags[0] == "" and flags[-1] == "deltaS_le_T"
    assert all(math.isnan(r["y"]) for r in rows if r["violates_assumptions"])


def test_worst_loss_targets_by_n():
    assert evaluate("loss_worst", _point(REFERENCE, Variant(), SweepSpec("C", 1, 2, 2), 8.0)) \
        == pytest.approx(16.0)
    pt = _point(REFERENCE, Variant(), SweepSpec("n", 1, 5, 2), 3)
    assert evaluate("loss_worst", pt) == pytest.approx(16.635993610199949, abs=1e-9)
    assert evaluate("loss_best", pt) == pytest.approx(13.714285714285714, abs=1e-9)
    assert evaluate("equilibrium_count", pt) == 3.0
    assert evaluate("beta", pt) == pytest.approx(0.20794992012749936, abs=1e-12)


def test_worst_loss_single_validator_takes_the_larger_branch():
    pt = _point(REFERENCE, Variant(), SweepSpec("C", 1, 20, 2), 120 / 11)
    assert evaluate("loss_worst", pt) == pytest.approx(22.354694, abs=1e-5)


def test_infeasible_points_give_nan():
    pt = _point(REFERENCE.with_(n=3), Variant(), SweepSpec("C", 1, 100, 2), 60.0)
    assert math.isnan(evaluate("loss_worst", pt))


def test_extension_targets():
    rows = run_sweep(REFERENCE, SweepSpec("D", -100, 100, 5, targets=("tiebreak_dEA_dZ",)))
    signs = [math.copysign(1, r["y"]) if r["y"] else 0 for r in rows]
    assert signs == [-1, -1, 0, 1, 1]
    rows = run_sweep(REFERENCE.with_(n=2), SweepSpec("V_star", 10, 90, 3, targets=("beta_nonkyc",)),
                     Variant.from_config({"kind": "non_kyc", "V_max": 100, "V_star": 50}))
    assert rows[1]["y"] == pytest.approx(0.16745916135794343)
    rows = run_sweep(REFERENCE.with_(n=2), SweepSpec("V_star", 10, 200, 2, targets=("beta_nonkyc",)))
    assert rows[-1]["violates_assumptions"] == "invalid_variant"


def test_tiebreak_target_without_D_is_an_input_error():
    with pytest.raises(AssumptionViolated):
        run_sweep(REFERENCE, SweepSpec("Z", 100, 200, 2, targets=("tiebreak_alpha",)))


def test_variant_config():
    assert Variant.from_config(None).kind == "kyc"
    v = Variant.from_config({"kind": "tie_break", "D": -5})
    assert v.tie_break.D == -5.0 and v.to_dict() == {"kind": "tie_break", "D": -5.0}
    for bad in ({"kind": "other"}, {"kind": "tie_break"},
                {"kind": "non_kyc", "V_max": 1, "V_star": 5}):
        with pytest.raises(AssumptionViolated):
            Variant.from_config(bad)


def test_all_equilibria_and_loss_minimal():
    res = all_equilibria(REFERENCE.with_(n=3))
    assert loss_minimal(res) == 0
    assert loss_minimal([]) is None
    with pytest.raises(AssumptionViolated):
        all_equilibria(REFERENCE.with_(n=2), Variant.from_config({"kind": "tie_break", "D": 1}))
