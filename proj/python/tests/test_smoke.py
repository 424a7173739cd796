import math

import pytest

import frailty_shapes as fs

POISSON2 = {"family": "poisson", "params": {"eta": 2}}
KPOINT = {"family": "kpoint", "params": {"support": [0, 1], "probs": [0.5, 0.5]}}
SHIFTED = {"family": "shifted", "params": {"inner": POISSON2, "p": 1}}
EXP1 = {"hazard": "exponential", "params": {"rate": 1}}


def test_laplace_at_zero():
    t = fs.laplace(POISSON2, 0.0)
    assert t["l0"] == pytest.approx(1.0)
    assert t["l1"] == pytest.approx(-2.0)
    assert t["l2"] == pytest.approx(6.0)


def test_rfv_values():
    assert fs.rfv(POISSON2, 1.0) == pytest.approx(math.e / 2, rel=1e-12)
    assert fs.rfv(KPOINT, math.log(2)) == pytest.approx(2.0, rel=1e-12)
    assert fs.crf(KPOINT, math.log(2)) == pytest.approx(3.0, rel=1e-12)
    assert fs.oracle_rfv(POISSON2, 1.0) == pytest.approx(fs.rfv_closed(POISSON2, 1.0), rel=1e-10)


def test_stationary_point_and_tail():
    points = fs.stationary_points(SHIFTED, 10.0)
    assert len(points) == 1
    where, kind = points[0]
    assert where == pytest.approx(math.log(2), abs=1e-10)
    assert kind == "max"
    assert fs.classify_tail(POISSON2) == "IncreasingToInfinity"
    assert fs.classify_tail(SHIFTED) == "DecreasingToZero"


def test_curve():
    c = fs.curve(POISSON2, [0.0, 1.0, 2.0])
    assert c["tail"] == "IncreasingToInfinity"
    assert c["rfv"] == pytest.approx([0.5, math.e / 2, math.e**2 / 2])
    assert c["crf"][0] == pytest.approx(1.5)


def test_survivor_pmf():
    z, p = fs.survivor_pmf(KPOINT, math.log(2))
    assert z == [0.0, 1.0]
    assert p == pytest.approx([2 / 3, 1 / 3])


def test_errors_carry_kind():
    with pytest.raises(fs.FrailtyError) as info:
        fs.rfv({"family": "poisson", "params": {"eta": -1}}, 0.0)
    assert fs.error_kind(info.value) == "ParameterOutOfRange"
    with pytest.raises(ValueError):
        fs.validate({"family": "nope", "params": {}})


def test_simulate_is_deterministic():
    cfg = {"family": POISSON2, "hazards": [EXP1], "n_clusters": 2000, "seed": 7}
    a, b = fs.simulate(cfg), fs.simulate(cfg)
    assert a == b
    assert all(math.isinf(t[0]) for z, t in zip(a["z"], a["times"]) if z == 0)
    assert a["cure_fraction"] == pytest.approx(math.exp(-2), abs=0.04)


def test_extensions():
    model = {
        "etas": [1, 2],
        "w": {"family": "gamma", "params": {"mean": 1, "variance": 0.5}},
        "hazards": [EXP1, EXP1],
    }
    assert fs.correlated_crf(model, [0.3, 2.0]) == pytest.approx(1.5, abs=1e-12)
    assert 0 < fs.frailty_correlation(model) <= 1
    tv = {"inner": {"family": "poisson", "params": {"eta": 4}}, "shift": {"kind": "exp_half", "value": 4}}
    assert fs.timevarying_rfv(tv, 30.0) == pytest.approx(0.25, abs=1e-6)
    pw = {"cutpoints": [], "segments": [POISSON2], "coupling": "independent", "hazards": [EXP1]}
    assert fs.piecewise_rfv(pw, [1.0]) == pytest.approx(math.e / 2, rel=1e-10)


def test_verify_subset_and_fault():
    report = fs.verify(only=["proposition1", "closed_form"])
    assert report["passed"]
    assert [c["id"] for c in report["criteria"]] == ["closed_form", "proposition1"]
    faulty = fs.verify(only=["oracle"], fault="shifted_sign")
    assert not faulty["passed"]
