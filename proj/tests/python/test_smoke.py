from fractions import Fraction

import pytest

import weylwalk


def frac(s):
    return Fraction(s)


def test_describe():
    d = weylwalk.describe("B", 3)
    assert d["name"] == "B3"
    assert d["rank"] == 3
    assert d["ambient_dim"] == 3
    assert d["weyl_order"] == 48
    assert d["num_positive_roots"] == 9
    assert d["minuscule_indices"] == [3]
    assert d["fundamental_weights"][2] == "1/2,1/2,1/2"
    assert weylwalk.describe("D", 4)["minuscule_indices"] == [1, 3, 4]


def test_weights_and_dims():
    steps = weylwalk.weights("B", 3)
    assert len(steps) == 8
    assert steps[0] == "1/2,1/2,1/2"
    assert steps[-1] == "-1/2,-1/2,-1/2"
    assert weylwalk.dim_irrep("B", 3, "1/2,1/2,1/2") == 8
    assert weylwalk.dim_irrep("B", 3, "1,1,1") == 35
    assert weylwalk.dim_irrep("E6", 6, weylwalk.describe("E6", 6)["fundamental_weights"][0]) == 27
    assert weylwalk.count_paths("A", 1, 1, "0,0", "2,2", 4) == 2
    assert weylwalk.count_paths("A", 1, 1, "0,0", "4,4", 8) == 14


def test_step_distribution_exact():
    sd = weylwalk.steps("B", 3, 3, ["1/2", "1/3", "1/5"])
    assert frac(sd["sigma"]) == Fraction(496, 375)
    assert sd["drift"] == "29/62,7/16,1/3"
    probs = {s: frac(p) for s, p in zip(sd["steps"], sd["probs"])}
    assert probs["-1/2,-1/2,-1/2"] == Fraction(1, 2976)
    assert sum(probs.values()) == 1
    assert sd["x"] == pytest.approx([30.0, 15.0, 5.0], rel=1e-12)


def test_kernels():
    row = weylwalk.kernel_zero_drift("B", 3, 3, "1/2,1/2,1/2")
    assert {t: frac(p) for t, p in row.items()} == {
        "1,1,1": Fraction(35, 64),
        "1,1,0": Fraction(21, 64),
        "1,0,0": Fraction(7, 64),
        "0,0,0": Fraction(1, 64),
    }
    drifted = weylwalk.kernel_drifted("B", 3, 3, ["1/2", "1/3", "1/5"], "1/2,1/2,1/2")
    assert sum(drifted.values()) == pytest.approx(1.0, abs=1e-10)
    finite = weylwalk.finite_horizon_row("B", 3, 3, ["1"], "1/2,1/2,1/2", 2)
    assert sum(frac(p) for p in finite.values()) == 1


def test_survival_and_h():
    psi = weylwalk.survival_series("A", 1, 1, ["1"], n=6)
    assert [frac(p) for p in psi] == [
        Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(3, 8),
        Fraction(3, 8), Fraction(5, 16), Fraction(5, 16),
    ]
    assert frac(weylwalk.h_n("B", 3, 3, ["1"], "1/2,1/2,1/2", 4)) == Fraction(7, 2)


def test_simulation_deterministic():
    a = weylwalk.estimate_survival("B", 3, 3, ["1"], n=10, trials=2000, seed=7)
    b = weylwalk.estimate_survival("B", 3, 3, ["1"], n=10, trials=2000, seed=7)
    assert a == b
    assert 0 <= a["value"] <= 1 and a["trials"] == 2000
    traj = weylwalk.simulate_walk("B", 3, 3, ["1"], n=5, seed=3)
    assert len(traj["points"]) == 6
    assert traj["points"][0] == "0,0,0"
    assert traj["exited_at"] is None or 1 <= traj["exited_at"] <= 5


def test_tail_fit():
    series = [(n, n ** -0.5) for n in range(1, 201)]
    fit = weylwalk.tail_fit(series, 50, 200)
    assert fit["slope"] == pytest.approx(-0.5, abs=1e-9)


def test_errors():
    with pytest.raises(weylwalk.WeylwalkError):
        weylwalk.describe("F", 4)
    with pytest.raises(weylwalk.WeylwalkError):
        weylwalk.dim_irrep("B", 3, "0,1,0")
    with pytest.raises(weylwalk.WeylwalkError):
        weylwalk.steps("B", 3, 3, ["0"])
