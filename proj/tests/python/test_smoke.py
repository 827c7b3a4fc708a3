import json
import math

import pytest

import pyhetamp as hp


def test_q_function_point_values():
    assert hp.q_function("vacuum", 0j) == pytest.approx(1 / math.pi, abs=1e-12)
    assert hp.q_function("coherent:1.0", 1.0 + 0j) == pytest.approx(
        1 / math.pi, abs=1e-10
    )


def test_heterodyne_moments():
    # ideal detection: first intensity moment carries one unit of excess noise
    assert hp.heterodyne_moment("coherent-nbar:4", "abs2", 1) == pytest.approx(
        5.0, abs=1e-9
    )
    # vacuum quadrature marginal has variance 1/2
    assert hp.heterodyne_moment("vacuum", "re_alpha", 2) == pytest.approx(
        0.5, abs=1e-12
    )


def test_sampling_is_deterministic():
    a = hp.heterodyne_sample("coherent-nbar:2", 200, seed=5)
    b = hp.heterodyne_sample("coherent-nbar:2", 200, seed=5)
    assert a == b
    assert len(a) == 200


def test_preamp_moment_error_rate():
    # the rescaled first moment misses the photon number by exactly 1/g
    for g in (2, 8):
        m = hp.preamp_moment("number", "coherent-nbar:4", g, 1, "abs2")
        assert m == pytest.approx(4 + 1 / g, abs=1e-10)


def test_moment_report_verdicts():
    rep = json.loads(
        hp.moment_report("number", [2, 4, 8], ["coherent-nbar:4"])
    )
    assert rep["verdict"] == "converges"

    cx = json.loads(hp.counterexample_report())
    assert cx["verdict"] == "diverges-from-target"
    for state in cx["states"]:
        assert state["asym_ratio"] == pytest.approx(1.25, abs=1e-9)


def test_bch_and_stirling():
    out = hp.bch_coefficients(0.1 + 0.2j, -0.3j, 0.05)
    assert out["residual"] < 1e-12

    rows = hp.stirling_first_kind(5)
    assert rows[5][2] == -50
    assert rows[3][1] == 2


def test_error_mapping():
    with pytest.raises(hp.HetampConfigError):
        hp.heterodyne_moment("nonsense:1", "abs2", 1)
