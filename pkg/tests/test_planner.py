import math

import pytest

from trotterkit.planner import SimulationPlan, plan, power_law_r_exponent_n


def test_electronic_structure_plan():
    p = plan("electronic-structure", n=100, t=10.0, eps=1e-3, p=4)
    assert p.r == math.ceil((1000.0) ** 1.25 / 1e-3**0.25)
    assert p.gates == p.r * 100


def test_klocal_commuting_floor():
    p = plan("k-local", n=10, t=1.0, eps=1e-3, p=2, k=2, one_norm=0.0, induced_one_norm=0.0)
    assert p.r == 1


def test_klocal_values():
    p = plan("k-local", n=10, t=2.0, eps=1e-2, p=2, k=2, one_norm=5.0, induced_one_norm=1.5)
    expected = 1.5 * 5.0**0.5 * 2.0**1.5 / 1e-2**0.5
    assert p.r == math.ceil(expected)
    assert p.gates == p.r * 100


def test_power_law_truncated_cutoff():
    p = plan("power-law-truncated", n=1000, t=1000.0, eps=1.0, p=4, alpha=4.0, d=1)
    assert p.ell == 100  # (10^6)^{1/3}
    assert p.gates == p.r * 1000 * 100


def test_power_law_cutoff_clamped():
    p = plan("power-law-truncated", n=10, t=1e6, eps=1e-6, p=4, alpha=3.0, d=1)
    assert p.ell == 10  # clamped to n^{1/d}


def test_power_law_regimes_and_gate_exponent():
    # gate-count exponent in n is 2 for d <= alpha <= 2d
    n1, n2 = 64, 128
    g1 = plan("power-law", n=n1, t=1.0, eps=1e-3, p=64, alpha=1.5, d=1).gates
    g2 = plan("power-law", n=n2, t=1.0, eps=1e-3, p=64, alpha=1.5, d=1).gates
    slope = math.log(g2 / g1) / math.log(2)
    assert slope == pytest.approx(2.0, abs=0.1)


def test_power_law_exponent_continuity_at_alpha_d():
    for d in (1, 2, 3):
        below = power_law_r_exponent_n(d - 1e-9, d, 4)
        above = power_law_r_exponent_n(d + 1e-9, d, 4)
        assert below == pytest.approx(above, abs=1e-6)


def test_truncated_matches_quasilocal_at_large_alpha():
    # at alpha -> infinity the truncated gate exponent in (nt),
    # 1 + 1/p + d/(alpha-d), approaches the quasilocal 1 + 1/p within 1%
    p, d, alpha = 16, 1, 1e5
    e_trunc = 1 + 1 / p + d / (alpha - d)
    e_quasi = 1 + 1 / p
    assert e_trunc == pytest.approx(e_quasi, rel=0.01)
    # and the realized plans agree on ell collapsing to O(log) vs O(1) scale
    trunc = plan("power-law-truncated", n=256, t=1.0, eps=1e-3, p=p, alpha=alpha, d=d)
    quasi = plan("quasilocal", n=256, t=1.0, eps=1e-3, p=p, d=d)
    assert trunc.ell <= quasi.ell


def test_clustered_plan():
    p1 = plan("clustered", t=2.0, eps=1e-2, p=1, h_b=3.0, cc=4.0)
    assert p1.r == math.ceil(3.0 * 4.0 / 1e-2)
    assert p1.gates == p1.r * 4.0
    # r exponent in t: 1 + 1/p vs the first-order-analysis 2
    p4 = plan("clustered", t=2.0, eps=1e-2, p=4, h_b=3.0, cc=4.0)
    assert p4.r < p1.r


def test_monotonicity_in_t_and_eps():
    for model, kw in (
        ("electronic-structure", {"n": 20, "p": 2}),
        ("k-local", {"n": 20, "p": 2, "k": 2, "one_norm": 3.0, "induced_one_norm": 1.0}),
        ("power-law", {"n": 20, "p": 2, "alpha": 1.0, "d": 1}),
        ("power-law-truncated", {"n": 20, "p": 2, "alpha": 3.0, "d": 1}),
        ("quasilocal", {"n": 20, "p": 2, "d": 1}),
        ("clustered", {"p": 2, "h_b": 2.0, "cc": 2.0}),
    ):
        r_base = plan(model, t=1.0, eps=1e-3, **kw).r
        assert plan(model, t=2.0, eps=1e-3, **kw).r >= r_base
        assert plan(model, t=1.0, eps=1e-4, **kw).r >= r_base


def test_regime_validation():
    with pytest.raises(ValueError):
        plan("power-law-truncated", n=10, t=1.0, eps=1e-3, p=2, alpha=0.5, d=1)
    with pytest.raises(ValueError):
        plan("no-such-model", t=1.0, eps=1e-3, p=2)
    with pytest.raises(ValueError):
        SimulationPlan(model="x", r=5, gates=2.0)
