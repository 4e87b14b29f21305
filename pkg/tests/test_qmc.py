import math

import numpy as np
import pytest

from trotterkit.hamiltonians import tfim
from trotterkit.pauli import PauliSum
from trotterkit.qmc import (
    QmcPlan,
    ferromagnet_trotter_number,
    matchgates,
    multiplicative_factor_check,
    partition_ratio,
    tfim_trotter_number,
)
from trotterkit.rng import SplitMix64

from oracles import dense_of_terms, expm_ref, norm_ref


def random_tfim(rng, n):
    j = {
        (u, v): float(rng.uniform(0, 1))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.uniform() < 0.6
    }
    hh = {u: float(rng.uniform(0, 1)) for u in range(n)}
    return tfim(j, hh)


# -- planner ---------------------------------------------------------------------


def test_tfim_plan_commuting():
    # B = 0 removes both commutator constraints
    a, _ = tfim({(0, 1): 1.0}, {0: 0.0, 1: 0.0})
    b = PauliSum.zero(2)
    plan = tfim_trotter_number(a, b, t=1.0, eps=0.1)
    assert plan.r == 4  # next power of 2 >= 4*1*(1+0)
    assert plan.power_of_two


def test_tfim_plan_n2_constraints():
    a, b = tfim({(0, 1): 1.0}, {0: 1.0, 1: 1.0})
    plan = tfim_trotter_number(a, b, t=1.0, eps=0.1)
    # ||A|| = 1, ||B|| = 2 so the norm constraint is 12; dense oracle for the others
    assert plan.constraints["norm"] == pytest.approx(12.0)
    ad = dense_of_terms([(1, "ZZ")])
    bd = dense_of_terms([(1, "XI"), (1, "IX")])
    aab = norm_ref(ad @ (ad @ bd - bd @ ad) - (ad @ bd - bd @ ad) @ ad)
    bba = norm_ref(bd @ (bd @ ad - ad @ bd) - (bd @ ad - ad @ bd) @ bd)
    assert plan.constraints["comm_aab"] == pytest.approx(math.sqrt(aab / 0.1), rel=1e-9)
    assert plan.constraints["comm_bba"] == pytest.approx(math.sqrt(2 * bba / 0.3), rel=1e-9)
    expected = max(plan.constraints.values())
    assert plan.r >= expected and plan.r < 2 * expected
    assert plan.r & (plan.r - 1) == 0


def test_tfim_scaling_exponent():
    # r = O(n^2 j + n^{3/2} j^{3/2} eps^{-1/2}): slope-check over n = 4..10
    rs = []
    ns = list(range(4, 11))
    for n in ns:
        a, b = tfim(
            {(u, v): 1.0 for u in range(n) for v in range(u + 1, n)},
            {u: 1.0 for u in range(n)},
        )
        plan = tfim_trotter_number(a, b, t=1.0, eps=0.1, norm_mode="coeff-1norm")
        rs.append(plan.r)
    slope = np.polyfit(np.log(ns), np.log(rs), 1)[0]
    assert 1.5 <= slope <= 2.6


def test_qmc_plan_validates_constraints():
    with pytest.raises(ValueError):
        QmcPlan(r=2, constraints={"norm": 5.0})


# -- multiplicative check -----------------------------------------------------------


def test_multiplicative_commuting_is_one():
    a, _ = tfim({(0, 1): 1.0}, {0: 0.0, 1: 0.0})
    b = PauliSum.from_label("ZI", 0.5)  # commutes with ZZ
    mx, mn = multiplicative_factor_check(a, b, t=1.0, r=4)
    assert mx == pytest.approx(1.0, abs=1e-10)
    assert mn == pytest.approx(1.0, abs=1e-10)


def test_multiplicative_check_within_plan_band():
    gen = SplitMix64(5)
    rng = np.random.default_rng(7)
    for n in (3, 4, 5, 6):
        a, b = random_tfim(rng, n)
        if a.is_zero() or b.is_zero():
            continue
        plan = tfim_trotter_number(a, b, t=1.0, eps=0.1)
        mx, mn = multiplicative_factor_check(a, b, 1.0, plan.r)
        assert mx <= math.exp(0.1) + 1e-9
        assert mn >= math.exp(-0.1) - 1e-9


def test_multiplicative_deviation_shrinks_quadratically():
    rng = np.random.default_rng(11)
    a, b = random_tfim(rng, 4)
    devs = []
    for r in (64, 128, 256):
        mx, _ = multiplicative_factor_check(a, b, 1.0, r)
        devs.append(abs(math.log(mx)))
    assert devs[0] / devs[1] == pytest.approx(4.0, rel=0.3)
    assert devs[1] / devs[2] == pytest.approx(4.0, rel=0.3)


# -- partition ratio ------------------------------------------------------------------


def test_partition_ratio_commuting():
    a, _ = tfim({(0, 1): 1.0}, {0: 0.0, 1: 0.0})
    b = PauliSum.from_label("IZ", 0.7)
    assert partition_ratio(a, b, 1.0, 2) == pytest.approx(1.0, abs=1e-10)


def test_partition_ratio_oracle():
    # direct trace oracle on small matrices
    rng = np.random.default_rng(3)
    a, b = random_tfim(rng, 3)
    ad = a.to_dense()
    bd = b.to_dense()
    r, t = 8, 1.0
    step = expm_ref(t / (2 * r) * ad) @ expm_ref(t / r * bd) @ expm_ref(t / (2 * r) * ad)
    z_prime = np.trace(np.linalg.matrix_power(step, r)).real
    z = np.trace(expm_ref(t * (ad + bd))).real
    assert partition_ratio(a, b, t, r) == pytest.approx(z_prime / z, rel=1e-9)


def test_partition_ratio_within_band_and_converges():
    rng = np.random.default_rng(9)
    a, b = random_tfim(rng, 5)
    plan = tfim_trotter_number(a, b, t=1.0, eps=0.1)
    ratio = partition_ratio(a, b, 1.0, plan.r)
    assert math.exp(-0.1) <= ratio <= math.exp(0.1)
    assert partition_ratio(a, b, 1.0, 2**12) == pytest.approx(1.0, abs=1e-4)


# -- matchgates ------------------------------------------------------------------------


def test_matchgate_g_at_zero_limit():
    # g(t) -> identity as t -> 0
    assert np.allclose(matchgates("g", 1e-9), np.eye(4), atol=1e-8)


def test_matchgate_f_closed_form():
    # f(e^t) = exp((t/2)(I + Z)) exactly
    for t in (0.3, -0.4, 1.1):
        z = np.diag([1.0, -1.0])
        expected = expm_ref((t / 2) * (np.eye(2) + z))
        assert np.max(np.abs(matchgates("f", t) - expected)) < 1e-12


def test_matchgate_g_h_second_order():
    # ||g(t) - exp(-(t/2)(-XX+YY))|| = O(t^2): slope-2 check
    xx = dense_of_terms([(1, "XX")])
    yy = dense_of_terms([(1, "YY")])
    for kind, gen in (("g", -xx + yy), ("h", -xx - yy)):
        errs = []
        for t in (0.1, 0.05, 0.025):
            errs.append(norm_ref(matchgates(kind, t) - expm_ref(-(t / 2) * gen)))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.25)
        assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.25)


def test_matchgate_param_range():
    with pytest.raises(ValueError):
        matchgates("g", 0.7)
    with pytest.raises(ValueError):
        matchgates("h", -0.1)
    with pytest.raises(ValueError):
        matchgates("q", 0.1)


# -- ferromagnet planner ------------------------------------------------------------------


def test_ferromagnet_plan_small_beta():
    plan = ferromagnet_trotter_number(4, beta=1e-9, eps=0.5)
    assert plan.r == 1


def test_ferromagnet_plan_values():
    plan = ferromagnet_trotter_number(10, beta=1.0, eps=0.1, c=1.0)
    assert plan.constraints["gate_domain"] == pytest.approx(2.0)
    assert plan.constraints["linear"] == pytest.approx(2400.0)
    assert plan.constraints["quadratic"] == pytest.approx(8000.0)
    assert plan.constraints["w_bound"] == pytest.approx(2 * 100 / math.sqrt(0.1), rel=1e-12)
    assert plan.r == 8000


def test_ferromagnet_asymptotic_shape():
    # r = O(n^2 ceil(beta)^2 / eps) at large beta
    r1 = ferromagnet_trotter_number(8, beta=4.0, eps=0.1).r
    r2 = ferromagnet_trotter_number(8, beta=8.0, eps=0.1).r
    assert r2 / r1 == pytest.approx(4.0, rel=0.05)
    r3 = ferromagnet_trotter_number(16, beta=4.0, eps=0.1).r
    assert r3 / r1 == pytest.approx(4.0, rel=0.05)
