import numpy as np
import pytest

from trotterkit.hamiltonians import heisenberg_chain, power_law_heisenberg
from trotterkit.local_obs import (
    cancellation_check,
    constrained_schedule,
    light_cone_planner,
    reduced_formula,
    shell_decomposition,
)
from trotterkit.pauli import PauliSum, commutator


def z_on(site, n):
    return PauliSum.from_label("".join("Z" if i == site else "I" for i in range(n)))


# -- shell decomposition --------------------------------------------------------


def test_shells_partition_nearest_neighbor():
    h = heisenberg_chain(10, seed=3)
    d = shell_decomposition(h, {0}, ell=2, gamma=3)
    assert d.dropped_weight == 0.0  # no NN term spans non-adjacent shells
    total = d.groups[0]
    for g in d.groups[1:]:
        total = total + g
    assert total.terms == h.total().terms


def test_shells_partition_power_law():
    h = power_law_heisenberg(10, alpha=4.0, seed=5)
    d = shell_decomposition(h, {0}, ell=2, gamma=3)
    # every elementary term lands in exactly one group or the dropped set
    kept = sum(g.coefficient_one_norm() for g in d.groups)
    assert kept + d.dropped_weight == pytest.approx(h.total().coefficient_one_norm())
    assert d.dropped_weight > 0  # long-range pairs spanning non-adjacent shells


def test_shell_parity_commutativity():
    h = heisenberg_chain(14, seed=7)
    d = shell_decomposition(h, {0}, ell=1, gamma=6)
    for a in range(6):
        for b in range(a + 2, 6, 2):
            assert commutator(d.groups[a], d.groups[b]).is_zero()


def test_far_groups_commute_with_observable():
    h = heisenberg_chain(10, seed=2)
    d = shell_decomposition(h, {0, 1}, ell=2, gamma=3)
    obs = z_on(0, 10) + z_on(1, 10) * 0.5
    for g in d.groups[1:]:
        assert commutator(g, obs).is_zero()


def test_shell_requires_support():
    h = heisenberg_chain(6, seed=1)
    with pytest.raises(ValueError):
        shell_decomposition(h, set(), ell=1, gamma=3)


# -- constrained schedule ---------------------------------------------------------


def test_constrained_schedule_base2():
    s = constrained_schedule(2, 3, base_order=2)
    assert s.upsilon == 2 and s.gamma == 3
    # odd stage applies summand 2 first: permutation (2,1,3) in 1-based labels
    assert s.perms[0] == (1, 0, 2)
    assert s.perms[1] == (0, 2, 1)
    assert np.max(np.abs(s.per_summand_sums() - 1.0)) < 1e-12


def test_constrained_schedule_base4():
    s = constrained_schedule(10, 11, base_order=4)
    assert s.upsilon == 10 and s.gamma == 11
    assert np.max(np.abs(s.per_summand_sums() - 1.0)) < 1e-12
    for v, perm in enumerate(s.perms):
        first = perm[0]
        if (v + 1) % 2 == 1:
            assert (first + 1) % 2 == 0  # odd stages start with an even summand
        else:
            assert first == 0  # even stages start with summand 1


def test_constrained_schedule_requires_gamma():
    with pytest.raises(ValueError):
        constrained_schedule(2, 4, base_order=2)
    with pytest.raises(ValueError):
        constrained_schedule(3, 4, base_order=2)


def test_reduced_formula_counts():
    s = constrained_schedule(2, 3, base_order=2)
    red = reduced_formula(s)
    assert len(red.exponential_sequence(merge=False)) == 3  # 1 + 2
    s4 = constrained_schedule(10, 11, base_order=4)
    red4 = reduced_formula(s4)
    assert len(red4.exponential_sequence(merge=False)) == sum(range(1, 11))  # 55


def test_reduced_formula_keeps_triangular_summands():
    s = constrained_schedule(2, 3, base_order=2)
    red = reduced_formula(s)
    seq = red.exponential_sequence(merge=False)
    # application-order stage 1 keeps summands {1,2}, stage 2 keeps {1}
    assert [g for g, _ in seq] == [1, 0, 0]


def test_retained_generators_stay_inside_reach():
    # every retained exponential's generator is supported within the first
    # upsilon shells (B_{upsilon*ell})
    h = heisenberg_chain(12, seed=4)
    d = shell_decomposition(h, {0}, ell=2, gamma=3)
    s = constrained_schedule(2, 3, base_order=2)
    red = reduced_formula(s)
    upsilon = 2
    kept_groups = {g for g, _ in red.exponential_sequence()}
    for g in kept_groups:
        for site in d.groups[g].support():
            assert d.shell_of_site[site] <= upsilon


# -- cancellation identity ---------------------------------------------------------


def test_cancellation_identity_t0():
    h = heisenberg_chain(8, seed=1)
    d = shell_decomposition(h, {0}, ell=2, gamma=3)
    assert cancellation_check(d, z_on(0, 8), 0.0) <= 1e-12


def test_cancellation_identity_n12():
    h = heisenberg_chain(12, seed=11)
    d = shell_decomposition(h, {0}, ell=2, gamma=3)
    assert cancellation_check(d, z_on(0, 12), 0.3) <= 1e-10


def test_cancellation_identity_random_cases():
    # sampled smaller than the acceptance sweep, same contract
    from trotterkit.rng import SplitMix64

    gen = SplitMix64(99)
    for seed in range(4):
        t = 0.5 * abs(gen.uniform_signed())
        h = heisenberg_chain(10, seed=seed)
        d = shell_decomposition(h, {0}, ell=2, gamma=3)
        assert cancellation_check(d, z_on(0, 10), t) <= 1e-10


def test_cancellation_rejects_outside_observable():
    h = heisenberg_chain(8, seed=1)
    d = shell_decomposition(h, {0}, ell=2, gamma=3)
    with pytest.raises(ValueError):
        cancellation_check(d, z_on(5, 8), 0.1)


# -- light-cone planner -------------------------------------------------------------


def test_planner_gate_exponent_nearest_neighbor_limit():
    plan = light_cone_planner(alpha=1e6, d=1, p=4, t=10.0, eps=1e-3)
    assert plan.gate_exponent_t_asymptotic == pytest.approx(2.0, abs=1e-3)


def test_planner_gate_exponent_alpha4():
    plan = light_cone_planner(alpha=4.0, d=1, p=100, t=10.0, eps=1e-3)
    assert plan.gate_exponent_t_asymptotic == pytest.approx(10.0 / 3.0, abs=1e-9)
    # finite-p exponent approaches the asymptotic one
    assert plan.gate_exponent_t == pytest.approx(10.0 / 3.0, rel=0.05)


def test_planner_lightcone_exponent():
    plan = light_cone_planner(alpha=3.0, d=1, p=200, t=5.0, eps=1e-2)
    assert plan.lr_lightcone_exponent_asymptotic == pytest.approx(0.5)
    assert plan.lr_lightcone_exponent == pytest.approx(0.5, abs=0.02)


def test_planner_regime_validation():
    with pytest.raises(ValueError):
        light_cone_planner(alpha=2.0, d=1, p=4, t=1.0, eps=1e-3)
    with pytest.raises(ValueError):
        light_cone_planner(alpha=4.5, d=2, p=1, t=1.0, eps=1e-3)


def test_planner_outputs_consistent():
    plan = light_cone_planner(alpha=4.0, d=1, p=4, t=10.0, eps=1e-3)
    assert plan.r >= 1 and plan.ell >= 1
    assert plan.radius == pytest.approx(1.0 + plan.r * plan.gamma * plan.ell)
    assert plan.lr_bound(2.0) > plan.lr_bound(4.0)  # decays with distance
