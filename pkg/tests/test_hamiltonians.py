import numpy as np
import pytest

from trotterkit.hamiltonians import (
    LatticeTermTensor,
    group_terms,
    heisenberg_chain,
    induced_one_norm,
    one_norm,
    power_law_heisenberg,
    power_law_lattice_sum,
    term_tensor,
    tfim,
    truncate_power_law,
)
from trotterkit.pauli import commutator
from trotterkit.rng import SplitMix64, random_fields

from oracles import dense_commutator, dense_of_terms, expm_ref, norm_ref


def total_dense(h):
    return h.total().to_dense()


# -- prng ---------------------------------------------------------------------


def test_splitmix64_known_values():
    # reference outputs for seed 1234567 (computed from the documented recurrence)
    gen = SplitMix64(1234567)
    first = gen.next_uint64()
    gen2 = SplitMix64(1234567)
    assert gen2.next_uint64() == first
    vals = random_fields(1000, 42)
    assert all(-1.0 <= v < 1.0 for v in vals)
    assert random_fields(5, 42) == vals[:5]


# -- heisenberg chain -----------------------------------------------------------


def test_heisenberg_chain_zero_field_n2():
    h = heisenberg_chain(2, seed=0, fields=[0.0])
    dense = total_dense(h)
    oracle = dense_of_terms([(1, "XX"), (1, "YY"), (1, "ZZ")])
    assert np.max(np.abs(dense - oracle)) < 1e-12


def test_heisenberg_chain_determinism():
    h1 = heisenberg_chain(8, seed=99)
    h2 = heisenberg_chain(8, seed=99)
    assert h1.field_values == h2.field_values
    assert heisenberg_chain(8, seed=100).field_values != h1.field_values


def test_heisenberg_chain_term_count():
    h = heisenberg_chain(12, seed=5)
    assert len(h.groups) == 3 * 11 + 11
    assert h.total().num_terms() == 44


def test_heisenberg_chain_is_hermitian():
    h = heisenberg_chain(6, seed=1)
    dense = total_dense(h)
    assert np.max(np.abs(dense - dense.conj().T)) < 1e-12


def test_heisenberg_rejects_small_n():
    with pytest.raises(ValueError):
        heisenberg_chain(1, seed=0)


# -- power law -------------------------------------------------------------------


def test_power_law_large_alpha_is_effectively_nearest_neighbor():
    h = power_law_heisenberg(5, alpha=50.0, seed=3)
    for g in h.groups:
        for p in g.packets:
            for (x, z), c in p.terms.items():
                sites = [i for i in range(5) if ((x | z) >> i) & 1]
                if len(sites) == 2 and sites[1] - sites[0] >= 2:
                    assert abs(c) < 1e-15


def test_power_law_alpha_zero_uniform():
    h = power_law_heisenberg(3, alpha=0.0, seed=1, fields=[0.0, 0.0])
    tensor = term_tensor(h)
    for (j, k), v in tensor.entries.items():
        if j != k:
            assert v == pytest.approx(3.0)  # ||XX+YY+ZZ|| = 3 per pair


def test_power_law_alpha4_coupling():
    h = power_law_heisenberg(3, alpha=4.0, seed=1, fields=[0.0, 0.0])
    xx_02 = [g for g in h.groups if g.label == "XX:0-2"]
    assert len(xx_02) == 1
    ((_, coeff),) = list(xx_02[0].packets[0].terms.items())
    assert coeff == pytest.approx(1.0 / 16.0)


# -- tfim -------------------------------------------------------------------------


def test_tfim_empty_couplings():
    a, b = tfim({}, {0: 1.0, 1: 1.0})
    assert a.is_zero()
    assert b.coefficient_one_norm() == pytest.approx(2.0)


def test_tfim_chain_norms():
    a, b = tfim({(0, 1): 1.0, (1, 2): 1.0}, {0: 1.0, 1: 1.0, 2: 1.0})
    assert a.coefficient_one_norm() == pytest.approx(2.0)
    assert b.coefficient_one_norm() == pytest.approx(3.0)


def test_tfim_commutator_oracle():
    # [Z0Z1, X0 + X1] against the dense oracle
    a, b = tfim({(0, 1): 1.0}, {0: 1.0, 1: 1.0})
    got = commutator(a, b).to_dense()
    oracle = dense_commutator(dense_of_terms([(1, "ZZ")]), dense_of_terms([(1, "XI"), (1, "IX")]))
    assert np.max(np.abs(got - oracle)) < 1e-12


def test_tfim_rejects_negative():
    with pytest.raises(ValueError):
        tfim({(0, 1): -0.5}, {})


# -- grouping ---------------------------------------------------------------------


def test_even_odd_grouping_n4():
    h = heisenberg_chain(4, seed=7)
    g = group_terms(h, "even-odd")
    assert g.num_groups == 2
    a, b = g.groups
    # A: bonds (0,1),(2,3) + fields on sites 0 and 2; B: bond (1,2) + field on 1
    assert len(a.packets) == 2 and len(b.packets) == 1
    assert a.packets[0].support() == frozenset({0, 1})
    assert a.packets[1].support() == frozenset({2, 3})
    assert b.packets[0].support() == frozenset({1, 2})
    assert np.max(np.abs(total_dense(g) - total_dense(h))) < 1e-12


def test_xyz_grouping():
    h = heisenberg_chain(5, seed=2)
    g = group_terms(h, "x-y-z")
    assert g.num_groups == 3
    assert [grp.label for grp in g.groups] == ["X", "Y", "Z+field"]
    assert np.max(np.abs(total_dense(g) - total_dense(h))) < 1e-12
    # X group holds only XX terms
    for p in g.groups[0].packets:
        for (x, z), _ in p.terms.items():
            assert z == 0


def test_per_term_grouping():
    h = heisenberg_chain(4, seed=7)
    g = group_terms(h, "per-term")
    assert g.num_groups == len(h.groups)


def test_custom_label_grouping():
    h = heisenberg_chain(3, seed=7)
    labels = ["L1"] * 3 + ["L2"] * 3 + ["L1"] * 2
    g = group_terms(h, labels)
    assert g.num_groups == 2
    assert np.max(np.abs(total_dense(g) - total_dense(h))) < 1e-12


def test_within_group_commutativity():
    h = heisenberg_chain(7, seed=13)
    for strategy in ("even-odd", "x-y-z"):
        g = group_terms(h, strategy)
        for grp in g.groups:
            for i in range(len(grp.packets)):
                for j in range(i + 1, len(grp.packets)):
                    assert commutator(grp.packets[i], grp.packets[j]).is_zero()


def test_even_odd_requires_chain():
    h = power_law_heisenberg(4, alpha=2.0, seed=0)
    with pytest.raises(ValueError):
        group_terms(h, "even-odd")


# -- truncation -------------------------------------------------------------------


def test_truncate_noop_cases():
    h = power_law_heisenberg(4, alpha=4.0, seed=1)
    trunc, removed = truncate_power_law(h, ell=3)
    assert removed == 0.0
    assert np.max(np.abs(total_dense(trunc) - total_dense(h))) < 1e-12
    nn = heisenberg_chain(5, seed=1)
    trunc2, removed2 = truncate_power_law(nn, ell=1)
    assert removed2 == 0.0


def test_truncate_removed_weight():
    h = power_law_heisenberg(4, alpha=4.0, seed=1)
    trunc, removed = truncate_power_law(h, ell=1)
    # dropped pairs: (0,2),(1,3) at distance 2, (0,3) at distance 3, 3 flavors each
    expected = 3 * (2 * 2.0**-4 + 3.0**-4)
    assert removed == pytest.approx(expected)
    # triangle inequality: dense norm of the difference is below the removed weight
    diff = total_dense(h) - total_dense(trunc)
    assert norm_ref(diff) <= removed + 1e-12


def test_truncation_distance_bound():
    # || e^{-itH} - e^{-itH~} || <= t * ||H - H~||
    h = power_law_heisenberg(5, alpha=3.0, seed=2)
    trunc, removed = truncate_power_law(h, ell=1)
    hd, td = total_dense(h), total_dense(trunc)
    for t in (0.1, 1.0):
        gap = norm_ref(expm_ref(-1j * t * hd) - expm_ref(-1j * t * td))
        assert gap <= t * norm_ref(hd - td) + 1e-10
        assert gap <= t * removed + 1e-10


def test_truncate_requires_geometry():
    from trotterkit.hamiltonians import GroupedHamiltonian, TermGroup
    from trotterkit.pauli import PauliSum

    bare = GroupedHamiltonian(2, [TermGroup("a", (PauliSum.from_label("XX"),))])
    with pytest.raises(ValueError):
        truncate_power_law(bare, 1)


# -- tensors and lattice sums -----------------------------------------------------


def test_tensor_single_entry():
    t = LatticeTermTensor(2, {(0, 1): 3.0})
    assert one_norm(t) == 3.0
    assert induced_one_norm(t) == 3.0


def test_tensor_uniform_all_to_all():
    n = 7
    t = LatticeTermTensor(2, {(i, j): 1.0 for i in range(n) for j in range(i + 1, n)})
    assert one_norm(t) == pytest.approx(n * (n - 1) / 2)
    assert induced_one_norm(t) == pytest.approx(n - 1)


def test_power_law_induced_norm_saturates():
    # for alpha > d the induced 1-norm stays bounded as n grows
    values = []
    for n in (25, 50, 100, 200):
        h = power_law_heisenberg(n, alpha=2.0, seed=1, fields=[0.0] * (n - 1))
        values.append(induced_one_norm(term_tensor(h)))
    assert values[-1] <= values[0] * 1.2
    assert values[-1] - values[-2] < 0.05 * values[-1]


def test_lattice_sum_d1_alpha2():
    # oracle: partial sums of 2 * zeta(2) = pi^2 / 3
    assert power_law_lattice_sum(10_000, 1, 2.0) == pytest.approx(np.pi**2 / 3, abs=1e-3)


def test_lattice_sum_alpha0_counts():
    assert power_law_lattice_sum(7, 1, 0.0) == 14
    assert power_law_lattice_sum(3, 2, 0.0) == 48  # 7^2 - 1


def test_lattice_sum_tail():
    # oracle: 2 * sum_{j>=10} j^-2 via direct partial sums
    tail = sum(2.0 / j**2 for j in range(10, 200_000))
    got = power_law_lattice_sum(200_000, 1, 2.0, tail_from=10.0)
    assert got == pytest.approx(tail, abs=1e-4)
    assert got == pytest.approx(0.2100, abs=2e-3)


def test_term_tensor_heisenberg_norms():
    h = heisenberg_chain(4, (5), fields=[0.5, -0.25, 0.125])
    t = term_tensor(h)
    assert t.entries[(0, 1)] == pytest.approx(3.0)
    assert t.entries[(0, 0)] == pytest.approx(0.5)
    assert t.entries[(1, 1)] == pytest.approx(0.25)
