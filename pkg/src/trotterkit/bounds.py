"""The Trotter error bound hierarchy and bound-driven step counts.

Norm modes:
  dense-exact   exact spectral norms of whole nested commutators,
  coeff-1norm   coefficient 1-norms (any size, triangle-inequality upper bound),
  cluster-exact-innermost-triangle
                the innermost operand is expanded into its packets; each
                packet's nested commutator is evaluated exactly on its
                support window and the triangle inequality is applied only
                across packets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cluster import (
    PauliArray,
    WindowedGroups,
    commutator_arrays,
    pauli_sum_to_array,
    spectral_norm_array,
)
from .hamiltonians import GroupedHamiltonian, LatticeTermTensor, induced_one_norm, one_norm
from .opnorm import norm_in_mode
from .pauli import PauliSum, ad_power, commutator

R_SEARCH_CAP = 10_000_000

DENSE_EXACT = "dense-exact"
COEFF_1NORM = "coeff-1norm"
CLUSTER = "cluster-exact-innermost-triangle"


@dataclass
class BoundTerm:
    label: str
    coefficient: float
    norm: float


@dataclass
class BoundReport:
    value: float
    per_term: list[BoundTerm]
    norm_mode: str
    order_p: int
    t: float

    def check_consistency(self, tol: float = 1e-10) -> None:
        total = sum(term.coefficient * term.norm for term in self.per_term)
        if abs(total - self.value) > tol * max(1.0, abs(self.value)):
            raise AssertionError(f"per-term sum {total} != value {self.value}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "trotterkit/bound/1",
                "value": self.value,
                "norm_mode": self.norm_mode,
                "order_p": self.order_p,
                "t": self.t,
                "per_term": [
                    {"label": b.label, "coefficient": b.coefficient, "norm": b.norm}
                    for b in self.per_term
                ],
            }
        )


# -- 1-norm bound --------------------------------------------------------------


def one_norm_bound(
    group_norms, upsilon: int, p: int, t: float, anti_hermitian: bool
) -> float:
    """Taylor-remainder bound on ||S(t) - e^{tH}|| from summand norms alone.

    (t^{p+1}/(p+1)!) [ (Y*L)^{p+1} e^{t*Y*L} + L^{p+1} e^{t*L} ] with
    L = sum of group norms and Y the stage count; both exponential factors
    are 1 when the summands are anti-Hermitian.
    """
    norms = [float(v) for v in group_norms]
    if any(v < 0 for v in norms):
        raise ValueError("group norms must be nonnegative")
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    if upsilon < 1 or p < 1:
        raise ValueError("need upsilon >= 1 and p >= 1")
    lam = sum(norms)
    if lam == 0.0 or t == 0.0:
        return 0.0
    e1 = 1.0 if anti_hermitian else math.exp(t * upsilon * lam)
    e2 = 1.0 if anti_hermitian else math.exp(t * lam)
    return (t ** (p + 1) / math.factorial(p + 1)) * (
        (upsilon * lam) ** (p + 1) * e1 + lam ** (p + 1) * e2
    )


def default_stage_count(p: int) -> int:
    """Stage count of the standard formula of order p (Suzuki for even p)."""
    if p == 1:
        return 1
    if p % 2 == 0:
        return 2 * 5 ** (p // 2 - 1)
    raise ValueError(f"no standard formula of odd order {p} > 1")


def one_norm_trotter_number(
    group_norms,
    p: int,
    t: float,
    eps: float,
    upsilon: int | None = None,
    anti_hermitian: bool = True,
) -> int:
    """Minimal r with r * one_norm_bound(t/r) <= eps."""
    ups = default_stage_count(p) if upsilon is None else upsilon
    return bound_trotter_number(
        lambda dt: one_norm_bound(group_norms, ups, p, dt, anti_hermitian), t, eps
    )


# -- commutator functionals ------------------------------------------------------


def compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in compositions(total - head, parts - 1):
            yield (head,) + tail


def alpha_comm_conjugation(
    a_list: list[PauliSum], b: PauliSum, p: int, norm_mode: str = DENSE_EXACT
) -> float:
    """sum over q1+...+qs = p of multinomial(p; q) * ||ad_{As}^{qs} ... ad_{A1}^{q1} (B)||.

    a_list is ordered innermost first: a_list[0] is conjugated directly
    around B.
    """
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    s = len(a_list)
    if s == 0:
        raise ValueError("need at least one conjugating operator")
    total = 0.0
    for q in compositions(p, s):
        current = b
        for a, power in zip(a_list, q):
            current = ad_power(a, current, power)
            if current.is_zero():
                break
        if current.is_zero():
            continue
        weight = math.factorial(p)
        for qi in q:
            weight //= math.factorial(qi)
        total += weight * norm_in_mode(current, norm_mode)
    return total


def conjugation_taylor_polynomial(
    a_list: list[PauliSum], b: PauliSum, p: int
) -> list[PauliSum]:
    """Taylor coefficients C_0..C_{p-1} of the Hermitian-generator conjugation
    e^{-i tau a_s} ... e^{-i tau a_1} B e^{i tau a_1} ... e^{i tau a_s}."""
    coeffs = []
    for j in range(p):
        acc = PauliSum.zero(b.n)
        for q in compositions(j, len(a_list)):
            current = b
            for a, power in zip(a_list, q):
                current = ad_power(a, current, power)
                if current.is_zero():
                    break
            if current.is_zero():
                continue
            weight = 1.0
            for qi in q:
                weight /= math.factorial(qi)
            acc = acc + current * (weight * (-1j) ** j)
        coeffs.append(acc)
    return coeffs


def conjugation_remainder_check(
    a_list: list[PauliSum], b: PauliSum, p: int, tau: float, norm_mode: str = DENSE_EXACT
) -> tuple[float, float]:
    """Dense remainder norm of the conjugation expansion and its bound.

    The conjugation uses anti-Hermitian generators -i*a_k (a_list Hermitian),
    so the bound carries no exponential factor:
    ||C(tau)|| <= alpha_comm * |tau|^p / p!.
    """
    from .dense import expm_i_hermitian, spectral_norm

    if not a_list:
        raise ValueError("need at least one conjugating operator")
    n = b.n
    b_dense = b.to_dense()
    left = np.eye(1 << n, dtype=np.complex128)
    for a in a_list:  # innermost first: e^{-i tau a_s} ... e^{-i tau a_1}
        left = expm_i_hermitian(a.to_dense(), tau) @ left
    conj = left @ b_dense @ left.conj().T
    poly = np.zeros_like(conj)
    for j, cj in enumerate(conjugation_taylor_polynomial(a_list, b, p)):
        if not cj.is_zero():
            poly += (tau**j) * cj.to_dense()
    value = spectral_norm(conj - poly)
    bound = alpha_comm_conjugation(a_list, b, p, norm_mode) * abs(tau) ** p / math.factorial(p)
    return value, bound


def alpha_tilde(
    h: GroupedHamiltonian,
    p: int,
    norm_mode: str = DENSE_EXACT,
    enumeration_cap: int = 1_000_000,
) -> BoundReport:
    """Sum of norms of all (p+1)-fold nested commutators of the summands."""
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    ops = h.group_operators()
    gamma = len(ops)
    if gamma ** (p + 1) > enumeration_cap:
        raise ValueError(
            f"{gamma}^{p + 1} nested commutators exceed the cap {enumeration_cap}"
        )
    labels = [g.label for g in h.groups]
    per_term: list[BoundTerm] = []
    total = 0.0

    def descend(current: PauliSum, label: str, depth: int) -> None:
        nonlocal total
        if depth == p + 1:
            nrm = norm_in_mode(current, norm_mode)
            if nrm > 0.0:
                per_term.append(BoundTerm(label, 1.0, nrm))
                total += nrm
            return
        for g in range(gamma):
            nxt = commutator(ops[g], current)
            if nxt.is_zero():
                continue
            descend(nxt, f"[{labels[g]},{label}]", depth + 1)

    for g1 in range(gamma):
        descend(ops[g1], labels[g1], 1)
    return BoundReport(value=total, per_term=per_term, norm_mode=norm_mode, order_p=p, t=0.0)


def comm_trotter_number(
    alpha_tilde_value: float, p: int, t: float, eps: float, prefactor: float = 1.0
) -> int:
    """ceil(prefactor * alpha~^{1/p} * t^{1+1/p} / eps^{1/p}), at least 1.

    The underlying statement is asymptotic; the prefactor is an explicit
    convention supplied by the caller.
    """
    if p < 1 or t < 0 or eps <= 0 or alpha_tilde_value < 0:
        raise ValueError("need p >= 1, t >= 0, eps > 0, alpha~ >= 0")
    raw = prefactor * alpha_tilde_value ** (1.0 / p) * t ** (1.0 + 1.0 / p) / eps ** (1.0 / p)
    return max(1, math.ceil(raw - 1e-12))


# -- tight low-order bounds -------------------------------------------------------


def _suffix_operators(ops: list[PauliSum], n: int) -> list[PauliSum]:
    """suffix[g] = sum of ops[g+1:], materialized once from the right."""
    suffixes = [PauliSum.zero(n) for _ in ops]
    acc = PauliSum.zero(n)
    for g in range(len(ops) - 1, -1, -1):
        suffixes[g] = acc
        acc = acc + ops[g]
    return suffixes


def _suffix_packets(h: GroupedHamiltonian, g: int) -> list[PauliSum]:
    out: list[PauliSum] = []
    for grp in h.groups[g + 1 :]:
        out.extend(grp.packets)
    return out


def cluster_nested_norm(n: int, outers: list[PauliSum], packets: list[PauliSum]) -> float:
    """sum over packets P of || [outers[0], [outers[1], ... [outers[-1], P]]] ||.

    Each packet's nested commutator is evaluated exactly on the support
    window it can reach; the triangle inequality enters only across packets.
    """
    wg = WindowedGroups(n, outers)
    layers = len(outers)
    total = 0.0
    for packet in packets:
        sup = packet.support()
        if not sup:
            continue
        window = wg.reach(sup, layers)
        restricted = wg.restrict(window)
        current = pauli_sum_to_array(packet, window)
        for op_arr in reversed(restricted):
            current = commutator_arrays(op_arr, current)
            if current.size == 0:
                break
        if current.size:
            total += spectral_norm_array(current)
    return total


def tight_low_order_bound(
    h: GroupedHamiltonian, t: float, order: int, norm_mode: str = DENSE_EXACT
) -> BoundReport:
    """Per-step error bounds matching the lowest BCH term up to the triangle
    inequality.

    order 1:  (t^2/2)  sum_g || [suffix_g, H_g] ||
    order 2:  (t^3/12) sum_g || [suffix_g, [suffix_g, H_g]] ||
            + (t^3/24) sum_g || [H_g, [H_g, suffix_g]] ||
    where suffix_g = sum_{g' > g} H_{g'}.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    ops = h.group_operators()
    labels = [g.label for g in h.groups]
    suffixes = _suffix_operators(ops, h.n)
    per_term: list[BoundTerm] = []
    value = 0.0
    for g in range(len(ops)):
        if suffixes[g].is_zero():
            continue
        if order == 1:
            entries = [
                (t**2 / 2.0, [suffixes[g]], ops[g], h.groups[g].packets, f"[suffix>{labels[g]},{labels[g]}]"),
            ]
        else:
            entries = [
                (
                    t**3 / 12.0,
                    [suffixes[g], suffixes[g]],
                    ops[g],
                    h.groups[g].packets,
                    f"[suffix>{labels[g]},[suffix>{labels[g]},{labels[g]}]]",
                ),
                (
                    t**3 / 24.0,
                    [ops[g], ops[g]],
                    suffixes[g],
                    tuple(_suffix_packets(h, g)),
                    f"[{labels[g]},[{labels[g]},suffix>{labels[g]}]]",
                ),
            ]
        for coeff, outers, inner, inner_packets, label in entries:
            if norm_mode == CLUSTER:
                nrm = cluster_nested_norm(h.n, outers, list(inner_packets))
            else:
                current = inner
                for op in reversed(outers):
                    current = commutator(op, current)
                    if current.is_zero():
                        break
                nrm = 0.0 if current.is_zero() else norm_in_mode(current, norm_mode)
            if nrm > 0.0:
                per_term.append(BoundTerm(label, coeff, nrm))
                value += coeff * nrm
    return BoundReport(value=value, per_term=per_term, norm_mode=norm_mode, order_p=order, t=t)


# -- fourth-order bounds ------------------------------------------------------------

# Coefficient of ||[P_i, [P_j, [P_k, [P_l, P_m]]]]|| keyed 0-based (i,j,k,l,m);
# two summands: A = 0, B = 1, innermost commutator [B, A].
TWO_TERM_FOURTH_ORDER: dict[tuple[int, int, int, int, int], float] = {
    (0, 0, 0, 1, 0): 0.0047,
    (0, 0, 1, 1, 0): 0.0057,
    (0, 1, 0, 1, 0): 0.0046,
    (0, 1, 1, 1, 0): 0.0074,
    (1, 0, 0, 1, 0): 0.0097,
    (1, 0, 1, 1, 0): 0.0097,
    (1, 1, 0, 1, 0): 0.0173,
    (1, 1, 1, 1, 0): 0.0284,
}

# Three summands, 1-based rows (i, j, k) with columns (l, m) = (2,1), (3,1), (3,2).
_THREE_TERM_ROWS: list[tuple[tuple[int, int, int], tuple[float, float, float]]] = [
    ((1, 1, 1), (0.0047, 0.0047, 0.0043)),
    ((1, 1, 2), (0.0057, 0.0057, 0.0057)),
    ((1, 1, 3), (0.0057, 0.0057, 0.0057)),
    ((1, 2, 1), (0.0046, 0.0046, 0.0035)),
    ((1, 2, 2), (0.0074, 0.0070, 0.0062)),
    ((1, 2, 3), (0.0082, 0.0082, 0.0082)),
    ((1, 3, 1), (0.0046, 0.0046, 0.0035)),
    ((1, 3, 2), (0.0070, 0.0058, 0.0046)),
    ((1, 3, 3), (0.0082, 0.0074, 0.0074)),
    ((2, 1, 1), (0.0150, 0.0150, 0.0141)),
    ((2, 1, 2), (0.0161, 0.0161, 0.0161)),
    ((2, 1, 3), (0.0161, 0.0161, 0.0161)),
    ((2, 2, 1), (0.0239, 0.0239, 0.0212)),
    ((2, 2, 2), (0.0315, 0.0306, 0.0290)),
    ((2, 2, 3), (0.0303, 0.0303, 0.0303)),
    ((2, 3, 1), (0.0179, 0.0179, 0.0153)),
    ((2, 3, 2), (0.0232, 0.0206, 0.0179)),
    ((2, 3, 3), (0.0259, 0.0241, 0.0241)),
    ((3, 1, 1), (0.0204, 0.0204, 0.0186)),
    ((3, 1, 2), (0.0225, 0.0225, 0.0217)),
    ((3, 1, 3), (0.0225, 0.0225, 0.0225)),
    ((3, 2, 1), (0.0423, 0.0423, 0.0377)),
    ((3, 2, 2), (0.0585, 0.0571, 0.0537)),
    ((3, 2, 3), (0.0502, 0.0502, 0.0502)),
    ((3, 3, 1), (0.0423, 0.0423, 0.0377)),
    ((3, 3, 2), (0.0681, 0.0641, 0.0601)),
    ((3, 3, 3), (0.0648, 0.0621, 0.0628)),
]

THREE_TERM_FOURTH_ORDER: dict[tuple[int, int, int, int, int], float] = {
    (i - 1, j - 1, k - 1, l - 1, m - 1): c
    for (i, j, k), row in _THREE_TERM_ROWS
    for (l, m), c in zip(((2, 1), (3, 1), (3, 2)), row)
}


@dataclass(frozen=True)
class FourthOrderCoefficientTable:
    two_term: dict = field(default_factory=lambda: dict(TWO_TERM_FOURTH_ORDER))
    three_term: dict = field(default_factory=lambda: dict(THREE_TERM_FOURTH_ORDER))


def pattern_label(pattern: tuple[int, ...], names: list[str]) -> str:
    label = f"[{names[pattern[-2]]},{names[pattern[-1]]}]"
    for idx in reversed(pattern[:-2]):
        label = f"[{names[idx]},{label}]"
    return label


def fourth_order_bound(
    h: GroupedHamiltonian, t: float, norm_mode: str = DENSE_EXACT
) -> BoundReport:
    """Per-step fourth-order Suzuki error bound t^5 * sum c * ||nested commutator||."""
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    gamma = h.num_groups
    if gamma == 2:
        table = TWO_TERM_FOURTH_ORDER
    elif gamma == 3:
        table = THREE_TERM_FOURTH_ORDER
    else:
        raise ValueError(f"fourth-order bound needs 2 or 3 summands, got {gamma}")
    names = [g.label for g in h.groups]
    if norm_mode == CLUSTER:
        norms = _fourth_order_norms_cluster(h, table)
    else:
        norms = _fourth_order_norms_whole(h, table, norm_mode)
    per_term: list[BoundTerm] = []
    value = 0.0
    weight = t**5
    for pattern in sorted(table):
        nrm = norms.get(pattern, 0.0)
        if nrm > 0.0:
            coeff = table[pattern] * weight
            per_term.append(BoundTerm(pattern_label(pattern, names), coeff, nrm))
            value += coeff * nrm
    return BoundReport(value=value, per_term=per_term, norm_mode=norm_mode, order_p=4, t=t)


def _fourth_order_norms_whole(h, table, norm_mode) -> dict[tuple, float]:
    """Nested-commutator norms with whole-group operands, sharing suffixes.

    Chains short enough for 64-bit masks run on the vectorized kernel; the
    dict-based algebra handles the rest.
    """
    if h.n <= 64:
        return _fourth_order_norms_whole_arrays(h, table, norm_mode)
    ops = h.group_operators()
    gamma = len(ops)
    norms: dict[tuple, float] = {}
    inner_pairs = sorted({(l, m) for (_, _, _, l, m) in table})
    for l, m in inner_pairs:
        c1 = commutator(ops[l], ops[m])
        if c1.is_zero():
            continue
        for k in range(gamma):
            c2 = commutator(ops[k], c1)
            if c2.is_zero():
                continue
            for j in range(gamma):
                c3 = commutator(ops[j], c2)
                if c3.is_zero():
                    continue
                for i in range(gamma):
                    if (i, j, k, l, m) not in table:
                        continue
                    c4 = commutator(ops[i], c3)
                    if not c4.is_zero():
                        norms[(i, j, k, l, m)] = norm_in_mode(c4, norm_mode)
    return norms


def _fourth_order_norms_whole_arrays(h, table, norm_mode) -> dict[tuple, float]:
    window = list(range(h.n))
    arrays = [pauli_sum_to_array(g.operator(), window) for g in h.groups]
    gamma = len(arrays)
    norms: dict[tuple, float] = {}

    def norm_of(arr: PauliArray) -> float:
        if norm_mode == DENSE_EXACT:
            return spectral_norm_array(arr)
        if norm_mode == COEFF_1NORM:
            return arr.one_norm()
        raise ValueError(f"unknown norm mode {norm_mode!r}")

    inner_pairs = sorted({(l, m) for (_, _, _, l, m) in table})
    for l, m in inner_pairs:
        c1 = commutator_arrays(arrays[l], arrays[m])
        if c1.size == 0:
            continue
        for k in range(gamma):
            c2 = commutator_arrays(arrays[k], c1)
            if c2.size == 0:
                continue
            for j in range(gamma):
                c3 = commutator_arrays(arrays[j], c2)
                if c3.size == 0:
                    continue
                for i in range(gamma):
                    if (i, j, k, l, m) not in table:
                        continue
                    c4 = commutator_arrays(arrays[i], c3)
                    if c4.size:
                        norms[(i, j, k, l, m)] = norm_of(c4)
    return norms


def _fourth_order_norms_cluster(h, table) -> dict[tuple, float]:
    """Innermost-group packets expanded; exact window norms, triangle across
    packets only (one sum per pattern)."""
    ops = h.group_operators()
    gamma = len(ops)
    wg = WindowedGroups(h.n, ops)
    norms: dict[tuple, float] = {}
    m_values = sorted({m for (_, _, _, _, m) in table})
    for m in m_values:
        ls = sorted({l for (_, _, _, l, mm) in table if mm == m})
        for packet in h.groups[m].packets:
            sup = packet.support()
            if not sup:
                continue
            window = wg.reach(sup, 4)
            if len(window) > 64:
                raise ValueError(f"cluster window of {len(window)} sites exceeds 64")
            restricted = wg.restrict(window)
            packet_arr = pauli_sum_to_array(packet, window)
            for l in ls:
                c1 = commutator_arrays(restricted[l], packet_arr)
                if c1.size == 0:
                    continue
                for k in range(gamma):
                    c2 = commutator_arrays(restricted[k], c1)
                    if c2.size == 0:
                        continue
                    for j in range(gamma):
                        c3 = commutator_arrays(restricted[j], c2)
                        if c3.size == 0:
                            continue
                        for i in range(gamma):
                            if (i, j, k, l, m) not in table:
                                continue
                            c4 = commutator_arrays(restricted[i], c3)
                            if c4.size:
                                norms[(i, j, k, l, m)] = norms.get(
                                    (i, j, k, l, m), 0.0
                                ) + spectral_norm_array(c4)
    return norms


# -- counting bound -----------------------------------------------------------------


def counting_bound_klocal(norms: LatticeTermTensor, p: int) -> float:
    """Upper bound on alpha~ for a k-local term tensor.

    ||H||_1 * prod_{j=1..p} 2k (k + (j-1)(k-1)) * |||H|||_1 : each added
    commutator layer can hit one of at most k + (j-1)(k-1) support sites in
    one of k slots, in either order.
    """
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    k = norms.k
    total = one_norm(norms)
    induced = induced_one_norm(norms)
    for j in range(1, p + 1):
        total *= 2 * k * (k + (j - 1) * (k - 1)) * induced
    return total


# -- bound-driven Trotter number ------------------------------------------------------


class NonmonotoneBound(RuntimeError):
    pass


def bound_trotter_number(bound_fn, t: float, eps: float, r_cap: int = R_SEARCH_CAP) -> int:
    """Minimal r with r * bound_fn(t / r) <= eps, by doubling plus bisection.

    The boundary pair is re-verified: r must pass and r-1 must fail,
    otherwise the assumed monotonicity is reported broken.
    """
    if eps <= 0:
        raise ValueError(f"need eps > 0, got {eps}")
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    cache: dict[int, float] = {}

    def total(r: int) -> float:
        if r not in cache:
            cache[r] = r * float(bound_fn(t / r))
        return cache[r]

    hi = 1
    while total(hi) > eps:
        hi *= 2
        if hi > r_cap:
            raise RuntimeError(f"no r <= {r_cap} brings the bound below {eps}")
    lo = hi // 2
    while hi - lo > 1 and lo >= 1:
        mid = (lo + hi) // 2
        if total(mid) <= eps:
            hi = mid
        else:
            lo = mid
    if total(hi) > eps or (hi > 1 and total(hi - 1) <= eps):
        raise NonmonotoneBound(f"bound is not monotone around r={hi}")
    return hi
