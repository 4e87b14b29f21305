"""Benchmark Hamiltonians, term groupings, truncation, and norm functionals.

Sites are 0-based.  Chains have open boundaries: bonds j..j+1 for
j = 0..n-2, and random fields sit on sites 0..n-2 (one per bond start).
Distances are |j - k| on the chain; lattice sums use the Euclidean norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliSum
from .rng import random_fields


@dataclass(frozen=True)
class Geometry:
    """Lattice descriptor: dimension and power-law exponent.

    alpha is None for a nearest-neighbor chain and a float >= 0 for
    1/r^alpha two-site couplings.
    """

    d: int = 1
    alpha: float | None = None


@dataclass(frozen=True)
class TermGroup:
    """One summand H_gamma, kept as a tuple of elementary packets.

    The packet structure records how the group was assembled (e.g. one
    bond plus its field term); bounds that expand the innermost operand
    term-by-term rely on it.  The group operator is the sum of packets.
    """

    label: str
    packets: tuple[PauliSum, ...]

    def operator(self) -> PauliSum:
        op = self.packets[0]
        for p in self.packets[1:]:
            op = op + p
        return op


@dataclass
class GroupedHamiltonian:
    n: int
    groups: list[TermGroup]
    geometry: Geometry | None = None
    field_values: list[float] | None = None

    def __post_init__(self):
        if not self.groups:
            raise ValueError("need at least one group")
        for g in self.groups:
            for p in g.packets:
                if p.n != self.n:
                    raise ValueError(f"group {g.label!r} has packet with n={p.n} != {self.n}")

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def group_operators(self) -> list[PauliSum]:
        return [g.operator() for g in self.groups]

    def total(self) -> PauliSum:
        op = PauliSum.zero(self.n)
        for g in self.groups:
            for p in g.packets:
                op = op + p
        return op


# -- elementary term constructors -------------------------------------------


def _pair_term(n: int, letter: str, j: int, k: int, coeff: float) -> PauliSum:
    label = "".join(letter if i in (j, k) else "I" for i in range(n))
    return PauliSum.from_label(label, coeff)


def _field_term(n: int, j: int, coeff: float) -> PauliSum:
    label = "".join("Z" if i == j else "I" for i in range(n))
    return PauliSum.from_label(label, coeff)


def heisenberg_chain(n: int, seed: int, fields: list[float] | None = None) -> GroupedHamiltonian:
    """Nearest-neighbor Heisenberg chain with a random magnetic field.

    H = sum_{j=0}^{n-2} (X_j X_{j+1} + Y_j Y_{j+1} + Z_j Z_{j+1} + h_j Z_j),
    h_j drawn uniformly from [-1, 1) by the seeded generator.  Returned
    ungrouped: one group per elementary term.  Passing `fields` overrides
    the random draw (test hook).
    """
    if n < 2:
        raise ValueError(f"chain needs n >= 2, got {n}")
    h = list(fields) if fields is not None else random_fields(n - 1, seed)
    if len(h) != n - 1:
        raise ValueError(f"need {n - 1} field values, got {len(h)}")
    groups: list[TermGroup] = []
    for j in range(n - 1):
        for letter in "XYZ":
            groups.append(TermGroup(f"{letter}{letter}:{j}-{j + 1}", (_pair_term(n, letter, j, j + 1, 1.0),)))
    for j in range(n - 1):
        groups.append(TermGroup(f"Z:{j}", (_field_term(n, j, h[j]),)))
    return GroupedHamiltonian(n, groups, Geometry(d=1, alpha=None), h)


def power_law_heisenberg(
    n: int, alpha: float, seed: int, fields: list[float] | None = None
) -> GroupedHamiltonian:
    """1-D Heisenberg with 1/|j-k|^alpha couplings on all pairs plus fields.

    H = sum_{j<k} |j-k|^-alpha (XX + YY + ZZ) + sum_{j=0}^{n-2} h_j Z_j.
    """
    if n < 2:
        raise ValueError(f"chain needs n >= 2, got {n}")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    h = list(fields) if fields is not None else random_fields(n - 1, seed)
    if len(h) != n - 1:
        raise ValueError(f"need {n - 1} field values, got {len(h)}")
    groups: list[TermGroup] = []
    for j in range(n - 1):
        for k in range(j + 1, n):
            coupling = float(k - j) ** (-alpha)
            for letter in "XYZ":
                groups.append(
                    TermGroup(f"{letter}{letter}:{j}-{k}", (_pair_term(n, letter, j, k, coupling),))
                )
    for j in range(n - 1):
        groups.append(TermGroup(f"Z:{j}", (_field_term(n, j, h[j]),)))
    return GroupedHamiltonian(n, groups, Geometry(d=1, alpha=alpha), h)


def tfim(
    j_couplings: dict[tuple[int, int], float], h_fields: dict[int, float]
) -> tuple[PauliSum, PauliSum]:
    """Transverse-field Ising summands A = sum j_uv Z_u Z_v, B = sum h_u X_u."""
    sites = {u for uv in j_couplings for u in uv} | set(h_fields)
    if not sites:
        raise ValueError("empty model")
    n = max(sites) + 1
    a = PauliSum.zero(n)
    for (u, v), j in j_couplings.items():
        if j < 0:
            raise ValueError(f"coupling j_{u},{v} = {j} is negative")
        if u == v:
            raise ValueError(f"coupling needs two distinct sites, got ({u},{v})")
        a = a + _pair_term(n, "Z", u, v, float(j))
    b = PauliSum.zero(n)
    for u, hu in h_fields.items():
        if hu < 0:
            raise ValueError(f"field h_{u} = {hu} is negative")
        label = "".join("X" if i == u else "I" for i in range(n))
        b = b + PauliSum.from_label(label, float(hu))
    return a, b


# -- regrouping --------------------------------------------------------------


def _parse_term_label(label: str) -> tuple[str, tuple[int, ...]]:
    kind, _, where = label.partition(":")
    if kind in ("XX", "YY", "ZZ"):
        j, k = where.split("-")
        return kind, (int(j), int(k))
    if kind == "Z":
        return kind, (int(where),)
    raise ValueError(f"not an elementary term label: {label!r}")


def group_terms(h: GroupedHamiltonian, strategy) -> GroupedHamiltonian:
    """Regroup an ungrouped Hamiltonian.

    strategy is "even-odd", "x-y-z", "per-term", or an explicit sequence of
    group labels (one per existing group, merged by label).  The sum of the
    regrouped operator equals the original exactly.
    """
    if not isinstance(strategy, str):
        labels = list(strategy)
        if len(labels) != len(h.groups):
            raise ValueError(f"need {len(h.groups)} labels, got {len(labels)}")
        order: list[str] = []
        buckets: dict[str, list[PauliSum]] = {}
        for lbl, g in zip(labels, h.groups):
            if lbl not in buckets:
                buckets[lbl] = []
                order.append(lbl)
            buckets[lbl].extend(g.packets)
        return GroupedHamiltonian(
            h.n, [TermGroup(lbl, tuple(buckets[lbl])) for lbl in order], h.geometry, h.field_values
        )

    if strategy == "per-term":
        singles = [
            TermGroup(f"{g.label}#{i}" if len(g.packets) > 1 else g.label, (p,))
            for g in h.groups
            for i, p in enumerate(g.packets)
        ]
        return GroupedHamiltonian(h.n, singles, h.geometry, h.field_values)

    terms: dict[tuple[str, tuple[int, ...]], PauliSum] = {}
    for g in h.groups:
        if len(g.packets) != 1:
            raise ValueError("regrouping by strategy expects an ungrouped Hamiltonian")
        terms[_parse_term_label(g.label)] = g.packets[0]

    if strategy == "x-y-z":
        return _group_x_y_z(h, terms)
    if strategy == "even-odd":
        return _group_even_odd(h, terms)
    raise ValueError(f"unknown grouping strategy {strategy!r}")


def _group_x_y_z(h: GroupedHamiltonian, terms) -> GroupedHamiltonian:
    """X, Y, and Z-plus-field groups.

    Packets bundle all pair terms sharing a left endpoint j (one packet per
    row of the coupling sum), and the field on site j joins the Z-row packet.
    On a nearest-neighbor chain a row is a single bond, so the Z packets are
    bond-plus-field pairs.
    """
    rows: dict[str, dict[int, PauliSum]] = {"XX": {}, "YY": {}, "ZZ": {}}
    fields: dict[int, PauliSum] = {}
    for (kind, where), op in terms.items():
        if kind in rows:
            j = where[0]
            rows[kind][j] = rows[kind][j] + op if j in rows[kind] else op
        else:
            fields[where[0]] = op
    z_rows = rows["ZZ"]
    for j, op in fields.items():
        z_rows[j] = z_rows[j] + op if j in z_rows else op
    groups = [
        TermGroup("X", tuple(rows["XX"][j] for j in sorted(rows["XX"]))),
        TermGroup("Y", tuple(rows["YY"][j] for j in sorted(rows["YY"]))),
        TermGroup("Z+field", tuple(z_rows[j] for j in sorted(z_rows))),
    ]
    return GroupedHamiltonian(h.n, groups, h.geometry, h.field_values)


def _group_even_odd(h: GroupedHamiltonian, terms) -> GroupedHamiltonian:
    """Odd/even bond groups on a nearest-neighbor chain.

    Group A takes bonds starting at even 0-based sites together with the
    field on the bond start; group B takes the rest.  Within each group all
    packets act on disjoint site pairs and therefore commute.
    """
    if h.geometry is None or h.geometry.alpha is not None or h.geometry.d != 1:
        raise ValueError("even-odd grouping requires a nearest-neighbor chain")
    bonds: dict[int, PauliSum] = {}
    for (kind, where), op in terms.items():
        if kind in ("XX", "YY", "ZZ"):
            j, k = where
            if k != j + 1:
                raise ValueError("even-odd grouping requires nearest-neighbor bonds only")
            bonds[j] = bonds[j] + op if j in bonds else op
    for (kind, where), op in terms.items():
        if kind == "Z":
            j = where[0]
            if j not in bonds:
                raise ValueError(f"field on site {j} has no bond ({j},{j + 1}) to join")
            bonds[j] = bonds[j] + op
    a_packets = tuple(bonds[j] for j in sorted(bonds) if j % 2 == 0)
    b_packets = tuple(bonds[j] for j in sorted(bonds) if j % 2 == 1)
    groups = [TermGroup("A(odd bonds)", a_packets)]
    if b_packets:
        groups.append(TermGroup("B(even bonds)", b_packets))
    return GroupedHamiltonian(h.n, groups, h.geometry, h.field_values)


# -- truncation --------------------------------------------------------------


def truncate_power_law(h: GroupedHamiltonian, ell: int) -> tuple[GroupedHamiltonian, float]:
    """Drop every two-site term of range > ell; return (truncated, removed weight).

    The removed weight is the summed |coeff| of dropped terms, an upper bound
    on ||H - H~|| by the triangle inequality.
    """
    if h.geometry is None:
        raise ValueError("truncation needs a geometry")
    if ell < 1:
        raise ValueError(f"cutoff must be >= 1, got {ell}")
    removed = 0.0
    new_groups: list[TermGroup] = []
    for g in h.groups:
        kept_packets = []
        for p in g.packets:
            kept: dict[tuple[int, int], complex] = {}
            for (x, z), c in p.terms.items():
                sites = [i for i in range(h.n) if ((x | z) >> i) & 1]
                if len(sites) >= 2 and max(sites) - min(sites) > ell:
                    removed += abs(c)
                else:
                    kept[(x, z)] = c
            packet = PauliSum(h.n, kept)
            if not packet.is_zero():
                kept_packets.append(packet)
        if kept_packets:
            new_groups.append(TermGroup(g.label, tuple(kept_packets)))
    return GroupedHamiltonian(h.n, new_groups, h.geometry, h.field_values), removed


# -- k-local term tensor and its norms ---------------------------------------


@dataclass
class LatticeTermTensor:
    """Norms of a k-local term tensor, keyed by canonical (sorted) index tuples.

    One-site terms of a k=2 tensor are stored as diagonal tuples (j, j).
    """

    k: int
    entries: dict[tuple[int, ...], float] = field(default_factory=dict)

    def __post_init__(self):
        for key, v in self.entries.items():
            if len(key) != self.k:
                raise ValueError(f"key {key} has arity {len(key)}, expected {self.k}")
            if v < 0:
                raise ValueError(f"negative norm entry at {key}")


def one_norm(t: LatticeTermTensor) -> float:
    return float(sum(t.entries.values()))


def induced_one_norm(t: LatticeTermTensor) -> float:
    """max over a slot position and fixed index of the summed norms over the rest."""
    best = 0.0
    for slot in range(t.k):
        per_index: dict[int, float] = {}
        for key, v in t.entries.items():
            idx = key[slot]
            per_index[idx] = per_index.get(idx, 0.0) + v
        if per_index:
            best = max(best, max(per_index.values()))
    return best


def term_tensor(h: GroupedHamiltonian, k: int = 2) -> LatticeTermTensor:
    """Bucket the elementary terms by support and take exact norms per bucket.

    Buckets are evaluated densely on their own support, so each entry is the
    true spectral norm of that local summand.
    """
    from .opnorm import spectral_norm_pauli

    buckets: dict[tuple[int, ...], PauliSum] = {}
    for g in h.groups:
        for p in g.packets:
            for (x, z), c in p.terms.items():
                sites = tuple(i for i in range(h.n) if ((x | z) >> i) & 1)
                if len(sites) > k:
                    raise ValueError(f"term on {len(sites)} sites exceeds locality k={k}")
                key = sites if sites else (0,) * k
                key = key + (key[-1],) * (k - len(key))
                term = PauliSum(h.n, {(x, z): c})
                buckets[key] = buckets[key] + term if key in buckets else term
    entries = {key: spectral_norm_pauli(op) for key, op in sorted(buckets.items())}
    return LatticeTermTensor(k, entries)


# -- lattice sums -------------------------------------------------------------


def power_law_lattice_sum(
    n: int, d: int, alpha: float, tail_from: float | None = None
) -> float:
    """sum over j in {-n..n}^d, j != 0, of ||j||_2^-alpha by direct summation.

    With tail_from = x, restricts to lattice points with ||j||_2 >= x.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if d not in (1, 2, 3):
        raise ValueError(f"d must be 1, 2, or 3, got {d}")
    axes = [np.arange(-n, n + 1, dtype=np.float64)] * d
    grids = np.meshgrid(*axes, indexing="ij")
    sq = sum(g * g for g in grids)
    r = np.sqrt(sq.ravel())
    r = r[r > 0]
    if tail_from is not None:
        r = r[r >= tail_from]
    if alpha == 0:
        return float(r.size)
    return float(np.sum(r**-alpha))
