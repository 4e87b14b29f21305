"""Vectorized nested-commutator engine on support windows.

Nested commutators of local operators stay inside the neighborhood reachable
from the innermost term through overlapping supports, so each evaluation is
windowed onto that neighborhood, relabeled to fit in 64-bit masks, and run on
numpy arrays of (x_mask, z_mask, coeff) triples.  Exact: terms outside the
window commute with everything inside and contribute nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import COEFF_DROP_TOLERANCE, PauliSum

_PHASES = np.array([1.0, 1.0j, -1.0, -1.0j], dtype=np.complex128)

# Full eigendecomposition below this dimension; Lanczos above.
_FULL_EIG_DIM = 256


@dataclass
class PauliArray:
    """Pauli terms of one operator on m <= 64 window qubits."""

    m: int
    x: np.ndarray  # uint64
    z: np.ndarray  # uint64
    c: np.ndarray  # complex128

    @classmethod
    def empty(cls, m: int) -> "PauliArray":
        return cls(m, np.zeros(0, np.uint64), np.zeros(0, np.uint64), np.zeros(0, np.complex128))

    @classmethod
    def from_terms(cls, terms: list[tuple[int, int, complex]], m: int) -> "PauliArray":
        if m > 64:
            raise ValueError(f"window of {m} qubits exceeds 64-bit masks")
        if not terms:
            return cls.empty(m)
        x = np.array([t[0] for t in terms], dtype=np.uint64)
        z = np.array([t[1] for t in terms], dtype=np.uint64)
        c = np.array([t[2] for t in terms], dtype=np.complex128)
        return cls(m, x, z, c)

    @property
    def size(self) -> int:
        return self.x.size

    def one_norm(self) -> float:
        return float(np.sum(np.abs(self.c)))


# Per-merge budget for discarding a tail of tiny coefficients: the spectral
# norm shifts by at most this fraction of the coefficient 1-norm.
_PRUNE_BUDGET = 1e-11


def _merge(m: int, x: np.ndarray, z: np.ndarray, c: np.ndarray) -> PauliArray:
    """Combine duplicate strings and drop negligible coefficients."""
    if x.size == 0:
        return PauliArray.empty(m)
    if m <= 32:
        key = (x << np.uint64(32)) | z
        order = np.argsort(key, kind="stable")
        ks = key[order]
        boundary = np.empty(ks.size, dtype=bool)
        boundary[0] = True
        boundary[1:] = ks[1:] != ks[:-1]
        starts = np.nonzero(boundary)[0]
        xs = x[order][starts]
        zs = z[order][starts]
    else:
        order = np.lexsort((z, x))
        xo, zo = x[order], z[order]
        boundary = np.empty(xo.size, dtype=bool)
        boundary[0] = True
        boundary[1:] = (xo[1:] != xo[:-1]) | (zo[1:] != zo[:-1])
        starts = np.nonzero(boundary)[0]
        xs = xo[starts]
        zs = zo[starts]
    merged = np.add.reduceat(c[order], starts)
    mags = np.abs(merged)
    keep = mags >= COEFF_DROP_TOLERANCE
    if merged.size > 512:
        # drop the largest tail of small terms whose total stays within budget
        asc = np.argsort(mags)
        csum = np.cumsum(mags[asc])
        cut = int(np.searchsorted(csum, _PRUNE_BUDGET * csum[-1]))
        if cut > 0:
            keep[asc[:cut]] = False
    return PauliArray(m, xs[keep], zs[keep], merged[keep])


def commutator_arrays(a: PauliArray, b: PauliArray) -> PauliArray:
    """[a, b] over all term pairs; commuting pairs contribute nothing."""
    if a.size == 0 or b.size == 0:
        return PauliArray.empty(a.m)
    ax = a.x[:, None]
    az = a.z[:, None]
    bx = b.x[None, :]
    bz = b.z[None, :]
    anti = (np.bitwise_count(ax & bz) + np.bitwise_count(az & bx)) & np.uint64(1)
    rows, cols = np.nonzero(anti)
    if rows.size == 0:
        return PauliArray.empty(a.m)
    x1, z1 = a.x[rows], a.z[rows]
    x2, z2 = b.x[cols], b.z[cols]
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    ipow = (
        np.bitwise_count(x1 & z1).astype(np.int64)
        + np.bitwise_count(x2 & z2).astype(np.int64)
        - np.bitwise_count(x3 & z3).astype(np.int64)
        + 2 * np.bitwise_count(x2 & z1).astype(np.int64)
    ) & 3
    coeff = 2.0 * _PHASES[ipow] * a.c[rows] * b.c[cols]
    return _merge(a.m, x3, z3, coeff)


def _fwht_rows(v: np.ndarray) -> np.ndarray:
    """Fast Walsh-Hadamard transform (+/-1 kernel) along the last axis."""
    rows, size = v.shape
    tmp = np.empty_like(v[:, : size // 2]) if size > 1 else None
    h = 1
    while h < size:
        w = v.reshape(rows, -1, 2 * h)
        lo = w[:, :, :h]
        hi = w[:, :, h:]
        half = tmp[:, : lo.shape[1] * h].reshape(lo.shape)
        np.copyto(half, lo)
        np.add(half, hi, out=lo)
        np.subtract(half, hi, out=hi)
        h *= 2
    return v


def dense_from_array(pa: PauliArray) -> np.ndarray:
    """Dense window matrix, one Walsh transform per distinct X-mask.

    Distinct X-masks write disjoint entry sets (j ^ x, j), so a single flat
    scatter assembles the matrix.
    """
    dim = 1 << pa.m
    out = np.zeros((dim, dim), dtype=np.complex128)
    if pa.size == 0:
        return out
    phases = _PHASES[np.bitwise_count(pa.x & pa.z) & np.uint64(3)]
    ux, inv = np.unique(pa.x, return_inverse=True)
    inv = inv.ravel()
    coeff_rows = np.zeros((ux.size, dim), dtype=np.complex128)
    np.add.at(coeff_rows, (inv, pa.z.astype(np.int64)), pa.c * phases)
    d = _fwht_rows(coeff_rows)
    cols = np.arange(dim, dtype=np.int64)
    flat = (cols[None, :] ^ ux[:, None].astype(np.int64)) * dim + cols[None, :]
    out.ravel()[flat.ravel()] = d.ravel()
    return out


def compress_array(pa: PauliArray) -> PauliArray:
    """Drop window qubits the operator never touches."""
    if pa.size == 0:
        return pa
    union = int(np.bitwise_or.reduce(pa.x | pa.z))
    sites = [i for i in range(pa.m) if (union >> i) & 1]
    if len(sites) == pa.m:
        return pa
    if not sites:
        total = np.array([pa.c.sum()], dtype=np.complex128)
        return PauliArray(1, np.zeros(1, np.uint64), np.zeros(1, np.uint64), total)
    nx = np.zeros_like(pa.x)
    nz = np.zeros_like(pa.z)
    for dst, src in enumerate(sites):
        nx |= ((pa.x >> np.uint64(src)) & np.uint64(1)) << np.uint64(dst)
        nz |= ((pa.z >> np.uint64(src)) & np.uint64(1)) << np.uint64(dst)
    return PauliArray(len(sites), nx, nz, pa.c)


def _top_abs_eig(m: np.ndarray, rel_tol: float = 1e-7) -> float:
    """Largest |eigenvalue| of a Hermitian matrix (Lanczos, eigvalsh fallback)."""
    from .dense import lanczos_extreme

    theta, converged = lanczos_extreme(m.__matmul__, m.shape[0], rel_tol, 240, 0xC0FFEE)
    if converged:
        return theta
    return float(np.max(np.abs(np.linalg.eigvalsh(m))))


def spectral_norm_array(pa: PauliArray) -> float:
    """Spectral norm of the window operator.

    Nested commutators of Hermitian inputs are Hermitian up to a global
    i-power, which shows up as all-real or all-imaginary coefficients; both
    cases reduce to an extreme-eigenvalue problem.
    """
    if pa.size == 0:
        return 0.0
    pa = compress_array(pa)
    from .config import check_dense_cap

    check_dense_cap(pa.m)
    scale = float(np.max(np.abs(pa.c)))
    if np.max(np.abs(pa.c.imag)) <= 1e-12 * scale:
        work = pa
    elif np.max(np.abs(pa.c.real)) <= 1e-12 * scale:
        work = PauliArray(pa.m, pa.x, pa.z, 1j * pa.c)
    else:
        from .dense import spectral_norm

        return spectral_norm(dense_from_array(pa))
    # Hermitian by construction up to roundoff: eigvalsh reads one triangle
    # and the Lanczos recursion hermitizes through its real projections.
    m = dense_from_array(work)
    if m.shape[0] <= _FULL_EIG_DIM:
        return float(np.max(np.abs(np.linalg.eigvalsh(m))))
    return _top_abs_eig(m)


# -- windowing ----------------------------------------------------------------


def _term_entries(s: PauliSum) -> list[tuple[int, int, complex, frozenset[int]]]:
    out = []
    for (x, z), c in s.terms.items():
        mask = x | z
        sup = frozenset(i for i in range(s.n) if (mask >> i) & 1)
        out.append((x, z, c, sup))
    return out


class WindowedGroups:
    """Preprocessed operand groups for repeated windowed evaluations."""

    def __init__(self, n: int, groups: list[PauliSum]):
        self.n = n
        self.group_terms = [_term_entries(g) for g in groups]
        # site -> set of (group, term) touching it, for the reach expansion
        self.by_site: dict[int, list[frozenset[int]]] = {}
        for terms in self.group_terms:
            for _, _, _, sup in terms:
                for site in sup:
                    self.by_site.setdefault(site, []).append(sup)

    def reach(self, seed: frozenset[int], layers: int) -> list[int]:
        """Sites reachable from `seed` in `layers` support-overlap steps."""
        current = set(seed)
        frontier = set(seed)
        for _ in range(layers):
            grown: set[int] = set()
            for site in frontier:
                for sup in self.by_site.get(site, ()):
                    grown |= sup
            frontier = grown - current
            current |= grown
            if not frontier:
                break
        return sorted(current)

    def restrict(self, window: list[int]) -> list[PauliArray]:
        """Each group restricted to terms supported inside the window,
        relabeled onto window coordinates."""
        pos = {site: i for i, site in enumerate(window)}
        wset = set(window)
        m = max(len(window), 1)
        out = []
        for terms in self.group_terms:
            kept: list[tuple[int, int, complex]] = []
            for x, z, c, sup in terms:
                if sup <= wset:
                    nx = nz = 0
                    for site in sup:
                        bit = 1 << pos[site]
                        if (x >> site) & 1:
                            nx |= bit
                        if (z >> site) & 1:
                            nz |= bit
                    kept.append((nx, nz, c))
            out.append(PauliArray.from_terms(kept, m))
        return out


def pauli_sum_to_array(s: PauliSum, window: list[int]) -> PauliArray:
    pos = {site: i for i, site in enumerate(window)}
    m = max(len(window), 1)
    kept = []
    for (x, z), c in s.terms.items():
        nx = nz = 0
        for site in range(s.n):
            if ((x | z) >> site) & 1:
                if site not in pos:
                    raise ValueError(f"term leaves the window at site {site}")
                bit = 1 << pos[site]
                if (x >> site) & 1:
                    nx |= bit
                if (z >> site) & 1:
                    nz |= bit
        kept.append((nx, nz, c))
    return PauliArray.from_terms(kept, m)
