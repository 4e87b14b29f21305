"""Spectral norms of Pauli sums, with support compression.

Nested commutators of Hermitian Pauli sums have purely real or purely
imaginary coefficients in our representation (the base strings are
Hermitian), so their dense forms are Hermitian up to a global i-power and
the norm reduces to an extreme eigenvalue.  Sums are first compressed onto
their support so the dense dimension tracks the operator, not the chain.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse.linalg as spla

from .pauli import PauliSum

# Above this dimension, extreme eigenvalues come from Lanczos instead of a
# full eigendecomposition.
_FULL_EIG_DIM = 512


def compress_to_support(s: PauliSum, sites: list[int] | None = None) -> PauliSum:
    """Relabel the given sites (default: the support) to 0..m-1.

    Every term must be supported inside `sites`.  Returns a PauliSum on
    max(m, 1) qubits; identity components stay identity.
    """
    if sites is None:
        sites = sorted(s.support())
    m = max(len(sites), 1)
    pos = {site: i for i, site in enumerate(sites)}
    out: dict[tuple[int, int], complex] = {}
    for (x, z), c in s.terms.items():
        nx = nz = 0
        for site in range(s.n):
            bit = 1 << site
            if (x | z) & bit:
                if site not in pos:
                    raise ValueError(f"term acts on site {site} outside {sites}")
                if x & bit:
                    nx |= 1 << pos[site]
                if z & bit:
                    nz |= 1 << pos[site]
        out[(nx, nz)] = out.get((nx, nz), 0.0) + c
    return PauliSum(m, out)


def dense_walsh(s: PauliSum) -> np.ndarray:
    """Dense matrix via a Walsh-Hadamard transform per distinct X-mask.

    For fixed x, all terms contribute M[j ^ x, j] += d[j] where d is the
    +/-1-kernel Walsh transform of the phased coefficients placed at their
    Z-masks.  Cost: (#distinct x) * dim log dim, much faster than per-term
    accumulation for dense sums.
    """
    dim = 1 << s.n
    by_x: dict[int, list[tuple[int, complex]]] = {}
    for (x, z), c in s.terms.items():
        phase = (1, 1j, -1, -1j)[bin(x & z).count("1") % 4]
        by_x.setdefault(x, []).append((z, phase * c))
    out = np.zeros((dim, dim), dtype=np.complex128)
    cols = np.arange(dim, dtype=np.int64)
    for x, zs in by_x.items():
        v = np.zeros(dim, dtype=np.complex128)
        for z, c in zs:
            v[z] += c
        d = _fwht(v)
        out[cols ^ x, cols] += d
    return out


def _fwht(v: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform with +/-1 kernel."""
    v = v.copy()
    h = 1
    size = v.size
    while h < size:
        v = v.reshape(-1, 2 * h)
        lo = v[:, :h].copy()
        hi = v[:, h:]
        v[:, :h] = lo + hi
        v[:, h:] = lo - hi
        v = v.ravel()
        h *= 2
    return v


def _phase_class(s: PauliSum) -> complex | None:
    """Return u with u*s Hermitian, if coefficients are all real or all imaginary."""
    scale = max((abs(c) for c in s.terms.values()), default=0.0)
    if scale == 0.0:
        return 1.0
    tol = 1e-12 * scale
    if all(abs(c.imag) <= tol for c in s.terms.values()):
        return 1.0
    if all(abs(c.real) <= tol for c in s.terms.values()):
        return 1j
    return None


def spectral_norm_pauli(s: PauliSum) -> float:
    """Exact spectral norm of a Pauli sum, evaluated on its support."""
    if s.is_zero():
        return 0.0
    sup = sorted(s.support())
    if not sup:
        return abs(s.terms[(0, 0)])
    c = compress_to_support(s, sup)
    u = _phase_class(c)
    if u is not None:
        m = dense_walsh(c * u)
        m = 0.5 * (m + m.conj().T)  # scrub roundoff so eigh sees Hermitian input
        dim = m.shape[0]
        if dim <= _FULL_EIG_DIM:
            return float(np.max(np.abs(np.linalg.eigvalsh(m))))
        val = spla.eigsh(m, k=1, which="LM", return_eigenvectors=False, tol=1e-11)
        return float(abs(val[0]))
    from .dense import spectral_norm

    return spectral_norm(dense_walsh(c))


def norm_in_mode(s: PauliSum, mode: str) -> float:
    """Dispatch between the exact dense norm and the coefficient 1-norm."""
    if mode == "dense-exact":
        return spectral_norm_pauli(s)
    if mode == "coeff-1norm":
        return s.coefficient_one_norm()
    raise ValueError(f"unknown norm mode {mode!r}")
