"""Dense complex linear algebra for small systems.

Matrix exponentials go through Hermitian eigendecomposition (the only
generators this package exponentiates are Hermitian).  Spectral norms of
generic matrices use power iteration on M^dag M; Hermitian and anti-Hermitian
inputs take the exact eigenvalue path.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-10


def _hermiticity_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    scale = max(1.0, float(np.max(np.abs(m))))
    defect = _hermiticity_defect(m)
    if defect > tol * scale:
        raise ValueError(f"matrix is not Hermitian: defect {defect:.3e} (scale {scale:.3e})")


def expm_i_hermitian(h: np.ndarray, theta: float) -> np.ndarray:
    """e^{-i*theta*h} for Hermitian h, via eigendecomposition."""
    require_hermitian(h)
    evals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1j * theta * evals)
    return (vecs * phases) @ vecs.conj().T


def expm_real_hermitian(h: np.ndarray, theta: float) -> np.ndarray:
    """e^{theta*h} for Hermitian h (symmetric positive definite result)."""
    require_hermitian(h)
    evals, vecs = np.linalg.eigh(h)
    weights = np.exp(theta * evals)
    return (vecs * weights) @ vecs.conj().T


def eigvals_hermitian(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ordered nonincreasingly."""
    require_hermitian(m)
    return np.linalg.eigvalsh(m)[::-1]


class HermitianExponentiator:
    """Caches one eigendecomposition to serve many exponentials of t*h."""

    def __init__(self, h: np.ndarray):
        require_hermitian(h)
        self.evals, self.vecs = np.linalg.eigh(h)
        self.vecs_dag = np.ascontiguousarray(self.vecs.conj().T)

    def expm(self, scale: complex) -> np.ndarray:
        """e^{scale*h}; pass scale=-1j*theta for unitaries."""
        weights = np.exp(scale * self.evals)
        return (self.vecs * weights) @ self.vecs_dag


def lanczos_extreme(
    matvec,
    dim: int,
    rel_tol: float = 1e-9,
    max_steps: int = 240,
    seed: int = 0x5EED,
) -> tuple[float, bool]:
    """Largest-|eigenvalue| Ritz value of an implicit Hermitian operator.

    Lanczos with full reorthogonalization; stops once the standard residual
    certificate pins an eigenvalue within rel_tol * |theta| of the Ritz value.
    Returns (|theta|, converged).
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    steps = min(dim, max_steps)
    basis = np.zeros((steps + 1, dim), dtype=np.complex128)
    basis_conj = np.zeros_like(basis)
    basis[0] = v
    basis_conj[0] = v.conj()
    alphas: list[float] = []
    betas: list[float] = []
    theta = 0.0
    for j in range(steps):
        w = matvec(basis[j])
        a = float(np.real(np.vdot(basis[j], w)))
        alphas.append(a)
        w -= a * basis[j]
        if j > 0:
            w -= betas[-1] * basis[j - 1]
        w -= basis[: j + 1].T @ (basis_conj[: j + 1] @ w)
        b = float(np.linalg.norm(w))
        betas.append(b)
        if b < 1e-14:  # Krylov space exhausted: tridiagonal eigenvalues exact
            t = np.diag(alphas) + np.diag(betas[:-1], 1) + np.diag(betas[:-1], -1)
            return float(np.max(np.abs(np.linalg.eigvalsh(np.atleast_2d(t))))), True
        basis[j + 1] = w / b
        basis_conj[j + 1] = basis[j + 1].conj()
        if (j + 1) % 8 == 0 or j + 1 == steps:
            t = np.diag(alphas) + np.diag(betas[:-1], 1) + np.diag(betas[:-1], -1)
            evals, evecs = np.linalg.eigh(t)
            idx = int(np.argmax(np.abs(evals)))
            theta = float(evals[idx])
            resid = b * abs(evecs[-1, idx])
            if resid <= rel_tol * max(abs(theta), 1e-300):
                return abs(theta), True
    return abs(theta), False


def spectral_norm(
    m: np.ndarray,
    rel_tol: float = 1e-11,
    max_steps: int = 400,
    seed: int = 0x5EED,
) -> float:
    """Largest singular value.

    (Anti-)Hermitian matrices are handled exactly through eigenvalues; small
    generic matrices get an exact SVD.  Large generic matrices use Lanczos on
    M^dag M with a residual certificate, which converges where plain power
    iteration crawls (differences of nearby unitaries have tightly clustered
    singular values).
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    if dim == 1:
        return float(abs(m[0, 0]))
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return 0.0

    defect_h = float(np.max(np.abs(m - m.conj().T)))
    if defect_h <= 1e-12 * scale:
        return float(np.max(np.abs(np.linalg.eigvalsh(m))))
    defect_a = float(np.max(np.abs(m + m.conj().T)))
    if defect_a <= 1e-12 * scale:
        return float(np.max(np.abs(np.linalg.eigvalsh(1j * m))))

    if dim <= 256:
        return float(np.linalg.norm(m, 2))

    mh = np.ascontiguousarray(m.conj().T)

    def matvec(v: np.ndarray) -> np.ndarray:
        return mh @ (m @ v)

    best = 0.0
    for attempt in range(2):
        top, converged = lanczos_extreme(matvec, dim, rel_tol, max_steps, seed + attempt)
        best = max(best, np.sqrt(max(top, 0.0)))
        if converged:
            return best
    return best


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
