"""Independent dense oracles for the test suite.

Everything here is built from explicit Kronecker products and scipy/numpy
reference routines, deliberately not reusing the package's own Pauli-to-dense
or exponentiation paths.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_chain(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label with qubit 0 leftmost in the string and
    least significant in the tensor product (kron runs high factor first)."""
    out = np.array([[1.0 + 0j]])
    for letter in label:  # qubit 0 first => it must end up rightmost in kron
        out = np.kron(SINGLE[letter], out)
    return out


def dense_of_terms(terms: list[tuple[complex, str]]) -> np.ndarray:
    acc = None
    for coeff, label in terms:
        m = coeff * kron_chain(label)
        acc = m if acc is None else acc + m
    return acc


def dense_commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def expm_ref(m: np.ndarray) -> np.ndarray:
    return scipy.linalg.expm(m)


def norm_ref(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def random_pauli_sum_terms(rng: np.random.Generator, n: int, max_terms: int = 20):
    """Random (coeff, label) term lists for cross-checking."""
    count = int(rng.integers(1, max_terms + 1))
    out = []
    for _ in range(count):
        label = "".join(rng.choice(list("IXYZ")) for _ in range(n))
        coeff = complex(rng.normal(), rng.normal())
        out.append((coeff, label))
    return out
