"""Exact algebra on n-qubit Pauli-string operators.

A Pauli string is stored as a pair of bit masks (x_mask, z_mask) with qubit 0
in the least significant bit; qubit 0 is also the least significant tensor
factor of the dense matrix.  The base string for masks (x, z) is the Hermitian
operator

    W(x, z) = i^{popcount(x & z)} * X^x * Z^z,

so Y = i*X*Z carries no extra bookkeeping: each qubit position with both bits
set contributes one factor of Y.  All phases live in the complex coefficient.
"""

from __future__ import annotations

import numpy as np

from .config import check_dense_cap

# Coefficients below this magnitude are dropped during simplification.  Far
# below every acceptance tolerance, but large enough to suppress the floating
# point dust that accumulates in long nested commutators.
COEFF_DROP_TOLERANCE = 1e-14

_PAULI_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_LETTER_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _popcount(v: int) -> int:
    return bin(v).count("1")


class PauliTerm:
    """A single weighted Pauli string.

    The spectral norm of a term is exactly |coeff| since W(x, z) is unitary.
    """

    __slots__ = ("n", "x_mask", "z_mask", "coeff")

    def __init__(self, n: int, x_mask: int, z_mask: int, coeff: complex = 1.0):
        if n < 1:
            raise ValueError(f"need at least one qubit, got n={n}")
        full = (1 << n) - 1
        if x_mask & ~full or z_mask & ~full:
            raise ValueError(f"mask has bits at positions >= n={n}")
        self.n = n
        self.x_mask = x_mask
        self.z_mask = z_mask
        self.coeff = complex(coeff)

    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0) -> "PauliTerm":
        """Build from a letter string like "XIZY" (qubit 0 leftmost)."""
        x = z = 0
        for pos, letter in enumerate(label):
            try:
                xb, zb = _LETTER_MASKS[letter]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {letter!r} in {label!r}") from None
            x |= xb << pos
            z |= zb << pos
        return cls(len(label), x, z, coeff)

    def label(self) -> str:
        return "".join(
            _PAULI_LETTERS[((self.x_mask >> i) & 1, (self.z_mask >> i) & 1)]
            for i in range(self.n)
        )

    def __repr__(self) -> str:
        return f"PauliTerm({self.coeff:+g}*{self.label()})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliTerm)
            and self.n == other.n
            and self.x_mask == other.x_mask
            and self.z_mask == other.z_mask
            and self.coeff == other.coeff
        )


def multiply(p: PauliTerm, q: PauliTerm) -> PauliTerm:
    """Exact product of two Pauli terms; the phase is a power of i."""
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} != {q.n}")
    x3 = p.x_mask ^ q.x_mask
    z3 = p.z_mask ^ q.z_mask
    # W(x1,z1) W(x2,z2) = i^(c1+c2-c3+2*popcount(x2&z1)) W(x3,z3)
    ipow = (
        _popcount(p.x_mask & p.z_mask)
        + _popcount(q.x_mask & q.z_mask)
        - _popcount(x3 & z3)
        + 2 * _popcount(q.x_mask & p.z_mask)
    ) % 4
    phase = (1, 1j, -1, -1j)[ipow]
    return PauliTerm(p.n, x3, z3, phase * p.coeff * q.coeff)


class PauliSum:
    """A simplified sum of Pauli terms, keyed by (x_mask, z_mask).

    Instances are immutable by convention: every operation returns a new sum.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[tuple[int, int], complex] | None = None):
        if n < 1:
            raise ValueError(f"need at least one qubit, got n={n}")
        self.n = n
        self.terms: dict[tuple[int, int], complex] = {}
        if terms:
            for key, coeff in terms.items():
                c = complex(coeff)
                if abs(c) >= COEFF_DROP_TOLERANCE:
                    self.terms[key] = c

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n)

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n, {(0, 0): coeff})

    @classmethod
    def from_term(cls, term: PauliTerm) -> "PauliSum":
        return cls(term.n, {(term.x_mask, term.z_mask): term.coeff})

    @classmethod
    def from_terms(cls, terms: list[PauliTerm]) -> "PauliSum":
        if not terms:
            raise ValueError("from_terms needs at least one term; use zero(n)")
        n = terms[0].n
        acc: dict[tuple[int, int], complex] = {}
        for t in terms:
            if t.n != n:
                raise ValueError(f"qubit count mismatch: {t.n} != {n}")
            key = (t.x_mask, t.z_mask)
            acc[key] = acc.get(key, 0.0) + t.coeff
        return cls(n, acc)

    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0, n: int | None = None) -> "PauliSum":
        term = PauliTerm.from_label(label, coeff)
        if n is not None and n != term.n:
            raise ValueError(f"label {label!r} fixes n={term.n}, got n={n}")
        return cls.from_term(term)

    @classmethod
    def parse(cls, text: str, n: int) -> "PauliSum":
        """Parse strings like "1.5*XIZY" or "XIZY" (single term)."""
        text = text.strip()
        if "*" in text:
            coeff_str, label = text.split("*", 1)
            coeff = complex(coeff_str)
        else:
            coeff, label = 1.0, text
        label = label.strip()
        if len(label) != n:
            raise ValueError(f"label {label!r} has {len(label)} letters, expected {n}")
        return cls.from_label(label, coeff)

    # -- ring operations ----------------------------------------------------

    def _check_n(self, other: "PauliSum") -> None:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} != {other.n}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_n(other)
        acc = dict(self.terms)
        for key, coeff in other.terms.items():
            acc[key] = acc.get(key, 0.0) + coeff
        return PauliSum(self.n, acc)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other * (-1.0)

    def __mul__(self, scalar: complex) -> "PauliSum":
        s = complex(scalar)
        return PauliSum(self.n, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        """Operator product (sum over all term pairs)."""
        self._check_n(other)
        acc: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self.terms.items():
            c1x1z1 = _popcount(x1 & z1)
            for (x2, z2), c2 in other.terms.items():
                x3 = x1 ^ x2
                z3 = z1 ^ z2
                ipow = (
                    c1x1z1
                    + _popcount(x2 & z2)
                    - _popcount(x3 & z3)
                    + 2 * _popcount(x2 & z1)
                ) % 4
                phase = (1, 1j, -1, -1j)[ipow]
                key = (x3, z3)
                acc[key] = acc.get(key, 0.0) + phase * c1 * c2
        return PauliSum(self.n, acc)

    def dagger(self) -> "PauliSum":
        """Hermitian conjugate (base strings are Hermitian)."""
        return PauliSum(self.n, {k: c.conjugate() for k, c in self.terms.items()})

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def coefficient_one_norm(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def support(self) -> frozenset[int]:
        """Qubits on which any term acts non-identically."""
        mask = 0
        for x, z in self.terms:
            mask |= x | z
        return frozenset(i for i in range(self.n) if (mask >> i) & 1)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def term_list(self) -> list[PauliTerm]:
        return [PauliTerm(self.n, x, z, c) for (x, z), c in sorted(self.terms.items())]

    def __repr__(self) -> str:
        if not self.terms:
            return f"PauliSum(0, n={self.n})"
        parts = [f"({c:+g})*{PauliTerm(self.n, x, z, c).label()}" for (x, z), c in sorted(self.terms.items())]
        return "PauliSum(" + " ".join(parts[:6]) + (" ..." if len(parts) > 6 else "") + ")"

    # -- dense conversion ---------------------------------------------------

    def to_dense(self) -> np.ndarray:
        """Exact 2^n x 2^n complex matrix (qubit 0 = least significant factor)."""
        check_dense_cap(self.n)
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=np.complex128)
        cols = np.arange(dim, dtype=np.int64)
        for (x, z), coeff in self.terms.items():
            phase = (1, 1j, -1, -1j)[_popcount(x & z) % 4]
            signs = 1.0 - 2.0 * (
                np.bitwise_count(np.bitwise_and(cols, z)).astype(np.int64) & 1
            )
            out[cols ^ x, cols] += coeff * phase * signs
        return out


def commutator(s1: PauliSum, s2: PauliSum) -> PauliSum:
    """Simplified [s1, s2].

    Two Pauli strings either commute or anticommute, so each term pair
    contributes either nothing or twice its product.
    """
    if s1.n != s2.n:
        raise ValueError(f"qubit count mismatch: {s1.n} != {s2.n}")
    acc: dict[tuple[int, int], complex] = {}
    for (x1, z1), c1 in s1.terms.items():
        c1x1z1 = _popcount(x1 & z1)
        for (x2, z2), c2 in s2.terms.items():
            # anticommute iff the symplectic form popcount(x1&z2) + popcount(z1&x2) is odd
            if (_popcount(x1 & z2) + _popcount(z1 & x2)) & 1 == 0:
                continue
            x3 = x1 ^ x2
            z3 = z1 ^ z2
            ipow = (
                c1x1z1
                + _popcount(x2 & z2)
                - _popcount(x3 & z3)
                + 2 * _popcount(x2 & z1)
            ) % 4
            phase = (1, 1j, -1, -1j)[ipow]
            key = (x3, z3)
            acc[key] = acc.get(key, 0.0) + 2.0 * phase * c1 * c2
    return PauliSum(s1.n, acc)


def nested_commutator(ops: list[PauliSum]) -> PauliSum:
    """Right-nested commutator.

    For ops = [O_s, ..., O_2, O_1] returns [O_s, [..., [O_2, O_1]]]; the last
    list element is the innermost-right operand.
    """
    if len(ops) < 2:
        raise ValueError(f"need at least 2 operands, got {len(ops)}")
    inner = commutator(ops[-2], ops[-1])
    for op in reversed(ops[:-2]):
        if inner.is_zero():
            return inner
        inner = commutator(op, inner)
    return inner


def ad_power(a: PauliSum, b: PauliSum, q: int) -> PauliSum:
    """ad_a^q (b) = [a, [a, ... [a, b]]] with q nestings (q=0 returns b)."""
    if q < 0:
        raise ValueError(f"ad power must be >= 0, got {q}")
    out = b
    for _ in range(q):
        if out.is_zero():
            return out
        out = commutator(a, out)
    return out
