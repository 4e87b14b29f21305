"""Trotter-number selection for quantum Monte Carlo: transverse-field Ising
partition functions and ferromagnetic spin systems, with dense eigenvalue
verification of the multiplicative error at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import check_dense_cap
from .opnorm import norm_in_mode
from .pauli import PauliSum, commutator


@dataclass
class QmcPlan:
    r: int
    constraints: dict[str, float] = field(default_factory=dict)
    eps: float = 0.0
    t: float = 0.0
    power_of_two: bool = False

    def __post_init__(self):
        for name, v in self.constraints.items():
            if self.r < v - 1e-9:
                raise ValueError(f"r={self.r} violates constraint {name}={v}")


def _next_power_of_two(x: float) -> int:
    r = 1
    while r < x:
        r *= 2
    return r


def tfim_trotter_number(
    a: PauliSum, b: PauliSum, t: float, eps: float, norm_mode: str = "dense-exact"
) -> QmcPlan:
    """Power-of-2 r making the symmetrized-step eigenvalue ratios e^{+-eps}-tight:

    r >= max( 4 t (||A|| + ||B||),
              sqrt(t^3 ||[A,[A,B]]|| / eps),
              sqrt(2 t^3 ||[B,[B,A]]|| / (3 eps)) ).
    """
    if t <= 0:
        raise ValueError(f"need t > 0, got {t}")
    if not 0 < eps < 1:
        raise ValueError(f"need 0 < eps < 1, got {eps}")
    if not a.is_hermitian() or not b.is_hermitian():
        raise ValueError("A and B must be Hermitian")
    norm_a = norm_in_mode(a, norm_mode)
    norm_b = norm_in_mode(b, norm_mode)
    aab = norm_in_mode(commutator(a, commutator(a, b)), norm_mode)
    bba = norm_in_mode(commutator(b, commutator(b, a)), norm_mode)
    constraints = {
        "norm": 4.0 * t * (norm_a + norm_b),
        "comm_aab": math.sqrt(t**3 * aab / eps),
        "comm_bba": math.sqrt(2.0 * t**3 * bba / (3.0 * eps)),
    }
    r = _next_power_of_two(max(constraints.values()))
    return QmcPlan(r=r, constraints=constraints, eps=eps, t=t, power_of_two=True)


def _symmetrized_step_eigs(a_dense, b_dense, t, r):
    """log-eigenvalues of U = e^{(t/r)(A+B)} and V = e^{(t/2r)A}e^{(t/r)B}e^{(t/2r)A},
    both sorted nonincreasingly."""
    from .dense import expm_real_hermitian

    log_u = np.sort(np.linalg.eigvalsh((t / r) * (a_dense + b_dense)))[::-1]
    ea = expm_real_hermitian(a_dense, t / (2.0 * r))
    eb = expm_real_hermitian(b_dense, t / r)
    v = ea @ eb @ ea
    v = 0.5 * (v + v.conj().T)
    ev = np.linalg.eigvalsh(v)[::-1]
    if np.min(ev) <= 0:
        raise AssertionError("symmetrized step lost positive definiteness")
    return log_u, np.log(ev)


def multiplicative_factor_check(a: PauliSum, b: PauliSum, t: float, r: int) -> tuple[float, float]:
    """(max_i, min_i) of lambda_i(V^r) / lambda_i(U^r), spectra rank-paired.

    Worked in log space: lambda_i(V^r) = lambda_i(V)^r for the positive
    definite V, so ratios are exp(r*log lambda_i(V) - r*log lambda_i(U)).
    """
    if a.n != b.n:
        raise ValueError("A and B must act on the same qubits")
    check_dense_cap(a.n)
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    log_u, log_v = _symmetrized_step_eigs(a.to_dense(), b.to_dense(), t, r)
    diffs = r * (log_v - log_u)
    return float(np.exp(np.max(diffs))), float(np.exp(np.min(diffs)))


def partition_ratio(a: PauliSum, b: PauliSum, t: float, r: int) -> float:
    """Z' / Z with Z' = Tr (e^{(t/2r)A} e^{(t/r)B} e^{(t/2r)A})^r and
    Z = Tr e^{t(A+B)}, via log-sum-exp over the step eigenvalues."""
    if a.n != b.n:
        raise ValueError("A and B must act on the same qubits")
    check_dense_cap(a.n)
    log_u, log_v = _symmetrized_step_eigs(a.to_dense(), b.to_dense(), t, r)
    log_z_prime = _logsumexp(r * log_v)
    log_z = _logsumexp(r * log_u)
    return float(np.exp(log_z_prime - log_z))


def _logsumexp(values: np.ndarray) -> float:
    peak = float(np.max(values))
    return peak + float(np.log(np.sum(np.exp(values - peak))))


# -- matchgates -----------------------------------------------------------------


def matchgates(kind: str, param: float) -> np.ndarray:
    """The nonunitary f/g/h gates; 'f' takes the exponent t (gate diag(e^t, 1)),
    'g' and 'h' take 0 < t < 1/2."""
    if kind == "f":
        return np.array([[math.exp(param), 0.0], [0.0, 1.0]], dtype=np.complex128)
    if kind not in ("g", "h"):
        raise ValueError(f"kind must be 'f', 'g', or 'h', got {kind!r}")
    if not 0 < param < 0.5:
        raise ValueError(f"need 0 < t < 1/2 for {kind}, got {param}")
    t = param
    if kind == "g":
        return np.array(
            [
                [1 + t**2, 0, 0, t],
                [0, 1, 0, 0],
                [0, 0, 1, 0],
                [t, 0, 0, 1],
            ],
            dtype=np.complex128,
        )
    return np.array(
        [
            [1, 0, 0, 0],
            [0, 1 + t**2, t, 0],
            [0, t, 1, 0],
            [0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )


def ferromagnet_trotter_number(n: int, beta: float, eps: float, c: float = 1.0) -> QmcPlan:
    """Step count for the matchgate decomposition of a ferromagnet at inverse
    temperature beta:

    r = max( 2 beta (strict), 24 n^2 beta, 8 n^2 beta^2 / eps,
             2 sqrt(c) n^2 beta^{3/2} / sqrt(eps) ),
    ceiling to an integer.  The constant c in the last constraint is not
    pinned by the analysis and is exposed with default 1.
    """
    if n < 1 or beta <= 0 or eps <= 0 or c <= 0:
        raise ValueError("need n >= 1, beta > 0, eps > 0, c > 0")
    constraints = {
        "gate_domain": 2.0 * beta,
        "linear": 24.0 * n**2 * beta,
        "quadratic": 8.0 * n**2 * beta**2 / eps,
        "w_bound": 2.0 * math.sqrt(c) * n**2 * beta**1.5 / math.sqrt(eps),
    }
    r = max(1, math.ceil(max(constraints.values())))
    if r <= constraints["gate_domain"]:  # strict inequality r > 2 beta
        r += 1
    return QmcPlan(r=r, constraints=constraints, eps=eps, t=beta, power_of_two=False)
