"""Global knobs shared across modules."""

import os

# Largest qubit count for which dense 2^n x 2^n matrices may be built.
# 2^14 keeps a single complex matrix around 4 GB worst case.
_DEFAULT_DENSE_QUBIT_CAP = 14

_dense_qubit_cap = _DEFAULT_DENSE_QUBIT_CAP


def dense_qubit_cap() -> int:
    return _dense_qubit_cap


def set_dense_qubit_cap(n: int) -> None:
    global _dense_qubit_cap
    if n < 1:
        raise ValueError(f"dense qubit cap must be >= 1, got {n}")
    _dense_qubit_cap = n


def load_cap_from_env() -> None:
    """Honor TROTTER_DENSE_CAP if set (used by the CLI entry point)."""
    raw = os.environ.get("TROTTER_DENSE_CAP")
    if raw:
        set_dense_qubit_cap(int(raw))


def check_dense_cap(n: int) -> None:
    if n > _dense_qubit_cap:
        raise ValueError(
            f"dense operation on {n} qubits exceeds the cap of {_dense_qubit_cap}; "
            "raise it via trotterkit.config.set_dense_qubit_cap or TROTTER_DENSE_CAP"
        )
