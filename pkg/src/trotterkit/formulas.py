"""Product-formula schedules, dense evaluation, and empirical Trotter error.

A schedule is the (stage x summand) coefficient table a[(v, g)] together
with one summand permutation per stage.  The operator it denotes is

    S(t) = prod_{v=1..V} prod_{g=1..G} exp(t * a[v, g] * gen(H_{perm_v[g]})),

products read right-to-left: stage 1 acts first, and within a stage the
g=1 factor acts first.  gen(H) is -i*H in real-time mode and +H in
imaginary-time mode.  Stage/summand indices are 0-based in code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import check_dense_cap
from .dense import HermitianExponentiator, spectral_norm
from .hamiltonians import GroupedHamiltonian

R_SEARCH_CAP = 10_000_000


def suzuki_u(k: int) -> float:
    """Recursion coefficient u_k = 1/(4 - 4^(1/(2k-1)))."""
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


@dataclass(frozen=True)
class FormulaSchedule:
    coeffs: np.ndarray  # shape (upsilon, gamma)
    perms: tuple[tuple[int, ...], ...]  # perms[v][g] = summand index, 0-based
    order_p: int

    @property
    def upsilon(self) -> int:
        return self.coeffs.shape[0]

    @property
    def gamma(self) -> int:
        return self.coeffs.shape[1]

    def validate(self) -> None:
        """Structural invariants for genuine product formulas."""
        if np.max(np.abs(self.coeffs)) > 1.0 + 1e-12:
            raise ValueError("schedule has a coefficient exceeding 1 in magnitude")
        if len(self.perms) != self.upsilon:
            raise ValueError("one permutation per stage required")
        for perm in self.perms:
            if sorted(perm) != list(range(self.gamma)):
                raise ValueError(f"{perm} is not a permutation of 0..{self.gamma - 1}")
        sums = self.per_summand_sums()
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise ValueError(f"per-summand coefficient sums are {sums}, expected all 1")

    def per_summand_sums(self) -> np.ndarray:
        """sum_v a[v, g'] collected by the summand each slot points at."""
        sums = np.zeros(self.gamma)
        for v in range(self.upsilon):
            for slot in range(self.gamma):
                sums[self.perms[v][slot]] += self.coeffs[v, slot]
        return sums

    def exponential_sequence(self, merge: bool = True) -> list[tuple[int, float]]:
        """(summand, coefficient) factors in application order.

        With merge=True, adjacent factors of the same summand are combined
        (the central pair of S2, and across Suzuki recursion seams) and
        exactly-zero factors are dropped.
        """
        seq: list[tuple[int, float]] = []
        for v in range(self.upsilon):
            for slot in range(self.gamma):
                a = float(self.coeffs[v, slot])
                if a == 0.0:
                    continue
                g = self.perms[v][slot]
                if merge and seq and seq[-1][0] == g:
                    merged = seq[-1][1] + a
                    if merged == 0.0:
                        seq.pop()
                    else:
                        seq[-1] = (g, merged)
                else:
                    seq.append((g, a))
        return seq

    def is_palindromic(self, tol: float = 1e-12) -> bool:
        seq = self.exponential_sequence()
        rev = seq[::-1]
        return all(g1 == g2 and abs(a1 - a2) <= tol for (g1, a1), (g2, a2) in zip(seq, rev))

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "trotterkit/schedule/1",
                "order_p": self.order_p,
                "coeffs": self.coeffs.tolist(),
                "perms": [list(p) for p in self.perms],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FormulaSchedule":
        data = json.loads(text)
        return cls(
            coeffs=np.array(data["coeffs"], dtype=float),
            perms=tuple(tuple(p) for p in data["perms"]),
            order_p=int(data["order_p"]),
        )


def lie_trotter(gamma: int) -> FormulaSchedule:
    """First-order formula: one stage, unit coefficients, identity order."""
    if gamma < 1:
        raise ValueError(f"need at least one summand, got {gamma}")
    return FormulaSchedule(
        coeffs=np.ones((1, gamma)),
        perms=(tuple(range(gamma)),),
        order_p=1,
    )


def _suzuki_stages(order: int, gamma: int, scale: float) -> list[tuple[bool, float]]:
    """Stage list [(reversed?, half-coefficient)] for S_order(scale * t)."""
    if order == 2:
        return [(False, scale / 2.0), (True, scale / 2.0)]
    u = suzuki_u(order // 2)
    outer = _suzuki_stages(order - 2, gamma, u * scale)
    middle = _suzuki_stages(order - 2, gamma, (1.0 - 4.0 * u) * scale)
    return outer + outer + middle + outer + outer


def suzuki(order_2k: int, gamma: int) -> FormulaSchedule:
    """Recursive Suzuki formula of even order 2k, flattened to a stage table."""
    if order_2k < 2 or order_2k % 2 != 0:
        raise ValueError(f"Suzuki order must be a positive even integer, got {order_2k}")
    if order_2k > 8:
        raise ValueError(f"orders above 8 are not supported, got {order_2k}")
    if gamma < 1:
        raise ValueError(f"need at least one summand, got {gamma}")
    stages = _suzuki_stages(order_2k, gamma, 1.0)
    forward = tuple(range(gamma))
    backward = tuple(range(gamma - 1, -1, -1))
    coeffs = np.array([[c] * gamma for _, c in stages])
    perms = tuple(backward if rev else forward for rev, _ in stages)
    return FormulaSchedule(coeffs=coeffs, perms=perms, order_p=order_2k)


# -- dense evaluation ---------------------------------------------------------


class DenseFormulaEvaluator:
    """Caches eigendecompositions of the summands and the total operator.

    mode "real" exponentiates -i*t*H (unitary factors); mode "imag"
    exponentiates +t*H (positive-definite factors).
    """

    def __init__(self, h: GroupedHamiltonian, mode: str = "real"):
        check_dense_cap(h.n)
        if mode not in ("real", "imag"):
            raise ValueError(f"mode must be 'real' or 'imag', got {mode!r}")
        self.mode = mode
        self.n = h.n
        self.dim = 1 << h.n
        self.group_mats = [g.operator().to_dense() for g in h.groups]
        self.group_exp = [HermitianExponentiator(m) for m in self.group_mats]
        self.total_exp = HermitianExponentiator(sum(self.group_mats))
        self.num_groups = len(self.group_mats)
        self._exact_cache: dict[float, np.ndarray] = {}

    def _scale(self, x: float) -> complex:
        return -1j * x if self.mode == "real" else x

    def exact(self, t: float) -> np.ndarray:
        if t not in self._exact_cache:
            if len(self._exact_cache) > 8:
                self._exact_cache.clear()
            self._exact_cache[t] = self.total_exp.expm(self._scale(t))
        return self._exact_cache[t]

    def generator(self, g: int) -> np.ndarray:
        return self._scale(1.0) * self.group_mats[g]

    def total_generator(self) -> np.ndarray:
        return self._scale(1.0) * sum(self.group_mats)

    def step(self, s: FormulaSchedule, t: float) -> np.ndarray:
        if s.gamma != self.num_groups:
            raise ValueError(f"schedule has {s.gamma} summands, Hamiltonian has {self.num_groups}")
        factors: dict[tuple[int, float], np.ndarray] = {}
        out = np.eye(self.dim, dtype=np.complex128)
        for g, a in s.exponential_sequence():
            key = (g, a)
            if key not in factors:
                factors[key] = self.group_exp[g].expm(self._scale(a * t))
            out = factors[key] @ out
        return out

    def stepped(self, s: FormulaSchedule, t: float, r: int) -> np.ndarray:
        return np.linalg.matrix_power(self.step(s, t / r), r)

    def step_error(self, s: FormulaSchedule, t: float, r: int) -> float:
        """|| S(t/r)^r - exp(t*gen(H)) ||.

        In real-time mode at large dimension, W = U^dag S^r is unitary, so
        the error is sqrt(lambda_max(2I - W - W^dag)) with a Hermitian
        eigenproblem; the squaring floors the result around 1e-6, which is
        irrelevant for threshold searches.  Small dimensions take the direct
        full-precision norm.
        """
        stepped = self.stepped(s, t, r)
        if self.mode != "real" or self.dim <= 256:
            return spectral_norm(stepped - self.exact(t))
        w = self.exact(t).conj().T @ stepped
        herm = -(w + w.conj().T)
        herm[np.diag_indices(self.dim)] += 2.0
        from .dense import lanczos_extreme

        top, converged = lanczos_extreme(herm.__matmul__, self.dim, 1e-9, 240, 0x5EED)
        if not converged:
            top = float(np.max(np.linalg.eigvalsh(herm)))
        return float(np.sqrt(max(top, 0.0)))


def evaluate(s: FormulaSchedule, h: GroupedHamiltonian, t: float, mode: str = "real") -> np.ndarray:
    """Dense product-formula operator S(t)."""
    return DenseFormulaEvaluator(h, mode).step(s, t)


def empirical_error(
    h: GroupedHamiltonian,
    s: FormulaSchedule,
    t: float,
    r: int,
    mode: str = "real",
    evaluator: DenseFormulaEvaluator | None = None,
) -> float:
    """|| S(t/r)^r - exp(t * gen(H)) || by dense computation."""
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    ev = evaluator if evaluator is not None else DenseFormulaEvaluator(h, mode)
    return ev.step_error(s, t, r)


class NonmonotoneEmpiricalError(RuntimeError):
    """Raised when the boundary pair around the found r violates monotonicity."""


def _interp_next(lo: int, e_lo: float, hi: int, e_hi: float, eps: float) -> int:
    """Log-log interpolation of the crossing point, clamped inside (lo, hi)."""
    import math

    if e_hi <= 0 or e_lo <= e_hi:
        guess = (lo + hi) // 2
    else:
        frac = (math.log(e_lo) - math.log(eps)) / (math.log(e_lo) - math.log(e_hi))
        guess = round(math.exp(math.log(lo) + frac * (math.log(hi) - math.log(lo))))
    return min(max(guess, lo + 1), hi - 1)


def empirical_trotter_number(
    h: GroupedHamiltonian,
    s: FormulaSchedule,
    t: float,
    eps: float,
    mode: str = "real",
    r_cap: int = R_SEARCH_CAP,
    evaluator: DenseFormulaEvaluator | None = None,
    r_hint: int | None = None,
) -> int:
    """Minimal r with empirical error <= eps.

    A doubling phase brackets the crossing (seeded near r_hint when given),
    then log-log interpolation narrows it; each probe is a dense error
    computation.  The returned r is re-verified against r-1; a violation of
    the assumed monotone decrease raises NonmonotoneEmpiricalError instead
    of silently returning.
    """
    if eps <= 0:
        raise ValueError(f"need eps > 0, got {eps}")
    ev = evaluator if evaluator is not None else DenseFormulaEvaluator(h, mode)
    cache: dict[int, float] = {}

    def err(r: int) -> float:
        if r not in cache:
            cache[r] = empirical_error(h, s, t, r, mode, evaluator=ev)
        return cache[r]

    lo = None  # largest known failing r
    hi = None  # smallest known passing r
    start = max(1, min(r_hint, r_cap)) if r_hint else 1
    probe = start
    while hi is None:
        if err(probe) <= eps:
            hi = probe
        else:
            lo = probe if lo is None or probe > lo else lo
            probe *= 2
            if probe > r_cap:
                raise RuntimeError(f"no r <= {r_cap} reaches error {eps}")
    # walk the passing probe down if the hint overshot
    while hi > 1 and (lo is None or hi - 1 > lo):
        below = hi - 1 if lo is not None and hi - lo <= 2 else max(1, (lo or 0) + 1, hi // 2)
        if err(below) <= eps:
            hi = below
        else:
            lo = below
            break
    if lo is not None:
        while hi - lo > 1:
            mid = _interp_next(lo, err(lo), hi, err(hi), eps)
            if err(mid) <= eps:
                hi = mid
            else:
                lo = mid
    if err(hi) > eps or (hi > 1 and err(hi - 1) <= eps):
        raise NonmonotoneEmpiricalError(
            f"empirical error is not monotone around r={hi} at t={t}"
        )
    return hi


def error_operators(
    h: GroupedHamiltonian, s: FormulaSchedule, t: float, mode: str = "real"
) -> tuple[np.ndarray, np.ndarray]:
    """Additive and multiplicative error operators.

    additive = S(t) - exp(tH'); multiplicative = exp(-tH') S(t) - I with
    H' the generator (so S = exp(tH') (I + multiplicative)).
    """
    ev = DenseFormulaEvaluator(h, mode)
    st = ev.step(s, t)
    additive = st - ev.exact(t)
    multiplicative = ev.total_exp.expm(-ev._scale(t)) @ st - np.eye(ev.dim)
    return additive, multiplicative


def exponentiated_error_sample(
    h: GroupedHamiltonian, s: FormulaSchedule, tau: float, mode: str = "real"
) -> np.ndarray:
    """The error operator appearing in the exponent, evaluated at time tau.

    E(tau) = sum over stage-slot pairs, in lexicographic order, of the
    conjugation by all later exponentials applied to that slot's scaled
    generator, minus the total generator.  Coefficient rows summing to one
    make E(0) vanish.
    """
    ev = DenseFormulaEvaluator(h, mode)
    if s.gamma != ev.num_groups:
        raise ValueError(f"schedule has {s.gamma} summands, Hamiltonian has {ev.num_groups}")
    dim = ev.dim
    left = np.eye(dim, dtype=np.complex128)
    left_inv = np.eye(dim, dtype=np.complex128)
    total = np.zeros((dim, dim), dtype=np.complex128)
    pairs = [(v, slot) for v in range(s.upsilon) for slot in range(s.gamma)]
    for v, slot in reversed(pairs):
        a = float(s.coeffs[v, slot])
        g = s.perms[v][slot]
        total += left @ (a * ev.generator(g)) @ left_inv
        factor = ev.group_exp[g].expm(ev._scale(a * tau))
        inv_factor = ev.group_exp[g].expm(-ev._scale(a * tau))
        left = left @ factor
        left_inv = inv_factor @ left_inv
    return total - ev.total_generator()


@dataclass
class OrderCheckReport:
    order_p: int
    additive_slope: float
    exponent_slope: float
    additive_pass: bool
    exponent_pass: bool
    grid: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.additive_pass and self.exponent_pass


_SLOPE_FLOOR = 1e-12


def _fit_slope(ts: list[float], value_fn, floor: float = _SLOPE_FLOOR) -> float:
    """Least-squares log-log slope over points above the numerical floor.

    Errors of high-order formulas sink below double precision on the default
    grid, so the window slides geometrically upward until enough points are
    usable (capped at t = 1).
    """
    ts = sorted(ts)
    values = {t: float(value_fn(t)) for t in ts}
    ratio = ts[-1] / ts[-2] if len(ts) > 1 else 1.4
    while sum(v > floor for v in values.values()) < 4 and max(values) < 1.0:
        t_next = max(values) * ratio
        values[t_next] = float(value_fn(t_next))
    usable = sorted(t for t, v in values.items() if v > floor)[:8]
    if len(usable) < 3:
        raise RuntimeError("too few points above the numerical floor to fit a slope")
    x = np.log(np.array(usable))
    y = np.log(np.array([values[t] for t in usable]))
    return float(np.polyfit(x, y, 1)[0])


def order_condition_check(
    h: GroupedHamiltonian,
    s: FormulaSchedule,
    mode: str = "real",
    grid: np.ndarray | None = None,
) -> OrderCheckReport:
    """Fit log-log slopes of the additive error (expect p+1) and of the
    exponent-type error (expect p) over a geometric time grid."""
    ts = np.geomspace(1e-2, 1e-1, 8) if grid is None else np.asarray(grid, dtype=float)
    ev = DenseFormulaEvaluator(h, mode)
    add_slope = _fit_slope(list(ts), lambda t: spectral_norm(ev.step(s, t) - ev.exact(t)))
    exp_slope = _fit_slope(
        list(ts), lambda t: spectral_norm(exponentiated_error_sample(h, s, t, mode))
    )
    p = s.order_p
    return OrderCheckReport(
        order_p=p,
        additive_slope=add_slope,
        exponent_slope=exp_slope,
        additive_pass=(p + 1 - 0.2) <= add_slope <= (p + 1 + 0.3),
        exponent_pass=(p - 0.2) <= exp_slope <= (p + 0.3),
        grid=[float(t) for t in ts],
    )
