"""Non-asymptotic evaluation of the product-formula resource formulas.

Every O/Theta prefactor and log factor is set to 1; o(1) exponents are
realized as 1/p for the chosen order p.  The output is a comparison
instrument, not a guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class SimulationPlan:
    model: str
    params: dict = field(default_factory=dict)
    r: int = 1
    gates: float = 0.0
    ell: int | None = None
    notes: str = ""

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.gates < self.r:
            raise ValueError("gate count cannot undercut the step count")


_NOTE = "prefactor convention: all O/Theta constants and log factors set to 1"


def _ceil_r(raw: float) -> int:
    return max(1, math.ceil(raw - 1e-12))


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def plan(model: str, **params) -> SimulationPlan:
    """Step and gate counts for one of the supported model families.

    Common parameters: t, eps, p; see the per-model branches for the rest.
    """
    if model == "electronic-structure":
        return _plan_electronic(**params)
    if model == "k-local":
        return _plan_klocal(**params)
    if model == "power-law":
        return _plan_power_law(**params)
    if model == "power-law-truncated":
        return _plan_power_law_truncated(**params)
    if model == "quasilocal":
        return _plan_quasilocal(**params)
    if model == "clustered":
        return _plan_clustered(**params)
    raise ValueError(f"unknown model {model!r}")


def _common(t, eps, p):
    _require(t > 0 and eps > 0 and p >= 1, "need t > 0, eps > 0, p >= 1")


def _plan_electronic(n: int, t: float, eps: float, p: int) -> SimulationPlan:
    """Plane-wave-basis electronic structure: r = (nt)^{1+1/p} / eps^{1/p},
    ~n gates per Trotter step (log factors suppressed)."""
    _common(t, eps, p)
    _require(n >= 1, "need n >= 1")
    r = _ceil_r((n * t) ** (1 + 1 / p) / eps ** (1 / p))
    return SimulationPlan(
        model="electronic-structure",
        params={"n": n, "t": t, "eps": eps, "p": p},
        r=r,
        gates=r * n,
        notes=_NOTE + "; per-step cost reported as n, hiding log factors",
    )


def _plan_klocal(
    n: int, t: float, eps: float, p: int, k: int, one_norm: float, induced_one_norm: float
) -> SimulationPlan:
    """k-local Hamiltonians: r = |||H|||_1 ||H||_1^{1/p} t^{1+1/p} / eps^{1/p},
    n^k gates per step."""
    _common(t, eps, p)
    _require(n >= 1 and k >= 1, "need n >= 1 and k >= 1")
    _require(one_norm >= 0 and induced_one_norm >= 0, "norms must be nonnegative")
    r = _ceil_r(induced_one_norm * one_norm ** (1 / p) * t ** (1 + 1 / p) / eps ** (1 / p))
    return SimulationPlan(
        model="k-local",
        params={
            "n": n,
            "t": t,
            "eps": eps,
            "p": p,
            "k": k,
            "one_norm": one_norm,
            "induced_one_norm": induced_one_norm,
        },
        r=r,
        gates=r * n**k,
        notes=_NOTE,
    )


def power_law_r_exponent_n(alpha: float, d: int, p: int) -> float:
    """Exponent of n in the power-law step count (continuous at alpha = d
    within the log-factor convention)."""
    if alpha < d:
        return 1 - alpha / d + (2 - alpha / d) / p
    return 1.0 / p


def _plan_power_law(n: int, t: float, eps: float, p: int, alpha: float, d: int) -> SimulationPlan:
    """Full power-law interactions, three decay regimes; n^2 gates per step."""
    _common(t, eps, p)
    _require(n >= 2 and d in (1, 2, 3) and alpha >= 0, "need n >= 2, d in {1,2,3}, alpha >= 0")
    base = t ** (1 + 1 / p) / eps ** (1 / p)
    if alpha < d:
        r = _ceil_r(n ** (1 - alpha / d + (2 - alpha / d) / p) * base)
    elif alpha == d:
        r = _ceil_r(n ** (1 / p) * math.log(n) ** (1 + 1 / p) * base)
    else:
        r = _ceil_r(n ** (1 / p) * base)
    return SimulationPlan(
        model="power-law",
        params={"n": n, "t": t, "eps": eps, "p": p, "alpha": alpha, "d": d},
        r=r,
        gates=r * n**2,
        notes=_NOTE,
    )


def _truncation_cutoff(n: int, t: float, eps: float, alpha: float, d: int) -> int:
    raw = (n * t / eps) ** (1.0 / (alpha - d))
    ell = max(1, math.ceil(raw - 1e-12))
    return min(ell, max(1, math.ceil(n ** (1.0 / d))))


def _plan_power_law_truncated(
    n: int, t: float, eps: float, p: int, alpha: float, d: int
) -> SimulationPlan:
    """Rapidly decaying power-law interactions simulated after dropping terms
    beyond range ell = (nt/eps)^{1/(alpha-d)}; n*ell^d gates per step."""
    _common(t, eps, p)
    _require(n >= 2 and d in (1, 2, 3), "need n >= 2 and d in {1,2,3}")
    _require(alpha > d, f"truncation requires alpha > d, got alpha={alpha}, d={d}")
    ell = _truncation_cutoff(n, t, eps, alpha, d)
    r = _ceil_r(n ** (1 / p) * t ** (1 + 1 / p) / eps ** (1 / p))
    return SimulationPlan(
        model="power-law-truncated",
        params={"n": n, "t": t, "eps": eps, "p": p, "alpha": alpha, "d": d},
        r=r,
        gates=r * n * ell**d,
        ell=ell,
        notes=_NOTE + "; ell clamped to [1, n^{1/d}]",
    )


def _plan_quasilocal(n: int, t: float, eps: float, p: int, d: int) -> SimulationPlan:
    """Exponentially decaying interactions: cutoff ell = log(nt/eps)."""
    _common(t, eps, p)
    _require(n >= 2 and d in (1, 2, 3), "need n >= 2 and d in {1,2,3}")
    raw = math.log(max(n * t / eps, math.e))
    ell = min(max(1, math.ceil(raw - 1e-12)), max(1, math.ceil(n ** (1.0 / d))))
    r = _ceil_r(n ** (1 / p) * t ** (1 + 1 / p) / eps ** (1 / p))
    return SimulationPlan(
        model="quasilocal",
        params={"n": n, "t": t, "eps": eps, "p": p, "d": d},
        r=r,
        gates=r * n * ell**d,
        ell=ell,
        notes=_NOTE + "; ell clamped to [1, n^{1/d}]",
    )


def _plan_clustered(t: float, eps: float, p: int, h_b: float, cc: float) -> SimulationPlan:
    """Clustered Hamiltonians: r = h_B^{1/p} t^{1+1/p} / eps^{1/p}; the hybrid
    simulator runs in 2^{r * cc(g)}, so `gates` reports that runtime exponent."""
    _common(t, eps, p)
    _require(h_b >= 0 and cc >= 1, "need h_B >= 0 and cc >= 1")
    r = _ceil_r(h_b ** (1 / p) * t ** (1 + 1 / p) / eps ** (1 / p))
    return SimulationPlan(
        model="clustered",
        params={"t": t, "eps": eps, "p": p, "h_b": h_b, "cc": cc},
        r=r,
        gates=r * cc,
        notes=_NOTE + "; gates is the runtime exponent r*cc(g) of the hybrid simulator",
    )
