"""Batch front-end: benchmark tables, bound/empirical queries, resource plans,
QMC planning, and property-check suites.

Exit codes: 0 ok, 1 contract violation, 2 bad input.  The env variable
TROTTER_DENSE_CAP overrides the dense qubit cap.  All floating point output
is rendered with 17 significant digits and '\n' newlines; benchmark rows are
sorted by (n, instance) so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import config
from .bounds import (
    CLUSTER,
    COEFF_1NORM,
    DENSE_EXACT,
    bound_trotter_number,
    fourth_order_bound,
    one_norm_trotter_number,
    tight_low_order_bound,
)
from .formulas import (
    DenseFormulaEvaluator,
    empirical_error,
    empirical_trotter_number,
    lie_trotter,
    order_condition_check,
    suzuki,
)
from .hamiltonians import group_terms, heisenberg_chain, power_law_heisenberg, tfim
from .opnorm import spectral_norm_pauli
from .serialize import format_float, hamiltonian_from_json, hamiltonian_to_json

SCHEMA = "trotterkit/1"

_MODE_NAMES = {"dense": DENSE_EXACT, "1norm": COEFF_1NORM, "cluster": CLUSTER}


class ContractViolation(RuntimeError):
    pass


def _parse_n_values(spec: str) -> list[int]:
    out: list[int] = []
    for chunk in spec.split(","):
        if ":" in chunk:
            lo, hi = chunk.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return sorted(set(out))


def _build_model(model: str, ordering: str, n: int, seed: int, alpha: float):
    if model == "heisenberg-nn":
        base = heisenberg_chain(n, seed=seed)
    elif model == "heisenberg-pl":
        base = power_law_heisenberg(n, alpha=alpha, seed=seed)
    else:
        raise ValueError(f"unknown model {model!r}")
    return group_terms(base, ordering)


def _schedule_for(order: int, gamma: int):
    return lie_trotter(gamma) if order == 1 else suzuki(order, gamma)


def _bound_report(h, order: int, t: float, mode: str):
    if order in (1, 2):
        return tight_low_order_bound(h, t, order, mode)
    if order == 4:
        return fourth_order_bound(h, t, mode)
    raise ValueError(f"no small-prefactor bound of order {order}; use 1, 2, or 4")


# -- bench ---------------------------------------------------------------------


def cmd_bench(args) -> int:
    n_values = _parse_n_values(args.n)
    order = args.order
    quantities = args.quantities.split(",")
    rows = []
    wall_start = time.time()
    for n in n_values:
        t = float(n) if args.t_rule == "t=n" else args.t
        per_instance: dict[str, list[float]] = {}
        emp_hint = None
        for inst in range(args.instances):
            seed = args.seed + inst
            h = _build_model(args.model, args.ordering, n, seed, args.alpha)
            row = {
                "model": args.model,
                "ordering": args.ordering,
                "n": n,
                "instance": str(inst),
                "seed": seed,
            }
            if "bound" in quantities:
                report = _bound_report(h, order, 1.0, _MODE_NAMES[args.bound_mode])
                k = report.value
                row["r_bound_ours"] = bound_trotter_number(
                    lambda dt: k * (dt ** (order + 1)), t, args.eps
                )
            if "1norm" in quantities:
                norms = [spectral_norm_pauli(g.operator()) for g in h.groups]
                row["r_bound_1norm"] = one_norm_trotter_number(norms, order, t, args.eps)
            if "empirical" in quantities:
                if h.n > config.dense_qubit_cap():
                    raise ValueError(
                        f"empirical mode needs n <= {config.dense_qubit_cap()}, got {h.n}"
                    )
                s = _schedule_for(order, h.num_groups)
                ev = DenseFormulaEvaluator(h)
                row["r_empirical"] = empirical_trotter_number(
                    h, s, t, args.eps, evaluator=ev, r_hint=emp_hint
                )
                emp_hint = row["r_empirical"]
            if "r_bound_ours" in row and "r_empirical" in row:
                row["ratio"] = row["r_bound_ours"] / row["r_empirical"]
            rows.append(row)
            for key in ("r_empirical", "r_bound_ours", "r_bound_1norm", "ratio"):
                if key in row:
                    per_instance.setdefault(key, []).append(float(row[key]))
        for stat in ("mean", "std"):
            srow = {
                "model": args.model,
                "ordering": args.ordering,
                "n": n,
                "instance": stat,
                "seed": args.seed,
            }
            for key, vals in per_instance.items():
                srow[key] = float(np.mean(vals)) if stat == "mean" else float(np.std(vals, ddof=1) if len(vals) > 1 else 0.0)
            rows.append(srow)

    columns = ["model", "ordering", "n", "instance", "seed",
               "r_empirical", "r_bound_ours", "r_bound_1norm", "ratio"]
    order_key = {"mean": 1, "std": 2}
    rows.sort(key=lambda r: (r["n"], order_key.get(r["instance"], 0), r["instance"]))
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            v = row.get(col, "")
            if isinstance(v, float):
                cells.append(format_float(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    output = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    sys.stderr.write(f"bench finished in {time.time() - wall_start:.1f}s\n")
    return 0


# -- bound / empirical ------------------------------------------------------------


def _load_ham(path: str):
    with open(path) as fh:
        return hamiltonian_from_json(fh.read())


def cmd_bound(args) -> int:
    h = _load_ham(args.ham)
    report = _bound_report(h, args.order, args.t, _MODE_NAMES[args.mode])
    report.check_consistency()
    payload = json.loads(report.to_json())
    payload["schema"] = SCHEMA
    print(json.dumps(payload, indent=2))
    return 0


def cmd_empirical(args) -> int:
    h = _load_ham(args.ham)
    s = _schedule_for(args.order, h.num_groups)
    ev = DenseFormulaEvaluator(h, mode=args.time_mode)
    record = {
        "schema": SCHEMA,
        "order": args.order,
        "t": args.t,
        "mode": args.time_mode,
    }
    if args.r is not None:
        record["r"] = args.r
        record["error"] = empirical_error(h, s, args.t, args.r, mode=args.time_mode, evaluator=ev)
    else:
        record["eps"] = args.eps
        record["r"] = empirical_trotter_number(h, s, args.t, args.eps, mode=args.time_mode, evaluator=ev)
    print(json.dumps(record, indent=2))
    return 0


# -- plan ---------------------------------------------------------------------------


def cmd_plan(args) -> int:
    from .planner import plan as make_plan

    shared = {"t": args.t, "eps": args.eps, "p": args.p}
    model_kwargs = {
        "electronic-structure": {"n": args.n},
        "k-local": {
            "n": args.n,
            "k": args.k,
            "one_norm": args.one_norm,
            "induced_one_norm": args.induced_one_norm,
        },
        "power-law": {"n": args.n, "alpha": args.alpha, "d": args.d},
        "power-law-truncated": {"n": args.n, "alpha": args.alpha, "d": args.d},
        "quasilocal": {"n": args.n, "d": args.d},
        "clustered": {"h_b": args.hb, "cc": args.cc},
    }
    if args.grid:
        lines = ["model,r,gates,ell,notes"]
        for model, extra in model_kwargs.items():
            try:
                p = make_plan(model, **shared, **extra)
            except ValueError:
                continue
            ell = "" if p.ell is None else str(p.ell)
            lines.append(
                f"{model},{p.r},{format_float(p.gates)},{ell},\"{p.notes}\""
            )
        print("\n".join(lines))
        return 0
    if args.model is None:
        raise ValueError("pass --model or --grid")
    p = make_plan(args.model, **shared, **model_kwargs[args.model])
    print(
        json.dumps(
            {
                "schema": SCHEMA,
                "model": p.model,
                "params": p.params,
                "r": p.r,
                "gates": p.gates,
                "ell": p.ell,
                "notes": p.notes,
            },
            indent=2,
        )
    )
    return 0


# -- qmc ----------------------------------------------------------------------------


def cmd_qmc(args) -> int:
    from .qmc import (
        ferromagnet_trotter_number,
        multiplicative_factor_check,
        partition_ratio,
        tfim_trotter_number,
    )

    if args.system == "ferromagnet":
        plan = ferromagnet_trotter_number(args.n, args.beta, args.eps, args.c)
        print(
            json.dumps(
                {
                    "schema": SCHEMA,
                    "system": "ferromagnet",
                    "r": plan.r,
                    "constraints": plan.constraints,
                    "eps": plan.eps,
                    "beta": plan.t,
                },
                indent=2,
            )
        )
        return 0
    # transverse-field Ising chain with uniform couplings
    couplings = {(u, u + 1): args.j for u in range(args.n - 1)}
    fields = {u: args.h_field for u in range(args.n)}
    a, b = tfim(couplings, fields)
    plan = tfim_trotter_number(a, b, args.t, args.eps)
    record = {
        "schema": SCHEMA,
        "system": "tfim",
        "r": plan.r,
        "constraints": plan.constraints,
        "eps": plan.eps,
        "t": plan.t,
    }
    if args.verify:
        if args.n > config.dense_qubit_cap():
            raise ValueError("verification needs n within the dense cap")
        mx, mn = multiplicative_factor_check(a, b, args.t, plan.r)
        record["eig_ratio_max"] = mx
        record["eig_ratio_min"] = mn
        record["partition_ratio"] = partition_ratio(a, b, args.t, plan.r)
        import math

        if mx > math.exp(args.eps) + 1e-9 or mn < math.exp(-args.eps) - 1e-9:
            raise ContractViolation("multiplicative factor leaves the e^{+-eps} band")
    print(json.dumps(record, indent=2))
    return 0


# -- check --------------------------------------------------------------------------


def cmd_check(args) -> int:
    suites = (
        ["order-conditions", "cancellation", "conjugation", "qmc"]
        if args.suite == "all"
        else [args.suite]
    )
    failures = 0
    for suite in suites:
        ok, detail = _run_suite(suite, args.seed)
        print(f"{'PASS' if ok else 'FAIL'} {suite}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


def _run_suite(suite: str, seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    if suite == "order-conditions":
        from .pauli import PauliSum
        from .hamiltonians import GroupedHamiltonian, TermGroup

        groups = []
        for gi in range(2):
            s = PauliSum.zero(3)
            for _ in range(3):
                label = "I" * 3
                while set(label) == {"I"}:
                    label = "".join(rng.choice(list("IXYZ")) for _ in range(3))
                s = s + PauliSum.from_label(label, float(rng.normal()))
            nrm = spectral_norm_pauli(s)
            groups.append(TermGroup(f"G{gi}", (s * (1.0 / nrm) if nrm else s,)))
        h = GroupedHamiltonian(3, groups)
        slopes = []
        for order in (1, 2, 4):
            rep = order_condition_check(h, _schedule_for(order, 2))
            slopes.append((order, round(rep.additive_slope, 3), rep.passed))
            if not rep.passed:
                return False, f"slope check failed at order {order}: {rep}"
        return True, f"fitted slopes {slopes}"
    if suite == "cancellation":
        from .local_obs import cancellation_check, shell_decomposition
        from .pauli import PauliSum

        h = heisenberg_chain(10, seed=seed)
        d = shell_decomposition(h, {0}, ell=2, gamma=3)
        obs = PauliSum.from_label("Z" + "I" * 9)
        worst = 0.0
        for _ in range(3):
            t = 0.5 * float(rng.uniform())
            worst = max(worst, cancellation_check(d, obs, t))
        if worst > 1e-10:
            return False, f"cancellation residue {worst:.2e} exceeds 1e-10"
        return True, f"worst residue {worst:.2e}"
    if suite == "conjugation":
        from .bounds import conjugation_remainder_check
        from .pauli import PauliSum

        for _ in range(20):
            n = int(rng.integers(2, 4))
            ops = []
            for _ in range(3):
                s = PauliSum.zero(n)
                for _ in range(int(rng.integers(1, 4))):
                    label = "I" * n
                    while set(label) == {"I"}:
                        label = "".join(rng.choice(list("IXYZ")) for _ in range(n))
                    s = s + PauliSum.from_label(label, float(rng.normal()))
                ops.append(s)
            p = int(rng.integers(1, 4))
            tau = 0.1 * float(rng.uniform())
            value, bound = conjugation_remainder_check(ops[:2], ops[2], p, tau)
            if value > bound + 1e-12:
                return False, f"remainder {value:.3e} exceeds bound {bound:.3e}"
        return True, "20 random conjugation remainders within bound"
    if suite == "qmc":
        import math

        from .qmc import multiplicative_factor_check, tfim_trotter_number

        for n in (3, 4, 5):
            couplings = {
                (u, v): float(rng.uniform(0, 1))
                for u in range(n)
                for v in range(u + 1, n)
                if rng.uniform() < 0.7
            }
            fields = {u: float(rng.uniform(0, 1)) for u in range(n)}
            if not couplings:
                continue
            a, b = tfim(couplings, fields)
            plan = tfim_trotter_number(a, b, 1.0, 0.1)
            mx, mn = multiplicative_factor_check(a, b, 1.0, plan.r)
            if mx > math.exp(0.1) + 1e-9 or mn < math.exp(-0.1) - 1e-9:
                return False, f"eigenvalue ratio ({mn:.6f}, {mx:.6f}) leaves the band at n={n}"
        return True, "eigenvalue ratios inside e^{+-eps} on all instances"
    raise ValueError(f"unknown suite {suite!r}")


# -- generate (convenience for producing Hamiltonian files) ---------------------------


def cmd_generate(args) -> int:
    h = _build_model(args.model, args.ordering, args.n, args.seed, args.alpha)
    text = hamiltonian_to_json(h)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# -- argument wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trotterkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="reproduce benchmark tables (CSV)")
    b.add_argument("--model", required=True, choices=["heisenberg-nn", "heisenberg-pl"])
    b.add_argument("--ordering", default="even-odd", choices=["even-odd", "x-y-z"])
    b.add_argument("--alpha", type=float, default=0.0, help="power-law exponent (heisenberg-pl)")
    b.add_argument("--n", required=True, help="chain sizes: '10', '4:12', or '6,8,10'")
    b.add_argument("--t-rule", default="t=n", choices=["t=n", "fixed"])
    b.add_argument("--t", type=float, default=1.0, help="evolution time for --t-rule fixed")
    b.add_argument("--eps", type=float, default=1e-3)
    b.add_argument("--instances", type=int, default=5)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--order", type=int, default=4, choices=[1, 2, 4])
    b.add_argument("--bound-mode", default="cluster", choices=list(_MODE_NAMES))
    b.add_argument(
        "--quantities",
        default="empirical,bound,1norm",
        help="comma list from {empirical,bound,1norm}",
    )
    b.add_argument("--out", help="CSV output path (default stdout)")
    b.set_defaults(func=cmd_bench)

    bo = sub.add_parser("bound", help="evaluate an error bound on a Hamiltonian file")
    bo.add_argument("--ham", required=True)
    bo.add_argument("--order", type=int, default=4, choices=[1, 2, 4])
    bo.add_argument("--t", type=float, required=True)
    bo.add_argument("--mode", default="dense", choices=list(_MODE_NAMES))
    bo.set_defaults(func=cmd_bound)

    em = sub.add_parser("empirical", help="dense Trotter error or minimal step count")
    em.add_argument("--ham", required=True)
    em.add_argument("--order", type=int, default=4, choices=[1, 2, 4, 6, 8])
    em.add_argument("--t", type=float, required=True)
    em.add_argument("--r", type=int)
    em.add_argument("--eps", type=float, default=1e-3)
    em.add_argument("--time-mode", default="real", choices=["real", "imag"])
    em.set_defaults(func=cmd_empirical)

    pl = sub.add_parser("plan", help="resource planner (single JSON or CSV grid)")
    pl.add_argument("--model", choices=[
        "electronic-structure", "k-local", "power-law", "power-law-truncated",
        "quasilocal", "clustered",
    ])
    pl.add_argument("--grid", action="store_true", help="emit a comparison grid as CSV")
    pl.add_argument("--n", type=int, default=100)
    pl.add_argument("--t", type=float, required=True)
    pl.add_argument("--eps", type=float, required=True)
    pl.add_argument("--p", type=int, default=4)
    pl.add_argument("--alpha", type=float, default=3.0)
    pl.add_argument("--d", type=int, default=1)
    pl.add_argument("--k", type=int, default=2)
    pl.add_argument("--one-norm", type=float, default=1.0)
    pl.add_argument("--induced-one-norm", type=float, default=1.0)
    pl.add_argument("--hb", type=float, default=1.0)
    pl.add_argument("--cc", type=float, default=1.0)
    pl.set_defaults(func=cmd_plan)

    q = sub.add_parser("qmc", help="Monte Carlo step planning")
    q.add_argument("--system", default="tfim", choices=["tfim", "ferromagnet"])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--j", type=float, default=1.0)
    q.add_argument("--h-field", type=float, default=1.0)
    q.add_argument("--t", type=float, default=1.0)
    q.add_argument("--beta", type=float, default=1.0)
    q.add_argument("--eps", type=float, default=0.1)
    q.add_argument("--c", type=float, default=1.0)
    q.add_argument("--verify", action="store_true", help="dense eigenvalue verification")
    q.set_defaults(func=cmd_qmc)

    c = sub.add_parser("check", help="run property-check suites")
    c.add_argument(
        "--suite",
        default="all",
        choices=["order-conditions", "cancellation", "conjugation", "qmc", "all"],
    )
    c.add_argument("--seed", type=int, default=7)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("generate", help="write a built-in model as Hamiltonian JSON")
    g.add_argument("--model", required=True, choices=["heisenberg-nn", "heisenberg-pl"])
    g.add_argument("--ordering", default="x-y-z", choices=["even-odd", "x-y-z", "per-term"])
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    return ap


def main(argv=None) -> int:
    config.load_cap_from_env()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        sys.stderr.write(f"bad input: {exc}\n")
        return 2
    except (ContractViolation, AssertionError, RuntimeError) as exc:
        sys.stderr.write(f"contract violation: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
