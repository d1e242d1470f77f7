"""Verification suites behind ``obound verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle, polytope
from .bounds import f_plus, gated_lower
from .core import Model
from .propagation import classical_lower_map
from .witness import BoundKind, max_violation_search

SCAN_TOL = 1e-3
ALGEBRA_TOL = 1e-9
EXACT_TOL = 1e-12

# analytic maximizers of the violation gap, (beta, gamma)
MAXIMIZERS = {
    BoundKind.LOWER: (math.pi / 6, math.pi / 6),
    BoundKind.UPPER: (math.pi / 6, math.pi / 3),
}


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    details: dict = field(default_factory=dict)


def mixed_qubit_envelope(x, y):
    """``(r_minus, r_plus)`` in the expanded form ``xy + (1-x)(1-y) -/+ 2 sqrt(xy(1-x)(1-y))``."""
    base = x * y + (1 - x) * (1 - y)
    cross = 2 * np.sqrt(np.clip(x * y * (1 - x) * (1 - y), 0.0, None))
    return base - cross, base + cross


def triangle(trials: int = 100, seed: int = 0, steps: int = 256) -> SuiteResult:
    rng = oracle.make_rng(seed)
    worst = 0.0
    for x, y in rng.random((trials, 2)):
        lo, hi = oracle.triangle_scan(float(x), float(y), steps)
        worst = max(worst, abs(lo - gated_lower(x, y)), abs(hi - f_plus(x, y)))
    return SuiteResult("triangle", worst <= SCAN_TOL, {"trials": trials, "max_deviation": worst, "tol": SCAN_TOL})


def mixed_qubit(trials: int = 10_000, seed: int = 0) -> SuiteResult:
    t = oracle.random_mixed_qubit_triples(trials, seed)
    r_minus, r_plus = mixed_qubit_envelope(t.r_ab, t.r_ac)
    excess = float(max(np.max(r_minus - t.r_bc), np.max(t.r_bc - r_plus), 0.0))
    return SuiteResult("mixed-qubit", excess <= ALGEBRA_TOL, {"trials": trials, "max_excess": excess})


def soundness_batch(trials: int = 200, seed: int = 0, max_n: int = 7) -> SuiteResult:
    rng = oracle.make_rng(seed)
    failures = []
    checked = 0
    for k in range(trials):
        n = int(rng.integers(3, max_n + 1))
        d = int(rng.choice([2, 3, 4]))
        model = Model.QUBIT if d == 2 and k % 2 == 0 else Model.PURE_QUDIT
        frac = float(rng.uniform(0.2, 0.8))
        rep = oracle.soundness_trial(n, d, frac, model, oracle.make_rng(seed, k))
        checked += rep.checked
        if not rep.passed:
            failures.append({"trial": k, "n": n, "d": d, "model": model.value,
                             "failures": len(rep.failures), "infeasible": rep.infeasible is not None})
    return SuiteResult("propagation", not failures,
                       {"trials": trials, "held_out_checked": checked, "failed_trials": failures})


def polytope_suite(ms: list[int] | None = None) -> SuiteResult:
    ms = ms or list(range(2, 13))
    rows = []
    ok = True
    for m in ms:
        rep = polytope.check_boole_inequalities(m)
        names = polytope.inequality_names(m)
        ranks = {n: polytope.facet_dimension(m, n) for n in names}
        good = rep.ok and all(r == m for r in ranks.values())
        ok &= good
        rows.append({"m": m, "violations": sum(rep.violations.values()),
                     "facet_ranks": sorted(set(ranks.values())), "ok": good})
    return SuiteResult("polytope", ok, {"per_m": rows})


def classical_paths(trials: int = 20, seed: int = 0, max_n: int = 6) -> SuiteResult:
    rng = oracle.make_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(3, max_n + 1))
        g = oracle.random_overlap_graph(n, rng, edge_prob=float(rng.uniform(0.3, 0.9)))
        fast = classical_lower_map(g)
        slow = oracle.connected_subgraph_lower_all(g)
        worst = max(worst, max(abs(fast[p] - slow[p]) for p in fast))
    return SuiteResult("classical-paths", worst <= EXACT_TOL, {"trials": trials, "max_deviation": worst})


def max_violation(grid_steps: int = 512) -> SuiteResult:
    out = {}
    ok = True
    for kind in BoundKind:
        e = max_violation_search(kind, grid_steps)
        b0, c0 = MAXIMIZERS[kind]
        good = abs(e.D - 0.25) <= 1e-6 and abs(e.beta - b0) <= 1e-6 and abs(e.gamma - c0) <= 1e-6
        ok &= good
        out[kind.value] = {"D": round(e.D, 9), "beta": e.beta, "gamma": e.gamma,
                           "beta_over_pi": e.beta / math.pi, "gamma_over_pi": e.gamma / math.pi}
    return SuiteResult("max-violation", ok, out)


SUITES = ("triangle", "mixed-qubit", "propagation", "polytope", "classical-paths", "max-violation")


def run(name: str, seed: int = 0, trials: int | None = None, m: int | None = None) -> SuiteResult:
    kw = {} if trials is None else {"trials": trials}
    if name == "triangle":
        return triangle(seed=seed, **kw)
    if name == "mixed-qubit":
        return mixed_qubit(seed=seed, **kw)
    if name == "propagation":
        return soundness_batch(seed=seed, **kw)
    if name == "polytope":
        return polytope_suite([m] if m is not None else None)
    if name == "classical-paths":
        return classical_paths(seed=seed, **kw)
    if name == "max-violation":
        return max_violation()
    raise ValueError(f"unknown suite {name!r}")
