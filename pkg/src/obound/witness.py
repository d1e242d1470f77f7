"""Classicality violations, qubit dimension witnesses and maximal violation."""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .bounds import f_minus, triangle_interval
from .core import Model, OverlapGraph, Pair, canonical_pair
from .propagation import classical_lower_path

VERDICT_TOL = 1e-9


class MissingEdgeError(KeyError):
    pass


@dataclass(frozen=True)
class Violation:
    """One violated inequality.

    ``inequality`` is ``"triangle_lower"`` (``r_pair >= r_a + r_b - 1`` through
    a common neighbour) or ``"path_lower"`` (the chain bound along
    ``vertices``). ``magnitude`` is how far the measured value falls short,
    always positive.
    """

    inequality: str
    pair: Pair
    vertices: tuple[int, ...]
    bound: float
    observed: float
    magnitude: float


@dataclass(frozen=True)
class ClassicalityVerdict:
    violations: tuple[Violation, ...]

    @property
    def classical(self) -> bool:
        return not self.violations

    @property
    def name(self) -> str:
        return "ConsistentWithClassical" if self.classical else "NonClassical"

    @property
    def max_violation(self) -> float:
        return max((v.magnitude for v in self.violations), default=0.0)


def classicality_check(
    g: OverlapGraph,
    tol: float = VERDICT_TOL,
    pairs: Iterable[Pair] | None = None,
) -> ClassicalityVerdict:
    """Test measured overlaps against every classical inequality they instantiate.

    Every fully measured triangle gives three inequalities, one per choice of
    target pair; together these are the lower and both upper classical
    triangle bounds under all labellings. Each measured pair is also checked
    against its best chain bound when that chain has three or more edges
    (shorter chains are triangles, already covered). Interval-valued edges
    are judged conservatively: a violation needs the whole interval outside.

    ``pairs`` restricts the check to the given target pairs, each of which
    must be measured.
    """
    mg = g.measured()
    if pairs is None:
        targets = set(mg.edges)
    else:
        targets = {canonical_pair(*p) for p in pairs}
        missing = sorted(p for p in targets if p not in mg.edges)
        if missing:
            raise MissingEdgeError(f"no measurement for pair(s) {missing}")

    violations: list[Violation] = []
    for tri in itertools.combinations(range(g.n), 3):
        sides = [canonical_pair(a, b) for a, b in itertools.combinations(tri, 2)]
        if not all(s in mg.edges for s in sides):
            continue
        for target in sides:
            if target not in targets:
                continue
            centre = next(v for v in tri if v not in target)
            r1 = mg.edges[canonical_pair(centre, target[0])].value.lo
            r2 = mg.edges[canonical_pair(centre, target[1])].value.lo
            bound = r1 + r2 - 1.0
            observed = mg.edges[target].value.hi
            if observed < bound - tol:
                violations.append(
                    Violation("triangle_lower", target, (target[0], centre, target[1]), bound, observed, bound - observed)
                )

    for target in sorted(targets):
        found = classical_lower_path(mg, *target)
        if found is None:
            continue
        bound, path = found
        if len(path) < 4:
            continue
        observed = mg.edges[target].value.hi
        if observed < bound - tol:
            violations.append(Violation("path_lower", target, tuple(path), bound, observed, bound - observed))
    return ClassicalityVerdict(tuple(violations))


class DimensionVerdict(enum.Enum):
    CONSISTENT_WITH_QUBITS = "ConsistentWithQubits"
    REQUIRES_DIMENSION_AT_LEAST_3 = "RequiresDimensionAtLeast3"
    INFEASIBLE_FOR_PURE_STATES = "InfeasibleForPureStates"


def dimension_witness(r_ab: float, r_ac: float, r_bc: float, tol: float = VERDICT_TOL) -> DimensionVerdict:
    """Decide whether three overlaps can come from qubits.

    Data outside the pure-qudit range is reported as infeasible before any
    dimension claim is made.
    """
    if not triangle_interval(r_ab, r_ac, Model.PURE_QUDIT).contains(r_bc, tol):
        return DimensionVerdict.INFEASIBLE_FOR_PURE_STATES
    if r_bc < f_minus(r_ab, r_ac) - tol:
        return DimensionVerdict.REQUIRES_DIMENSION_AT_LEAST_3
    return DimensionVerdict.CONSISTENT_WITH_QUBITS


class BoundKind(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class ViolationExtremum:
    D: float
    beta: float
    gamma: float
    kind: BoundKind


def violation_gap(beta, gamma, kind: BoundKind):
    """How far the extreme pure-state ``r_BC`` lies beyond the classical bound.

    Angles follow ``r_AB = cos^2 beta`` and ``r_AC = cos^2 gamma``. The lower
    gap is only defined where ``cos^2 beta + cos^2 gamma > 1`` and is ``-inf``
    elsewhere.
    """
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    x = np.cos(beta) ** 2
    y = np.cos(gamma) ** 2
    if kind is BoundKind.LOWER:
        d = np.where(x + y > 1.0, x + y - 1.0 - np.cos(beta + gamma) ** 2, -np.inf)
    else:
        d = np.cos(beta - gamma) ** 2 - (1.0 - np.abs(x - y))
    return float(d) if d.ndim == 0 else d


def max_violation_search(
    kind: BoundKind,
    grid_steps: int = 512,
    refine_iters: int = 60,
    *,
    diagonal: bool = False,
) -> ViolationExtremum:
    """Maximize the classical-violation gap over ``beta, gamma in [0, pi/2]``.

    A ``grid_steps x grid_steps`` grid picks the start (ties go to the
    lexicographically smallest ``(beta, gamma)``), then coordinatewise bounded
    line searches polish it. With ``diagonal`` the search is restricted to
    ``beta == gamma``.
    """
    if grid_steps < 16:
        raise ValueError("grid_steps must be >= 16")
    half = math.pi / 2
    ang = np.linspace(0.0, half, grid_steps)
    h = ang[1] - ang[0]

    def line_max(fn, centre):
        a, b = max(0.0, centre - h), min(half, centre + h)
        res = minimize_scalar(lambda t: -fn(t), bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        return (res.x, -res.fun) if -res.fun >= fn(centre) else (centre, fn(centre))

    if diagonal:
        vals = violation_gap(ang, ang, kind)
        i = int(np.argmax(vals))
        t, d = line_max(lambda s: violation_gap(s, s, kind), ang[i])
        return ViolationExtremum(float(d), float(t), float(t), kind)

    vals = violation_gap(ang[:, None], ang[None, :], kind)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    b, c = float(ang[i]), float(ang[j])
    d = violation_gap(b, c, kind)
    for _ in range(refine_iters):
        b, _ = line_max(lambda s: violation_gap(s, c, kind), b)
        c, d_new = line_max(lambda s: violation_gap(b, s, kind), c)
        done = abs(d_new - d) < 1e-15
        d = d_new
        if done:
            break
    return ViolationExtremum(float(d), float(b), float(c), kind)


def maximal_violation_states(kind: BoundKind) -> np.ndarray:
    """Qubit triples ``(A, B, C)`` attaining the 1/4 violation.

    Lower: ``B`` and ``C`` sit a Bloch angle pi/3 on either side of ``A``,
    giving overlaps (3/4, 3/4, 1/4). Upper: ``A = |0>``,
    ``B = (|0> + sqrt3|1>)/2`` and ``C = (sqrt3|0> + |1>)/2``, giving
    (1/4, 3/4, 3/4).
    """
    s = math.sqrt(3.0)
    a = [1.0, 0.0]
    if kind is BoundKind.LOWER:
        b, c = [s / 2, 0.5], [s / 2, -0.5]
    else:
        b, c = [0.5, s / 2], [s / 2, 0.5]
    return np.array([a, b, c], dtype=complex)
