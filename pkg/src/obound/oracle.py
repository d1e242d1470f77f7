"""Brute-force and Monte Carlo checks for the closed-form bounds.

Nothing here calls the bound formulas to produce its answers: states are
sampled or parameterized explicitly, overlaps are computed from amplitudes or
density matrices, and extremes come from grids or exhaustive enumeration.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .bounds import interval_arrays
from .core import Interval, Model, OverlapGraph, Pair, Provenance
from .propagation import InfeasibleError, InfeasibleWitness, complete_and_tighten

NORM_TOL = 1e-12
CONTAINMENT_TOL = 1e-9
MAX_ENUM_VERTICES = 7


class DimensionMismatchError(ValueError):
    pass


class DisconnectedSampleError(RuntimeError):
    pass


class TooLargeError(ValueError):
    pass


def make_rng(seed, *stream: int) -> np.random.Generator:
    """Generator for ``(seed, *stream)``; trial ``i`` of a batch uses ``stream=(i,)``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng([int(seed), *stream] if stream else seed)


def haar_pure_states(n: int, d: int, seed) -> np.ndarray:
    """``n`` Haar-random pure states in C^d, as rows of an ``(n, d)`` array."""
    if n < 1 or d < 2:
        raise ValueError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    rng = make_rng(seed)
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def overlap_matrix(states: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Matrix of ``|<psi_i|psi_j>|^2``; unit diagonal, symmetric."""
    vecs = [np.asarray(s, dtype=complex).ravel() for s in states]
    dims = {v.size for v in vecs}
    if len(dims) > 1:
        raise DimensionMismatchError(f"states have mixed dimensions {sorted(dims)}")
    s = np.stack(vecs)
    norms = np.linalg.norm(s, axis=1)
    if np.any(np.abs(norms - 1.0) > NORM_TOL):
        raise ValueError(f"states not normalized: norms {norms}")
    gram = s.conj() @ s.T
    r = np.abs(gram) ** 2
    r = 0.5 * (r + r.T)
    np.fill_diagonal(r, 1.0)
    return r


@dataclass(frozen=True)
class ParameterizedTriple:
    """States ``A = |0>``, ``B = cos b|0> + sin b|1>`` and
    ``C = cos c|0> + e^{i phi} sin c sin a|1> + sin c cos a|2>``."""

    alpha: float
    beta: float
    gamma: float
    phi: float = 0.0

    def __post_init__(self):
        half = math.pi / 2
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not 0.0 <= v <= half + 1e-12:
                raise ValueError(f"{name}={v} outside [0, pi/2]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi={self.phi} outside [0, 2pi)")

    def states(self) -> np.ndarray:
        a, b, c, p = self.alpha, self.beta, self.gamma, self.phi
        return np.array(
            [
                [1.0, 0.0, 0.0],
                [math.cos(b), math.sin(b), 0.0],
                [math.cos(c), np.exp(1j * p) * math.sin(c) * math.sin(a), math.sin(c) * math.cos(a)],
            ],
            dtype=complex,
        )


def triangle_scan(r_ab: float, r_ac: float, steps: int = 256) -> tuple[float, float]:
    """Observed min and max of ``r_BC`` over a ``steps x steps`` grid in (alpha, phi)."""
    if steps < 64:
        raise ValueError("steps must be >= 64")
    beta = math.acos(math.sqrt(r_ab))
    gamma = math.acos(math.sqrt(r_ac))
    alpha = np.linspace(0.0, math.pi / 2, steps)[:, None]
    phi = (2 * math.pi / steps) * np.arange(steps)[None, :]
    # <B|C> for the parameterized triple
    amp = math.cos(beta) * math.cos(gamma) + math.sin(beta) * math.sin(gamma) * np.sin(alpha) * np.exp(1j * phi)
    r = np.abs(amp) ** 2
    return float(r.min()), float(r.max())


@dataclass(frozen=True)
class QubitDensityMatrix:
    """``[[rho0, rho1], [conj(rho1), 1 - rho0]]`` with ``|rho1|^2 <= rho0 (1 - rho0)``."""

    rho0: float
    rho1: complex

    def __post_init__(self):
        if not 0.0 <= self.rho0 <= 1.0:
            raise ValueError(f"rho0={self.rho0} outside [0, 1]")
        if abs(self.rho1) ** 2 > self.rho0 * (1.0 - self.rho0) + 1e-12:
            raise ValueError("not positive semidefinite: |rho1|^2 > rho0 (1 - rho0)")

    @classmethod
    def from_bloch(cls, v) -> QubitDensityMatrix:
        x, y, z = (float(t) for t in v)
        return cls(0.5 * (1.0 + z), 0.5 * complex(x, -y))

    def matrix(self) -> np.ndarray:
        return np.array([[self.rho0, self.rho1], [np.conj(self.rho1), 1.0 - self.rho0]], dtype=complex)


def bloch_to_density(v: np.ndarray) -> np.ndarray:
    """Density matrices ``(I + v . sigma) / 2`` for Bloch vectors of shape ``(..., 3)``."""
    v = np.asarray(v, dtype=float)
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    rho = np.empty(v.shape[:-1] + (2, 2), dtype=complex)
    rho[..., 0, 0] = 0.5 * (1 + z)
    rho[..., 1, 1] = 0.5 * (1 - z)
    rho[..., 0, 1] = 0.5 * (x - 1j * y)
    rho[..., 1, 0] = 0.5 * (x + 1j * y)
    return rho


def linear_fidelity(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """``tr(rho sigma)`` over leading batch axes."""
    return np.einsum("...ij,...ji->...", rho, sigma).real


@dataclass(frozen=True)
class MixedQubitTriples:
    rho: np.ndarray  # (n, 3, 2, 2) for A, B, C
    r_ab: np.ndarray
    r_ac: np.ndarray
    r_bc: np.ndarray

    def __len__(self) -> int:
        return len(self.r_ab)


def uniform_ball(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    g = rng.standard_normal(shape + (3,))
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    return g * rng.random(shape + (1,)) ** (1.0 / 3.0)


def random_mixed_qubit_triples(n: int, seed) -> MixedQubitTriples:
    """``n`` triples of qubit states with Bloch vectors uniform in the unit ball."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    rho = bloch_to_density(uniform_ball(rng, (n, 3)))
    a, b, c = rho[:, 0], rho[:, 1], rho[:, 2]
    return MixedQubitTriples(rho, linear_fidelity(a, b), linear_fidelity(a, c), linear_fidelity(b, c))


@dataclass
class SoundnessReport:
    n: int
    d: int
    model: Model
    seed: int
    measured: list[Pair]
    failures: list[tuple[Pair, float, Interval]] = field(default_factory=list)
    infeasible: InfeasibleWitness | None = None
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.infeasible is None


def _connected(n: int, edges: Sequence[Pair]) -> bool:
    seen = {0}
    stack = [0]
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def random_connected_edges(n: int, edge_fraction: float, rng: np.random.Generator, retries: int = 1000) -> list[Pair]:
    """Uniform edge subset of size ``max(n - 1, round(fraction * C(n, 2)))``, resampled until connected."""
    all_pairs = list(itertools.combinations(range(n), 2))
    k = max(n - 1, min(len(all_pairs), round(edge_fraction * len(all_pairs))))
    for _ in range(retries):
        idx = rng.choice(len(all_pairs), size=k, replace=False)
        edges = sorted(all_pairs[i] for i in idx)
        if _connected(n, edges):
            return edges
    raise DisconnectedSampleError(f"no connected subset of {k} edges on {n} vertices after {retries} draws")


def soundness_trial(
    n: int,
    d: int,
    edge_fraction: float,
    model: Model,
    seed: int,
    *,
    states: np.ndarray | None = None,
    edges: Sequence[Pair] | None = None,
    tol: float = CONTAINMENT_TOL,
) -> SoundnessReport:
    """Sample states, reveal a connected subset of their overlaps, infer the
    rest and check each hidden true overlap lies in its inferred interval."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0.0 < edge_fraction <= 1.0:
        raise ValueError("edge_fraction must lie in (0, 1]")
    if model is Model.CLASSICAL:
        raise ValueError("soundness trials sample quantum states; classical model not supported")
    if model is Model.QUBIT and d != 2:
        raise ValueError("qubit model requires d = 2")

    rng = make_rng(seed)
    if states is None:
        states = haar_pure_states(n, d, rng)
    r = overlap_matrix(states)
    if edges is None:
        edges = random_connected_edges(n, edge_fraction, rng)
    edges = sorted(tuple(sorted(e)) for e in edges)
    g = OverlapGraph.from_edges(n, [(i, j, float(r[i, j])) for i, j in edges])

    report = SoundnessReport(n, d, model, seed if isinstance(seed, int) else -1, list(edges))
    try:
        result = complete_and_tighten(g, model)
    except InfeasibleError as exc:
        report.infeasible = exc.witness
        return report
    measured = set(edges)
    for key in g.pairs():
        if key in measured:
            continue
        iv = result.interval(*key)
        report.checked += 1
        if not iv.contains(r[key], tol):
            report.failures.append((key, float(r[key]), iv))
    return report


def connected_subgraph_lower_all(g: OverlapGraph) -> dict[Pair, float]:
    """Exhaustive best classical chain bound for every pair.

    Maximizes ``1 - m' + sum r`` over every connected set of ``m'`` measured
    edges that touches both ends of the pair and does not contain the pair's
    own edge. Interval weights use their lower end. Exponential in the edge
    count.
    """
    if g.n > MAX_ENUM_VERTICES:
        raise TooLargeError(f"{g.n} vertices; enumeration capped at {MAX_ENUM_VERTICES}")
    edges = [(k, e.value.lo) for k, e in g.edges.items() if e.measured]
    m = len(edges)
    ends = [(1 << i) | (1 << j) for (i, j), _ in edges]
    best: dict[Pair, float] = {p: 0.0 for p in g.pairs()}
    for subset in range(1, 1 << m):
        chosen = [t for t in range(m) if subset >> t & 1]
        # grow a vertex set from the first edge until no chosen edge attaches
        reach = ends[chosen[0]]
        pending = chosen[1:]
        grew = True
        while pending and grew:
            grew = False
            rest = []
            for t in pending:
                if ends[t] & reach:
                    reach |= ends[t]
                    grew = True
                else:
                    rest.append(t)
            pending = rest
        if pending:
            continue
        value = 1.0 - len(chosen) + sum(edges[t][1] for t in chosen)
        if value <= 0.0:
            continue
        own = {edges[t][0] for t in chosen}
        verts = [v for v in range(g.n) if reach >> v & 1]
        for a, b in itertools.combinations(verts, 2):
            if (a, b) not in own and value > best[(a, b)]:
                best[(a, b)] = value
    return best


def connected_subgraph_lower(g: OverlapGraph, k: int, l: int) -> float:
    return connected_subgraph_lower_all(g)[(min(k, l), max(k, l))]


def rect_grid_extremes(ix: Interval, iy: Interval, model: Model, steps: int = 200) -> Interval:
    """Hull of the triangle interval over a ``steps x steps`` grid of ``ix x iy``."""
    if steps < 100:
        raise ValueError("steps must be >= 100")
    x = np.linspace(ix.lo, ix.hi, steps)[:, None]
    y = np.linspace(iy.lo, iy.hi, steps)[None, :]
    lo, hi = interval_arrays(np.broadcast_to(x, (steps, steps)), np.broadcast_to(y, (steps, steps)), model)
    return Interval(float(np.min(lo)), float(np.max(hi)))


def random_overlap_graph(n: int, rng: np.random.Generator, edge_prob: float = 0.5, high: bool = True) -> OverlapGraph:
    """Connected random graph with measured weights; ``high`` draws weights from
    [0.5, 1] so that chain bounds are non-trivial."""
    while True:
        edges = [p for p in itertools.combinations(range(n), 2) if rng.random() < edge_prob]
        if _connected(n, edges):
            break
    lo = 0.5 if high else 0.0
    return OverlapGraph.from_edges(n, [(i, j, float(rng.uniform(lo, 1.0)), Provenance.MEASURED) for i, j in edges])
