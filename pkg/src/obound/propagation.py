"""Graph completion by repeated triangle bounds, and path-based classical bounds."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import networkx as nx

from .bounds import triangle_interval_lifted
from .core import (
    EMPTY_TOL,
    Edge,
    Interval,
    Model,
    OverlapGraph,
    Pair,
    Provenance,
    canonical_pair,
    intersect,
)

log = logging.getLogger(__name__)

DEFAULT_CHANGE_TOL = 1e-12


@dataclass(frozen=True)
class InfeasibleWitness:
    """Triangle ``(pair[0], pair[1]; via)`` whose implied range misses the current one."""

    pair: Pair
    via: int
    current: Interval
    implied: Interval
    measured: bool

    def describe(self, g: OverlapGraph | None = None) -> str:
        name = g.label if g is not None else str
        b, c = self.pair
        kind = "measured" if self.measured else "inferred"
        return (
            f"({name(b)}, {name(c)}; {name(self.via)}): {kind} {self.current} "
            f"disjoint from implied {self.implied}"
        )


@dataclass(frozen=True)
class InferenceResult:
    complete: OverlapGraph
    iterations: int
    converged: bool
    infeasible_witness: InfeasibleWitness | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def interval(self, i: int, j: int) -> Interval:
        return self.complete.edges[canonical_pair(i, j)].value


class InfeasibleError(Exception):
    """Measured data admit no joint realization under the chosen model."""

    def __init__(self, result: InferenceResult):
        self.result = result
        self.witness = result.infeasible_witness
        super().__init__(self.witness.describe(result.complete))


def _sweep(
    n: int,
    current: dict[Pair, Interval],
    measured: set[Pair],
    model: Model,
    tol: float,
) -> tuple[dict[Pair, Interval], InfeasibleWitness | None]:
    """One Jacobi sweep: every implied range is computed from ``current``."""
    new = dict(current)
    for a in range(n):
        for b in range(n):
            if b == a:
                continue
            iab = current[canonical_pair(a, b)]
            if iab.is_full:
                continue
            for c in range(b + 1, n):
                if c == a:
                    continue
                iac = current[canonical_pair(a, c)]
                if iac.is_full:
                    continue
                key = (b, c)
                implied = triangle_interval_lifted(iab, iac, model)
                got = intersect(new[key], implied, tol)
                if got is None:
                    return new, InfeasibleWitness(key, a, new[key], implied, key in measured)
                if key not in measured:
                    new[key] = got
    return new, None


def _assemble(g: OverlapGraph, current: dict[Pair, Interval], measured: set[Pair]) -> OverlapGraph:
    edges = {}
    for key, iv in current.items():
        if key in measured:
            edges[key] = g.edges[key]
        else:
            edges[key] = Edge(iv, Provenance.INFERRED)
    return OverlapGraph(g.n, edges, g.labels)


def complete_and_tighten(
    g: OverlapGraph,
    model: Model,
    max_iters: int | None = None,
    change_tol: float = DEFAULT_CHANGE_TOL,
    *,
    empty_tol: float = EMPTY_TOL,
    raise_on_infeasible: bool = True,
) -> InferenceResult:
    """Infer an interval for every vertex pair and tighten to a fixpoint.

    Pairs without an edge start at ``[0, 1]``. Each sweep intersects every
    pair with the lifted triangle range implied through each third vertex,
    reading only the previous sweep's values. Measured edges are never
    changed; they are checked against what the other edges imply. Inferred
    edges supplied in ``g`` are kept as starting ranges and may shrink.

    Raises :class:`InfeasibleError` on the first empty intersection unless
    ``raise_on_infeasible`` is false, in which case the returned result
    carries the witness.
    """
    n = g.n
    if max_iters is None:
        max_iters = 100 * n * n
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")

    measured = {k for k, e in g.edges.items() if e.measured}
    current = {}
    for key in g.pairs():
        e = g.edges.get(key)
        current[key] = e.value if e is not None else Interval.full()

    warnings: list[str] = []
    comps = g.components()
    if len(comps) > 1:
        msg = f"graph has {len(comps)} connected components; cross-component pairs stay [0, 1]"
        log.warning(msg)
        warnings.append(msg)

    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        new, witness = _sweep(n, current, measured, model, empty_tol)
        if witness is not None:
            result = InferenceResult(_assemble(g, new, measured), iterations, False, witness, tuple(warnings))
            if raise_on_infeasible:
                raise InfeasibleError(result)
            return result
        change = max(
            (max(abs(new[k].lo - current[k].lo), abs(new[k].hi - current[k].hi)) for k in current),
            default=0.0,
        )
        current = new
        if change <= change_tol:
            converged = True
            break
    return InferenceResult(_assemble(g, current, measured), iterations, converged, None, tuple(warnings))


def _distance_graph(g: OverlapGraph, skip: Pair | None = None) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for key, e in g.edges.items():
        if not e.measured or key == skip:
            continue
        h.add_edge(*key, weight=1.0 - e.value.lo)
    return h


def classical_lower_map(g: OverlapGraph) -> dict[Pair, float]:
    """Best classical lower bound for each pair from chains of measured edges.

    For a pair ``{k, l}`` the bound is ``1 - d(k, l)`` clamped at 0, with
    ``d`` the shortest-path length under weights ``1 - r`` over measured
    edges other than ``{k, l}`` itself (so the bound can be compared with a
    measurement of that pair). Interval weights contribute their lower end.
    Pairs with no connecting chain get 0.
    """
    h = _distance_graph(g)
    out: dict[Pair, float] = {}
    for k, l in g.pairs():
        direct = h.edges[k, l] if h.has_edge(k, l) else None
        if direct is not None:
            h.remove_edge(k, l)
        try:
            d = nx.dijkstra_path_length(h, k, l)
        except nx.NetworkXNoPath:
            d = float("inf")
        finally:
            if direct is not None:
                h.add_edge(k, l, **direct)
        out[(k, l)] = max(0.0, 1.0 - d)
    return out


def classical_lower_path(g: OverlapGraph, k: int, l: int) -> tuple[float, list[int]] | None:
    """Bound and vertex chain for one pair, or ``None`` when no chain exists."""
    key = canonical_pair(k, l)
    h = _distance_graph(g, skip=key)
    try:
        d, path = nx.single_source_dijkstra(h, k, l)
    except nx.NetworkXNoPath:
        return None
    return max(0.0, 1.0 - d), path
