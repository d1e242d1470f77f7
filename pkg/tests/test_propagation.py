import itertools

import numpy as np
import pytest

from obound.core import Interval, Model, OverlapGraph, Provenance
from obound.oracle import connected_subgraph_lower_all, random_overlap_graph
from obound.propagation import (
    InfeasibleError,
    classical_lower_map,
    classical_lower_path,
    complete_and_tighten,
)

A, B, C, D, E = range(5)


@pytest.fixture
def five_cycle():
    return OverlapGraph.from_edges(
        5, [(A, B, 1.0), (B, C, 1.0), (C, D, 0.75), (D, E, 0.75), (E, A, 1.0)], labels="ABCDE"
    )


def close(iv: Interval, lo: float, hi: float, tol: float = 1e-9) -> bool:
    return abs(iv.lo - lo) <= tol and abs(iv.hi - hi) <= tol


def test_five_cycle_first_sweep(five_cycle):
    r = complete_and_tighten(five_cycle, Model.PURE_QUDIT, max_iters=1)
    assert close(r.interval(B, E), 1, 1) and close(r.interval(A, C), 1, 1)
    assert close(r.interval(A, D), 0.75, 0.75) and close(r.interval(B, D), 0.75, 0.75)
    assert close(r.interval(C, E), 0.25, 1)
    assert not r.converged


def test_five_cycle_fixpoint(five_cycle):
    r = complete_and_tighten(five_cycle, Model.PURE_QUDIT)
    assert r.converged
    assert close(r.interval(C, E), 1, 1)
    assert r.iterations == 3


def test_p3_maximal_violation_endpoint():
    g = OverlapGraph.from_edges(3, [(0, 1, 0.75), (0, 2, 0.75)])
    r = complete_and_tighten(g, Model.PURE_QUDIT)
    assert close(r.interval(1, 2), 0.25, 1.0, 1e-12)


def test_infeasible_witness():
    g = OverlapGraph.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 0.0)])
    with pytest.raises(InfeasibleError) as err:
        complete_and_tighten(g, Model.PURE_QUDIT)
    w = err.value.witness
    assert w.pair == (1, 2) and w.via == 0 and w.measured
    assert err.value.result.infeasible_witness == w


def test_infeasible_can_be_returned():
    g = OverlapGraph.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 0.0)])
    r = complete_and_tighten(g, Model.QUBIT, raise_on_infeasible=False)
    assert r.infeasible_witness is not None and not r.converged


def test_inferred_ranges_can_empty_out():
    # two qubits orthogonal to a common state coincide, yet 3 equals 1 and misses 2
    g = OverlapGraph.from_edges(4, [(0, 1, 0.0), (0, 2, 0.0), (3, 1, 1.0), (3, 2, 0.0)])
    with pytest.raises(InfeasibleError):
        complete_and_tighten(g, Model.QUBIT)
    complete_and_tighten(g, Model.PURE_QUDIT)


def test_measured_edges_untouched(five_cycle):
    r = complete_and_tighten(five_cycle, Model.PURE_QUDIT)
    for key, e in five_cycle.edges.items():
        assert r.complete.edges[key] == e
    assert r.complete.is_complete
    inferred = [e for e in r.complete.edges.values() if e.provenance is Provenance.INFERRED]
    assert len(inferred) == 5


def _random_graph(rng, n, d):
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    r = np.abs(z.conj() @ z.T) ** 2
    pairs = list(itertools.combinations(range(n), 2))
    keep = [p for p in pairs if rng.random() < 0.5]
    return OverlapGraph.from_edges(n, [(i, j, float(r[i, j])) for i, j in keep])


@pytest.mark.parametrize("model", [Model.PURE_QUDIT, Model.QUBIT, Model.CLASSICAL])
def test_monotone_contraction(model):
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = _random_graph(rng, 6, 2)
        prev = None
        for k in range(1, 6):
            r = complete_and_tighten(g, model, max_iters=k, raise_on_infeasible=False)
            if r.infeasible_witness is not None:
                break
            if prev is not None:
                for key in g.pairs():
                    assert r.interval(*key).issubset(prev.interval(*key), tol=1e-15)
            prev = r


def test_order_independence():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = 6
        g = _random_graph(rng, n, 3)
        perm = list(reversed(range(n)))
        h = OverlapGraph.from_edges(n, [(perm[i], perm[j], e.value) for (i, j), e in g.edges.items()])
        rg = complete_and_tighten(g, Model.PURE_QUDIT)
        rh = complete_and_tighten(h, Model.PURE_QUDIT)
        for i, j in g.pairs():
            a, b = rg.interval(i, j), rh.interval(perm[i], perm[j])
            assert abs(a.lo - b.lo) <= 1e-12 and abs(a.hi - b.hi) <= 1e-12


def test_idempotence():
    rng = np.random.default_rng(6)
    for _ in range(20):
        g = _random_graph(rng, 5, 3)
        r1 = complete_and_tighten(g, Model.PURE_QUDIT)
        r2 = complete_and_tighten(r1.complete, Model.PURE_QUDIT)
        assert r2.iterations == 1 and r2.converged
        for key in g.pairs():
            a, b = r1.interval(*key), r2.interval(*key)
            assert abs(a.lo - b.lo) <= 1e-12 and abs(a.hi - b.hi) <= 1e-12


def test_disconnected_pairs_stay_trivial():
    g = OverlapGraph.from_edges(5, [(0, 1, 0.9), (1, 2, 0.9), (3, 4, 0.2)])
    for model in Model:
        r = complete_and_tighten(g, model)
        assert r.warnings
        for i in (0, 1, 2):
            for j in (3, 4):
                assert r.interval(i, j) == Interval(0.0, 1.0)


def test_classical_model_applies_upper_bound():
    g = OverlapGraph.from_edges(3, [(0, 1, 0.9), (0, 2, 0.3)])
    r = complete_and_tighten(g, Model.CLASSICAL)
    assert close(r.interval(1, 2), 0.2, 0.4, 1e-12)


def test_validation_of_iteration_cap():
    g = OverlapGraph.from_edges(3, [(0, 1, 0.9)])
    with pytest.raises(ValueError):
        complete_and_tighten(g, Model.PURE_QUDIT, max_iters=0)


def test_classical_lower_map_examples():
    g = OverlapGraph.from_edges(3, [(0, 1, 0.75), (0, 2, 0.75)])
    assert classical_lower_map(g)[(1, 2)] == pytest.approx(0.5, abs=1e-12)

    path = OverlapGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    assert classical_lower_map(path)[(0, 3)] == 1.0


def test_classical_lower_map_ignores_own_edge_and_inferred():
    g = OverlapGraph.from_edges(3, [(0, 1, 0.9), (1, 2, 0.9), (0, 2, 0.3)])
    m = classical_lower_map(g)
    assert m[(0, 2)] == pytest.approx(0.8)
    g2 = OverlapGraph.from_edges(3, [(0, 1, 0.9), (1, 2, 0.9, "inferred")])
    assert classical_lower_map(g2)[(0, 2)] == 0.0


def test_classical_lower_path_reports_chain():
    g = OverlapGraph.from_edges(4, [(0, 1, 0.95), (1, 2, 0.95), (2, 3, 0.95), (0, 3, 0.5)])
    bound, path = classical_lower_path(g, 0, 3)
    assert path == [0, 1, 2, 3]
    assert bound == pytest.approx(0.85)
    assert classical_lower_path(OverlapGraph.from_edges(3, [(0, 1, 0.5)]), 0, 2) is None


def test_classical_map_dominates_triangles():
    rng = np.random.default_rng(8)
    for _ in range(30):
        g = random_overlap_graph(6, rng, 0.5)
        m = classical_lower_map(g)
        for a in range(6):
            for b, c in itertools.combinations([v for v in range(6) if v != a], 2):
                eab, eac = g.get(a, b), g.get(a, c)
                if eab is None or eac is None:
                    continue
                assert m[(b, c)] >= eab.value.lo + eac.value.lo - 1 - 1e-12


def test_classical_map_matches_subgraph_enumeration():
    rng = np.random.default_rng(9)
    for _ in range(40):
        n = int(rng.integers(3, 7))
        g = random_overlap_graph(n, rng, float(rng.uniform(0.3, 1.0)), high=bool(rng.random() < 0.8))
        fast = classical_lower_map(g)
        slow = connected_subgraph_lower_all(g)
        for p in g.pairs():
            assert fast[p] == pytest.approx(slow[p], abs=1e-12)
