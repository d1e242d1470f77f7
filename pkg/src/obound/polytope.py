"""The correlation polytope of ``m`` propositions and their conjunction.

Vertices are the truth assignments ``(a_1, ..., a_m, a_1 AND ... AND a_m)``.
The coherence inequalities checked here are

* ``lower``:    ``p(AND) >= 1 - m + sum_i p(a_i)``
* ``upper:i``:  ``p(AND) <= p(a_i)``
* ``nonneg``:   ``p(AND) >= 0``

each written as ``coeffs . p + const >= 0``.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

MAX_M = 20
STREAM_ABOVE = 12
CHUNK_ROWS = 1 << 14
RANK_TOL = 1e-9


class TooLargeError(ValueError):
    pass


def _check_m(m: int) -> None:
    if not 2 <= m <= MAX_M:
        raise TooLargeError(f"m={m} outside [2, {MAX_M}]")


def _rows(start: int, stop: int, m: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)[:, None]
    bits = (idx >> np.arange(m - 1, -1, -1)) & 1
    conj = bits.all(axis=1, keepdims=True)
    return np.hstack([bits, conj]).astype(np.int8)


def iter_vertex_chunks(m: int, chunk: int = CHUNK_ROWS) -> Iterator[np.ndarray]:
    """Vertices in lexicographic order, ``chunk`` rows at a time."""
    _check_m(m)
    total = 1 << m
    for start in range(0, total, chunk):
        yield _rows(start, min(total, start + chunk), m)


@dataclass(frozen=True)
class TruthAssignmentTable:
    m: int
    rows: np.ndarray  # (2**m, m + 1), last column is the conjunction

    def __post_init__(self):
        if self.rows.shape != (1 << self.m, self.m + 1):
            raise ValueError(f"bad table shape {self.rows.shape} for m={self.m}")
        if not np.array_equal(self.rows[:, -1], self.rows[:, :-1].all(axis=1)):
            raise ValueError("last column is not the conjunction of the others")


def and_polytope_vertices(m: int) -> TruthAssignmentTable:
    _check_m(m)
    return TruthAssignmentTable(m, _rows(0, 1 << m, m))


def inequality_names(m: int) -> list[str]:
    return ["lower", *(f"upper:{i}" for i in range(1, m + 1)), "nonneg"]


def inequality(m: int, name: str) -> tuple[np.ndarray, float]:
    """``(coeffs, const)`` with the inequality reading ``coeffs . p + const >= 0``."""
    coeffs = np.zeros(m + 1)
    if name == "lower":
        coeffs[:m] = -1.0
        coeffs[m] = 1.0
        return coeffs, float(m - 1)
    if name == "nonneg":
        coeffs[m] = 1.0
        return coeffs, 0.0
    if name.startswith("upper:"):
        i = int(name.split(":", 1)[1])
        if not 1 <= i <= m:
            raise ValueError(f"proposition index {i} outside 1..{m}")
        coeffs[i - 1] = 1.0
        coeffs[m] = -1.0
        return coeffs, 0.0
    raise ValueError(f"unknown inequality {name!r}")


@dataclass
class BooleReport:
    m: int
    vertices: int = 0
    violations: dict[str, int] = field(default_factory=dict)
    saturating: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())


def check_boole_inequalities(m: int) -> BooleReport:
    """Evaluate every inequality at every vertex.

    Validity at all vertices implies validity on the whole polytope, since it
    is their convex hull. Rows are streamed in chunks when ``m`` is large.
    """
    _check_m(m)
    names = inequality_names(m)
    coeffs = np.stack([inequality(m, n)[0] for n in names])
    consts = np.array([inequality(m, n)[1] for n in names])
    report = BooleReport(m, violations=dict.fromkeys(names, 0), saturating=dict.fromkeys(names, 0))
    chunk = (1 << m) if m <= STREAM_ABOVE else CHUNK_ROWS
    for rows in iter_vertex_chunks(m, chunk):
        slack = rows @ coeffs.T + consts
        report.vertices += len(rows)
        for k, name in enumerate(names):
            report.violations[name] += int(np.count_nonzero(slack[:, k] < 0))
            report.saturating[name] += int(np.count_nonzero(slack[:, k] == 0))
    return report


def saturating_vertices(m: int, name: str) -> np.ndarray:
    coeffs, const = inequality(m, name)
    out = [rows[rows @ coeffs + const == 0] for rows in iter_vertex_chunks(m)]
    return np.vstack(out)


def facet_dimension(m: int, name: str) -> int:
    """Affine rank of the vertices saturating ``name``; the face is a facet iff it equals ``m``."""
    sat = saturating_vertices(m, name).astype(float)
    if len(sat) == 0:
        return -1
    diffs = sat[1:] - sat[0]
    if len(diffs) == 0:
        return 0
    return int(np.linalg.matrix_rank(diffs, tol=RANK_TOL))


def satisfies_all(p: np.ndarray, m: int, tol: float = 1e-12) -> bool:
    """Whether a point ``(p_1, ..., p_m, p_and)`` obeys every listed inequality."""
    p = np.asarray(p, dtype=float)
    return all(float(c @ p + k) >= -tol for c, k in (inequality(m, n) for n in inequality_names(m)))


def barycentric_m2(p: np.ndarray) -> np.ndarray:
    """Weights of the four ``m = 2`` vertices reproducing ``p``."""
    v = and_polytope_vertices(2).rows.astype(float)
    a = np.vstack([v.T, np.ones(4)])
    return np.linalg.solve(a, np.append(np.asarray(p, dtype=float), 1.0))
