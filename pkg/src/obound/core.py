"""Value types: overlap intervals, overlap graphs and bound models."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Union

EMPTY_TOL = 1e-9
CLAMP_TOL = 1e-12

Pair = tuple[int, int]


class Model(enum.Enum):
    """Which family of states the bounds are derived for."""

    PURE_QUDIT = "qudit"
    QUBIT = "qubit"
    CLASSICAL = "classical"


class Provenance(enum.Enum):
    MEASURED = "measured"
    INFERRED = "inferred"


def _clamp_unit(v: float, what: str) -> float:
    v = float(v)
    if v != v:
        raise ValueError(f"{what} is NaN")
    if v < 0.0:
        if v < -CLAMP_TOL:
            raise ValueError(f"{what}={v!r} lies outside [0, 1]")
        return 0.0
    if v > 1.0:
        if v > 1.0 + CLAMP_TOL:
            raise ValueError(f"{what}={v!r} lies outside [0, 1]")
        return 1.0
    return v


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed subinterval ``[lo, hi]`` of ``[0, 1]``.

    Endpoints within 1e-12 of the unit boundary are clamped; anything further
    out raises ``ValueError``. ``lo > hi`` is never representable.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = _clamp_unit(self.lo, "lo")
        hi = _clamp_unit(self.hi, "hi")
        if lo > hi:
            raise ValueError(f"empty interval [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, v: float) -> Interval:
        return cls(v, v)

    @classmethod
    def full(cls) -> Interval:
        return cls(0.0, 1.0)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def is_full(self) -> bool:
        return self.lo == 0.0 and self.hi == 1.0

    def contains(self, v: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= v <= self.hi + tol

    def issubset(self, other: Interval, tol: float = 0.0) -> bool:
        return other.lo - tol <= self.lo and self.hi <= other.hi + tol

    def __iter__(self) -> Iterator[float]:
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def intersect(a: Interval, b: Interval, tol: float = EMPTY_TOL) -> Interval | None:
    """Largest interval inside both, or ``None`` when they are disjoint.

    Intervals that miss each other by no more than ``tol`` are treated as
    touching and collapse to the midpoint of the gap.
    """
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo <= hi:
        return Interval(lo, hi)
    if lo > hi + tol:
        return None
    mid = 0.5 * (lo + hi)
    return Interval(mid, mid)


def hull(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


OverlapValue = Union[float, Interval]


def as_interval(value: OverlapValue | tuple[float, float] | list[float]) -> Interval:
    """Coerce an exact value or an ``(lo, hi)`` pair to an :class:`Interval`."""
    if isinstance(value, Interval):
        return value
    if isinstance(value, (tuple, list)):
        if len(value) != 2:
            raise ValueError(f"range must have two endpoints, got {value!r}")
        return Interval(value[0], value[1])
    return Interval.point(value)


def canonical_pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, slots=True)
class Edge:
    value: Interval
    provenance: Provenance = Provenance.MEASURED

    @property
    def measured(self) -> bool:
        return self.provenance is Provenance.MEASURED


class IssueKind(enum.Enum):
    OUT_OF_RANGE_WEIGHT = "OutOfRangeWeight"
    SELF_LOOP = "SelfLoop"
    DUPLICATE_EDGE = "DuplicateEdge"
    BAD_VERTEX_INDEX = "BadVertexIndex"
    BAD_VERTEX_COUNT = "BadVertexCount"


@dataclass(frozen=True)
class GraphIssue:
    kind: IssueKind
    index: int | None  # position of the offending record, None for graph-level issues
    detail: str

    def __str__(self) -> str:
        where = "graph" if self.index is None else f"edge #{self.index}"
        return f"{self.kind.value} ({where}): {self.detail}"


class GraphValidationError(ValueError):
    def __init__(self, issues: list[GraphIssue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


# (i, j, value) or (i, j, value, provenance)
EdgeRecord = tuple


def _unpack(record: EdgeRecord) -> tuple[int, int, object, Provenance]:
    if len(record) == 3:
        i, j, value = record
        prov = Provenance.MEASURED
    elif len(record) == 4:
        i, j, value, prov = record
        prov = Provenance(prov)
    else:
        raise ValueError(f"edge record must have 3 or 4 fields, got {record!r}")
    return i, j, value, prov


def validate_graph(n: int, records: Iterable[EdgeRecord]) -> list[GraphIssue]:
    """Return every invariant violation in a raw edge list (empty when valid)."""
    issues: list[GraphIssue] = []
    if not isinstance(n, int) or n < 2:
        issues.append(GraphIssue(IssueKind.BAD_VERTEX_COUNT, None, f"n={n!r}, need an integer >= 2"))
        n = 0
    seen: dict[Pair, int] = {}
    for idx, record in enumerate(records):
        i, j, value, _ = _unpack(record)
        bad_index = False
        for v in (i, j):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                issues.append(GraphIssue(IssueKind.BAD_VERTEX_INDEX, idx, f"vertex {v!r} not in [0, {n})"))
                bad_index = True
        if not bad_index and i == j:
            issues.append(GraphIssue(IssueKind.SELF_LOOP, idx, f"edge {{{i}, {j}}}"))
        try:
            as_interval(value)
        except (ValueError, TypeError) as exc:
            issues.append(GraphIssue(IssueKind.OUT_OF_RANGE_WEIGHT, idx, f"weight {value!r}: {exc}"))
        if bad_index or i == j:
            continue
        key = canonical_pair(i, j)
        if key in seen:
            issues.append(
                GraphIssue(IssueKind.DUPLICATE_EDGE, idx, f"pair {key} already given by edge #{seen[key]}")
            )
        else:
            seen[key] = idx
    return issues


@dataclass(frozen=True)
class OverlapGraph:
    """Vertices ``0..n-1`` with a weight (exact or interval) on some pairs.

    Build through :meth:`from_edges`, which validates and canonicalizes
    pair keys to ``(min, max)``.
    """

    n: int
    edges: Mapping[Pair, Edge] = field(default_factory=dict)
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", MappingProxyType(dict(sorted(self.edges.items()))))
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError(f"{len(self.labels)} labels for {self.n} vertices")
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_edges(
        cls,
        n: int,
        records: Iterable[EdgeRecord] | Mapping[Pair, OverlapValue],
        labels: Iterable[str] | None = None,
    ) -> OverlapGraph:
        if isinstance(records, Mapping):
            records = [(i, j, v) for (i, j), v in records.items()]
        records = list(records)
        issues = validate_graph(n, records)
        if issues:
            raise GraphValidationError(issues)
        edges = {}
        for record in records:
            i, j, value, prov = _unpack(record)
            edges[canonical_pair(i, j)] = Edge(as_interval(value), prov)
        return cls(n, edges, tuple(labels) if labels is not None else None)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def get(self, i: int, j: int) -> Edge | None:
        return self.edges.get(canonical_pair(i, j))

    def value(self, i: int, j: int) -> Interval | None:
        e = self.get(i, j)
        return None if e is None else e.value

    def pairs(self) -> Iterator[Pair]:
        """All unordered vertex pairs in canonical lexicographic order."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield (i, j)

    def neighbors(self, v: int) -> list[int]:
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return sorted(out)

    def measured(self) -> OverlapGraph:
        """Subgraph of measured edges only."""
        return OverlapGraph(self.n, {k: e for k, e in self.edges.items() if e.measured}, self.labels)

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2
