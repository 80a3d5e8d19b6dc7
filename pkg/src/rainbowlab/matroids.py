"""Finite ground sets, bitmask subsets and matroid rank oracles.

Subsets of a ground set ``{0, ..., n-1}`` are plain Python ints used as
bitmasks: bit ``v`` is set iff element ``v`` belongs to the subset.  Every
algorithm in the package enumerates subsets, so ground sets are capped at
``MAX_GROUND`` elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError

MAX_GROUND = 24
MAX_AXIOM_CHECK = 16


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for v in elements:
        if v < 0:
            raise InputError(f"negative element {v}")
        mask |= 1 << v
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets_of(mask: int):
    """Yield every submask of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class GroundSet:
    """The ground set ``{0, ..., size-1}``; labels are for display only."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise InputError(f"ground set size must be a positive integer, got {self.size!r}")
        if self.size > MAX_GROUND:
            raise InputError(f"ground set size {self.size} exceeds cap {MAX_GROUND}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
            if len(self.labels) != self.size:
                raise InputError("label count does not match ground set size")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def check(self, mask: int) -> int:
        if not isinstance(mask, int) or mask < 0 or mask >> self.size:
            raise InputError(f"subset mask {mask!r} is outside a ground set of size {self.size}")
        return mask

    def name(self, mask: int) -> str:
        names = self.labels or tuple(str(v) for v in range(self.size))
        return "{" + ",".join(names[v] for v in elements_of(mask)) + "}"


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: str | None = None
    witness: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


class Matroid:
    """A matroid given by its rank function on bitmask subsets.

    Subclasses implement ``_rank``; ``rank`` validates the mask and
    ``rank_table`` caches the full table, which the polytope code indexes
    directly.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet | int):
        self.ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)

    @property
    def n(self) -> int:
        return self.ground.size

    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    def rank(self, mask: int) -> int:
        return self._rank(self.ground.check(mask))

    @cached_property
    def rank_table(self) -> tuple[int, ...]:
        return tuple(self._rank(m) for m in range(1 << self.n))

    def is_independent(self, mask: int) -> bool:
        return self.rank(mask) == popcount(mask)

    def describe(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Matroid) and self.n == other.n and self.rank_table == other.rank_table

    def __hash__(self):
        return hash((self.n, self.rank_table))


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, ground, rank: int):
        super().__init__(ground)
        if rank < 0:
            raise InputError("uniform matroid rank must be nonnegative")
        self.r0 = rank

    def _rank(self, mask):
        return min(popcount(mask), self.r0)

    def describe(self):
        return {"kind": "uniform", "rank": self.r0}

    def __repr__(self):
        return f"UniformMatroid(n={self.n}, rank={self.r0})"


class PartitionMatroid(Matroid):
    """Independent sets take at most ``capacities[j]`` elements of part ``j``."""

    kind = "partition"

    def __init__(self, ground, parts: Sequence[Iterable[int]], capacities: Sequence[int] | None = None):
        super().__init__(ground)
        self.parts = tuple(p if isinstance(p, int) else mask_of(p) for p in parts)
        if capacities is None:
            capacities = [1] * len(self.parts)
        self.capacities = tuple(int(c) for c in capacities)
        if len(self.capacities) != len(self.parts):
            raise InputError("one capacity per part is required")
        if any(c < 0 for c in self.capacities):
            raise InputError("capacities must be nonnegative")
        seen = 0
        for p in self.parts:
            self.ground.check(p)
            if p & seen:
                raise InputError("partition parts must be disjoint")
            seen |= p
        if seen != self.ground.full:
            raise InputError("partition parts must cover the ground set")

    def _rank(self, mask):
        return sum(min(popcount(mask & p), c) for p, c in zip(self.parts, self.capacities))

    def describe(self):
        return {
            "kind": "partition",
            "parts": [elements_of(p) for p in self.parts],
            "capacities": list(self.capacities),
        }

    def __repr__(self):
        return f"PartitionMatroid(n={self.n}, parts={[elements_of(p) for p in self.parts]})"


class ExplicitMatroid(Matroid):
    """A matroid from a full rank table, validated on construction when small."""

    kind = "explicit"

    def __init__(self, ground, table: Sequence[int], validate: bool = True):
        super().__init__(ground)
        if len(table) != 1 << self.n:
            raise InputError(f"rank table needs {1 << self.n} entries, got {len(table)}")
        self.table = tuple(int(x) for x in table)
        if validate and self.n <= MAX_AXIOM_CHECK:
            report = check_rank_axioms(self)
            if not report:
                raise InputError(f"rank table violates {report.axiom} at {report.witness}")

    def _rank(self, mask):
        return self.table[mask]

    def describe(self):
        return {"kind": "explicit", "table": list(self.table)}

    def __repr__(self):
        return f"ExplicitMatroid(n={self.n})"


@dataclass(frozen=True)
class Hypergraph:
    """An r-partite hypergraph; ``edges[e][i]`` is the vertex of edge ``e`` in side ``i``."""

    edges: tuple[tuple, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if not self.edges:
            raise InputError("hypergraph needs at least one edge")
        r = len(self.edges[0])
        if r < 2:
            raise InputError("an r-partite hypergraph needs r >= 2")
        for e in self.edges:
            if len(e) != r:
                raise InputError(f"edge {e} does not have exactly one vertex per side (r={r})")

    @property
    def r(self) -> int:
        return len(self.edges[0])

    def vertices(self, mask: int) -> set:
        """Vertices, tagged by side, covered by the edges in ``mask``."""
        return {(i, x) for e in elements_of(mask) for i, x in enumerate(self.edges[e])}

    def is_matching(self, mask: int) -> bool:
        seen = set()
        for e in elements_of(mask):
            for i, x in enumerate(self.edges[e]):
                if (i, x) in seen:
                    return False
                seen.add((i, x))
        return True


def star_matroids(hypergraph: Hypergraph | Sequence[Sequence]) -> list[PartitionMatroid]:
    """One partition matroid per side, whose parts are the stars of that side.

    A set of edges is independent in matroid ``i`` iff no two of its edges
    share their side-``i`` vertex.
    """
    hg = hypergraph if isinstance(hypergraph, Hypergraph) else Hypergraph(hypergraph)
    ground = GroundSet(len(hg.edges), hg.labels)
    out = []
    for side in range(hg.r):
        stars: dict = {}
        for e, edge in enumerate(hg.edges):
            stars[edge[side]] = stars.get(edge[side], 0) | (1 << e)
        parts = list(stars.values())
        out.append(PartitionMatroid(ground, parts, [1] * len(parts)))
    return out


def check_rank_axioms(m: Matroid) -> AxiomReport:
    """Exhaustively test normalization, monotonicity, unit increase and submodularity.

    Monotonicity and unit increase are checked on covering pairs
    ``A, A+v``; submodularity on the local squares ``A+u, A+v``.  Both
    local forms are equivalent to the global axioms.
    """
    n = m.n
    if n > MAX_AXIOM_CHECK:
        raise InputError(f"axiom check is exhaustive and capped at n={MAX_AXIOM_CHECK}")
    rk = [m._rank(a) for a in range(1 << n)]
    if rk[0] != 0:
        return AxiomReport(False, "normalization", (0,))
    for a in range(1 << n):
        for v in range(n):
            bit = 1 << v
            if a & bit:
                continue
            step = rk[a | bit] - rk[a]
            if step < 0:
                return AxiomReport(False, "monotonicity", (a, a | bit))
            if step > 1:
                return AxiomReport(False, "unit-increase", (a, a | bit))
    for a in range(1 << n):
        for u in range(n):
            bu = 1 << u
            if a & bu:
                continue
            for v in range(u + 1, n):
                bv = 1 << v
                if a & bv:
                    continue
                if rk[a | bu] + rk[a | bv] < rk[a | bu | bv] + rk[a]:
                    return AxiomReport(False, "submodularity", (a | bu, a | bv))
    return AxiomReport(True)
