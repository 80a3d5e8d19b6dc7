"""Rainbow sets for families of functions in a matroid intersection.

Given ``d >= r*ceil(k) - r + 1`` points ``f_j`` of the intersection of the
matroid polytopes with ``|f_j| >= k``, some rainbow set ``R`` of the
supports carries a point of the intersection with total at least ``k``.
``find_rainbow`` finds one by exhaustive search; ``kz_rainbow`` rounds it to
an integral common independent set in the two-matroid case.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .errors import InputError, InvariantError
from .lp import rational
from .matroids import (
    GroundSet,
    Hypergraph,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    elements_of,
    mask_of,
    popcount,
)
from .polytopes import (
    IntersectionSystem,
    as_vector,
    in_system,
    is_common_independent,
    nu_star,
    round_two_matroids,
    total,
)

CATALOG = ("cube-2x2x2", "drisko-k2", "drisko-k3", "kz-k2", "kz-k3", "k22-stars")
MAX_RANDOM_N = 12


def required_count(r: int, k: Fraction) -> int:
    """``r * ceil(k) - r + 1``, the number of functions the theorem asks for."""
    return r * math.ceil(k) - r + 1


class RainbowInstance:
    """``r`` matroids (with ``c = 1`` unless ``sys.b`` says otherwise), a threshold and ``d`` functions."""

    def __init__(self, sys: IntersectionSystem, k, functions: Sequence[Sequence], hypergraph: Hypergraph | None = None,
                 name: str | None = None):
        self.sys = sys
        self.k = rational(k)
        if self.k <= 0:
            raise InputError("k must be positive")
        self.functions = tuple(as_vector(f, sys.n, f"f_{j + 1}") for j, f in enumerate(functions))
        self.hypergraph = hypergraph
        self.name = name

    @property
    def n(self) -> int:
        return self.sys.n

    @property
    def d(self) -> int:
        return len(self.functions)

    @property
    def supports(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v, x in enumerate(f) if x) for f in self.functions)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"RainbowInstance({label}n={self.n}, r={self.sys.r}, k={self.k}, d={self.d})"


@dataclass(frozen=True)
class Validation:
    ok: bool
    problems: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def validate_instance(inst: RainbowInstance) -> Validation:
    """Check the hypotheses: enough functions, each in every polytope, each of total at least ``k``."""
    problems = []
    need = required_count(inst.sys.r, inst.k)
    if inst.d < need:
        problems.append(f"insufficient functions: d={inst.d}, need r*ceil(k)-r+1={need}")
    for j, f in enumerate(inst.functions):
        m = in_system(f, inst.sys)
        if m.negative is not None:
            problems.append(f"f_{j + 1} is negative at element {m.negative}")
        elif not m:
            problems.append(f"f_{j + 1} violates the polytope at A={elements_of(m.violated)} by {m.defect}")
        if total(f) < inst.k:
            problems.append(f"|f_{j + 1}| = {total(f)} < k = {inst.k}")
    return Validation(not problems, tuple(problems))


@dataclass(frozen=True)
class RainbowResult:
    choice: tuple[tuple[int, int], ...]
    R: int
    f: tuple[Fraction, ...]

    @property
    def value(self) -> Fraction:
        return total(self.f)

    @property
    def elements(self) -> list[int]:
        return elements_of(self.R)


def _dump(inst: RainbowInstance) -> str:
    lines = [repr(inst)]
    lines += [f"  {m!r}" for m in inst.sys.matroids]
    lines += [f"  f_{j + 1} = [{', '.join(str(x) for x in f)}]" for j, f in enumerate(inst.functions)]
    return "\n".join(lines)


def find_rainbow(inst: RainbowInstance, validate: bool = True) -> RainbowResult:
    """Depth-first search over partial choice functions.

    Functions are taken in input order, elements of each support in mask
    order, and skipping a function is tried last.  A branch is cut when
    ``nu*`` of the chosen set together with every later support is below
    ``k``.  The first ``R`` with ``nu*(R) >= k`` is returned with its
    optimal ``f`` as witness.
    """
    if validate:
        report = validate_instance(inst)
        if not report:
            raise InputError("invalid rainbow instance: " + "; ".join(report.problems))
    sys, k = inst.sys, inst.k
    supports = inst.supports
    d = len(supports)
    reach = [0] * (d + 1)
    for j in range(d - 1, -1, -1):
        reach[j] = reach[j + 1] | supports[j]

    def nu(mask: int) -> Fraction:
        return nu_star(sys, mask).value

    dead: set = set()
    picks: list = []

    def dfs(j: int, chosen: int) -> bool:
        if nu(chosen) >= k:
            return True
        if j == d or (j, chosen) in dead or nu(chosen | reach[j]) < k:
            return False
        for x in elements_of(supports[j] & ~chosen):
            picks.append((j, x))
            if dfs(j + 1, chosen | 1 << x):
                return True
            picks.pop()
        if dfs(j + 1, chosen):
            return True
        dead.add((j, chosen))
        return False

    if not dfs(0, 0):
        raise InvariantError("exhaustive rainbow search failed on a valid instance\n" + _dump(inst))
    R = mask_of(x for _, x in picks)
    witness = nu_star(sys, R)
    if not in_system(witness.f, sys) or total(witness.f) < k:
        raise InvariantError("rainbow witness failed its own membership check")
    return RainbowResult(tuple(picks), R, witness.f)


def find_integral_rainbow(hypergraph: Hypergraph | Sequence[Sequence], matchings: Sequence, k: int) -> RainbowResult | None:
    """Exhaustive search for a rainbow matching of ``k`` edges, or None.

    ``matchings`` are edge sets (masks or element lists).  None is a
    definitive answer: every partial choice function is enumerated.
    """
    hg = hypergraph if isinstance(hypergraph, Hypergraph) else Hypergraph(hypergraph)
    ground = GroundSet(len(hg.edges))
    sets = [m if isinstance(m, int) else mask_of(m) for m in matchings]
    for s in sets:
        ground.check(s)
    k = int(k)
    d = len(sets)
    picks: list = []

    def dfs(j: int, chosen: int) -> bool:
        if len(picks) == k:
            return True
        if d - j < k - len(picks):
            return False
        for e in elements_of(sets[j] & ~chosen):
            if hg.is_matching(chosen | 1 << e):
                picks.append((j, e))
                if dfs(j + 1, chosen | 1 << e):
                    return True
                picks.pop()
        return dfs(j + 1, chosen)

    if not dfs(0, 0):
        return None
    R = mask_of(e for _, e in picks)
    return RainbowResult(tuple(picks), R, tuple(Fraction(R >> v & 1) for v in range(len(hg.edges))))


def kz_rainbow(sets: Sequence, m1: Matroid, m2: Matroid) -> RainbowResult:
    """A rainbow common independent set of size ``k`` from ``2k-1`` common independent ``k``-sets.

    Runs ``find_rainbow`` on the characteristic vectors, rounds the witness
    to a 0/1 vertex of the two-matroid polytope inside ``R``, and keeps
    ``k`` of its elements.
    """
    masks = [s if isinstance(s, int) else mask_of(s) for s in sets]
    if not masks:
        raise InputError("kz_rainbow needs at least one set")
    k = popcount(masks[0])
    if k == 0 or any(popcount(s) != k for s in masks):
        raise InputError("all sets must have the same positive size k")
    for s in masks:
        if not is_common_independent(s, (m1, m2)):
            raise InputError(f"set {elements_of(s)} is not independent in both matroids")
    if len(masks) < 2 * k - 1:
        raise InputError(f"need 2k-1 = {2 * k - 1} sets, got {len(masks)}")
    sys = IntersectionSystem([m1, m2])
    chars = [[Fraction(s >> v & 1) for v in range(sys.n)] for s in masks]
    result = find_rainbow(RainbowInstance(sys, k, chars))
    g = round_two_matroids(result.f, m1, m2)
    keep = [v for v, x in enumerate(g) if x][:k]
    if len(keep) < k:
        raise InvariantError("rounded vertex has fewer than k elements")
    chosen = mask_of(keep)
    if chosen & ~result.R or not is_common_independent(chosen, (m1, m2)):
        raise InvariantError("rounded set is not a common independent subset of R")
    choice = tuple((j, x) for j, x in result.choice if chosen >> x & 1)
    return RainbowResult(choice, chosen, tuple(Fraction(chosen >> v & 1) for v in range(sys.n)))


def load_catalog_instance(name: str):
    """Parsed catalog entry (an ``instances.Instance``)."""
    from .instances import parse_instance
    import json

    if name not in CATALOG:
        raise InputError(f"unknown catalog instance {name!r}; known: {', '.join(CATALOG)}")
    text = resources.files("rainbowlab.data").joinpath(f"{name}.json").read_text()
    return parse_instance(json.loads(text))


def canonical_instances() -> dict:
    """Every catalog entry by name."""
    return {name: load_catalog_instance(name) for name in CATALOG}


def _random_matroid(rng: random.Random, ground: GroundSet) -> Matroid:
    n = ground.size
    if rng.random() < 0.4:
        return UniformMatroid(ground, rng.randint(1, n))
    nparts = rng.randint(1, n)
    labels = [rng.randrange(nparts) for _ in range(n)]
    parts = [mask_of(v for v in range(n) if labels[v] == p) for p in range(nparts)]
    parts = [p for p in parts if p]
    caps = [rng.randint(1, popcount(p)) for p in parts]
    return PartitionMatroid(ground, parts, caps)


def random_instance(seed: int, r: int, k, n: int) -> RainbowInstance:
    """A seeded random valid instance with exactly ``r*ceil(k)-r+1`` functions.

    Matroids are uniform or partition with no loops.  Each function is a
    convex combination of one to three vertices of the intersection, each
    vertex an optimum for a random positive objective over a random
    support and kept only if its total is at least ``k``.
    """
    k = rational(k)
    if not 1 <= n <= MAX_RANDOM_N:
        raise InputError(f"random instances need 1 <= n <= {MAX_RANDOM_N}")
    if r < 1 or k <= 0:
        raise InputError("need r >= 1 and k > 0")
    rng = random.Random(seed)
    ground = GroundSet(n)
    sys = IntersectionSystem([_random_matroid(rng, ground) for _ in range(r)])
    best = nu_star(sys, ground.full)
    if best.value < k:
        raise InputError(f"seed {seed}: the intersection polytope has max |f| = {best.value} < k = {k}")
    functions = []
    for _ in range(required_count(r, k)):
        verts = []
        for _ in range(rng.randint(1, 3)):
            v = None
            for _ in range(50):
                W = sum(1 << e for e in range(n) if rng.random() < 0.75)
                a = tuple(Fraction(rng.randint(1, 5)) for _ in range(n))
                cand = nu_star(sys, W, a).f if W else None
                if cand is not None and total(cand) >= k:
                    v = cand
                    break
            verts.append(v if v is not None else best.f)
        weights = [Fraction(rng.randint(1, 4)) for _ in verts]
        s = sum(weights)
        functions.append(tuple(sum((w / s * vert[e] for w, vert in zip(weights, verts)), Fraction(0))
                               for e in range(n)))
    inst = RainbowInstance(sys, k, functions, name=f"random-{seed}-r{r}-k{k}-n{n}")
    report = validate_instance(inst)
    if not report:
        raise InvariantError("random instance failed validation: " + "; ".join(report.problems))
    return inst
