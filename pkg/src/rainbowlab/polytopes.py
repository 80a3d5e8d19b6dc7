"""Skew matroid polytopes and the weighted fractional matching programs.

For a decreasing ``c`` the skew polytope of a matroid is
``{f >= 0 : f[A] <= c(A) rk(A) for every nonempty A}``.  An
``IntersectionSystem`` intersects ``r`` of them, one per ``(M_i, b^i)``.

``nu_star`` maximizes ``a.f`` over the system with ``supp(f)`` inside ``W``.
Only the trace ``A & W`` of a constraint matters for such ``f``, so each
trace keeps its cheapest right-hand side, and a trace is dropped when a
strict superset trace is at least as cheap (it is then implied).  This
leaves the polytope unchanged and makes the primal small.  ``tau_star``
solves the literal dual program over every ``(i, A)`` instead, which is
the route used for uniqueness questions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, InvariantError
from .lp import LinearProgram, LPSolution, dual_program, dual_solution, is_optimum_unique, rational, solve
from .matroids import Hypergraph, Matroid, elements_of, popcount
from .setfunctions import PDSTuple, SetFunction

ZERO = Fraction(0)


class IntersectionSystem:
    """``r`` matroids on one ground set with their PDS right-hand-side tuple."""

    def __init__(self, matroids: Sequence[Matroid], b: PDSTuple | None = None):
        self.matroids = tuple(matroids)
        if not self.matroids:
            raise InputError("an intersection system needs at least one matroid")
        self.n = self.matroids[0].n
        if any(m.n != self.n for m in self.matroids):
            raise InputError("all matroids must share the ground set")
        if b is None:
            b = PDSTuple.ones(self.n, len(self.matroids))
        if len(b) != len(self.matroids) or b.n != self.n:
            raise InputError("need one PDS function per matroid, on the same ground set")
        self.b = b
        self.rhs = tuple(
            tuple(f[A] * rk for A, rk in enumerate(m.rank_table))
            for m, f in zip(self.matroids, self.b)
        )
        self._nu_cache: dict = {}
        self._tau_cache: dict = {}

    @property
    def r(self) -> int:
        return len(self.matroids)

    @property
    def ground(self):
        return self.matroids[0].ground

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def with_b(self, b: PDSTuple) -> "IntersectionSystem":
        return IntersectionSystem(self.matroids, b)

    def polytopes(self) -> list["SkewPolytope"]:
        return [SkewPolytope(m, f) for m, f in zip(self.matroids, self.b)]

    def __repr__(self):
        return f"IntersectionSystem(n={self.n}, r={self.r}, b_min={self.b.b_min})"


@dataclass(frozen=True)
class SkewPolytope:
    matroid: Matroid
    c: SetFunction

    def bound(self, A: int) -> Fraction:
        return self.c[A] * self.matroid.rank_table[A]


def as_vector(values, n: int, name: str = "vector") -> tuple[Fraction, ...]:
    vec = tuple(rational(x) for x in values)
    if len(vec) != n:
        raise InputError(f"{name} has {len(vec)} entries, expected {n}")
    return vec


def ones(n: int) -> tuple[Fraction, ...]:
    return (Fraction(1),) * n


def _positive_weights(a, n: int) -> tuple[Fraction, ...]:
    vec = ones(n) if a is None else as_vector(a, n, "objective a")
    if any(x <= 0 for x in vec):
        raise InputError("objective weights must be strictly positive")
    return vec


def total(f: Sequence[Fraction], mask: int | None = None) -> Fraction:
    if mask is None:
        return sum(f, ZERO)
    return sum((f[v] for v in elements_of(mask)), ZERO)


@dataclass(frozen=True)
class Membership:
    member: bool
    violated: int | None = None
    defect: Fraction = ZERO
    negative: int | None = None

    def __bool__(self):
        return self.member


def membership(f: Sequence, p: SkewPolytope) -> Membership:
    """Test ``f`` against every inequality; report the most violated set (smallest mask on ties)."""
    n = p.matroid.n
    vec = as_vector(f, n, "f")
    for v, x in enumerate(vec):
        if x < 0:
            return Membership(False, negative=v)
    sums = [ZERO] * (1 << n)
    worst, worst_defect = None, ZERO
    for A in range(1, 1 << n):
        low = A & -A
        sums[A] = sums[A ^ low] + vec[low.bit_length() - 1]
        defect = sums[A] - p.bound(A)
        if defect > worst_defect:
            worst, worst_defect = A, defect
    if worst is None:
        return Membership(True)
    return Membership(False, worst, worst_defect)


def in_system(f: Sequence, sys: IntersectionSystem) -> Membership:
    for p in sys.polytopes():
        report = membership(f, p)
        if not report:
            return report
    return Membership(True)


@dataclass(frozen=True)
class DualWeights:
    """Nonzero values ``h(i, A)``; ``i`` is a 0-based matroid index."""

    h: tuple[tuple[tuple[int, int], Fraction], ...]

    def __init__(self, values: dict):
        items = tuple(sorted((k, rational(v)) for k, v in values.items() if v))
        object.__setattr__(self, "h", items)

    def as_dict(self) -> dict:
        return dict(self.h)

    @property
    def support(self) -> list[tuple[int, int]]:
        return [k for k, _ in self.h]

    def cost(self, sys: IntersectionSystem) -> Fraction:
        return sum((sys.rhs[i][A] * x for (i, A), x in self.h), ZERO)

    def coverage(self, v: int) -> Fraction:
        return sum((x for (_, A), x in self.h if A >> v & 1), ZERO)


@dataclass(frozen=True)
class NuStar:
    value: Fraction
    f: tuple[Fraction, ...]
    h: DualWeights
    solution: LPSolution | None = None


def _trace_rows(sys: IntersectionSystem, W: int):
    """Undominated constraint traces on ``W``: list of ``(local_mask, rhs, (i, A))``."""
    elems = elements_of(W)
    w = len(elems)
    size = 1 << w
    best: list = [None] * size
    where: list = [None] * size
    # map global trace mask -> local mask
    local = {}
    for L in range(size):
        g = 0
        for j in range(w):
            if L >> j & 1:
                g |= 1 << elems[j]
        local[g] = L
    for i, rhs in enumerate(sys.rhs):
        for A in range(1, 1 << sys.n):
            S = A & W
            if not S:
                continue
            L = local[S]
            val = rhs[A]
            if best[L] is None or val < best[L]:
                best[L], where[L] = val, (i, A)
    above: list = [None] * size
    sub = list(best)
    for L in range(size - 1, 0, -1):
        m = None
        for j in range(w):
            if not L >> j & 1:
                x = sub[L | 1 << j]
                if m is None or x < m:
                    m = x
        above[L] = m
        if m is not None and m < sub[L]:
            sub[L] = m
    return [(L, best[L], where[L]) for L in range(1, size) if above[L] is None or best[L] < above[L]], elems


def nu_star(sys: IntersectionSystem, W: int, a=None) -> NuStar:
    """Maximize ``a.f`` over the system with ``supp(f) <= W``.

    Returns the value, an optimal vertex ``f`` (indexed by the whole ground
    set) and an optimal dual ``h`` for the full dual program, built from the
    final basis.
    """
    sys.ground.check(W)
    av = _positive_weights(a, sys.n)
    key = (W, av)
    hit = sys._nu_cache.get(key)
    if hit is not None:
        return hit
    if W == 0:
        result = NuStar(ZERO, (ZERO,) * sys.n, DualWeights({}))
        sys._nu_cache[key] = result
        return result
    rows, elems = _trace_rows(sys, W)
    w = len(elems)
    A = [[1 if L >> j & 1 else 0 for j in range(w)] for L, _, _ in rows]
    lp = LinearProgram([av[v] for v in elems], A, [rhs for _, rhs, _ in rows])
    sol = solve(lp)
    if not sol.optimal:
        raise InvariantError(f"nu* program for W={W:#x} ended {sol.status}")
    f = [ZERO] * sys.n
    for j, v in enumerate(elems):
        f[v] = sol.primal[j]
    h = DualWeights({rows[t][2]: y for t, y in enumerate(sol.dual) if y})
    result = NuStar(sol.value, tuple(f), h, sol)
    sys._nu_cache[key] = result
    return result


def nu_star_value(sys: IntersectionSystem, W: int, a=None) -> Fraction:
    return nu_star(sys, W, a).value


def full_program(sys: IntersectionSystem, W: int, a=None) -> tuple[LinearProgram, list[tuple[int, int]]]:
    """The primal over ``f`` on ``W`` with one row per ``(i, A)``, ``A`` nonempty, no row merged.

    Its LP dual is exactly the ``tau*`` program.  Returns the program and the
    ``(i, A)`` label of each row.
    """
    av = _positive_weights(a, sys.n)
    elems = elements_of(W)
    labels = [(i, A) for i in range(sys.r) for A in range(1, 1 << sys.n)]
    rows = [[1 if A >> v & 1 else 0 for v in elems] for _, A in labels]
    rhs = [sys.rhs[i][A] for i, A in labels]
    return LinearProgram([av[v] for v in elems], rows, rhs), labels


def tau_program(sys: IntersectionSystem, W: int, a=None) -> tuple[LinearProgram, list[tuple[int, int]]]:
    """``min sum b^i(A) rk_i(A) h(i, A)`` over all ``(i, A)`` covering ``W``, as ``max -cost.h``.

    Column ``j`` is the variable ``h(labels[j])``.
    """
    lp, labels = full_program(sys, W, a)
    return dual_program(lp), labels


def _tau_entry(sys: IntersectionSystem, W: int, av):
    key = (W, av)
    hit = sys._tau_cache.get(key)
    if hit is None:
        lp, labels = full_program(sys, W, av)
        sol = solve(lp)
        if not sol.optimal:
            raise InvariantError(f"full primal for W={W:#x} ended {sol.status}")
        h = DualWeights({labels[t]: y for t, y in enumerate(sol.dual) if y})
        value = h.cost(sys)
        for v in elements_of(W):
            if h.coverage(v) < av[v]:
                raise InvariantError(f"tau* weights leave element {v} uncovered")
        hit = (value, h, lp, sol)
        sys._tau_cache[key] = hit
    return hit


def tau_star(sys: IntersectionSystem, W: int, a=None) -> tuple[Fraction, DualWeights]:
    """Optimal value and weights ``h`` of the covering program dual to ``nu*``.

    ``h`` comes from the final basis of the unmerged primal; its covering
    constraints and its cost are re-evaluated directly from the definition.
    """
    sys.ground.check(W)
    av = _positive_weights(a, sys.n)
    if W == 0:
        return ZERO, DualWeights({})
    value, h, _, _ = _tau_entry(sys, W, av)
    return value, h


def is_dual_unique(sys: IntersectionSystem, W: int, a=None) -> bool:
    """Whether exactly one ``h`` attains ``tau*(W)``; the zero program is vacuously unique."""
    sys.ground.check(W)
    av = _positive_weights(a, sys.n)
    if W == 0:
        return True
    _, _, lp, sol = _tau_entry(sys, W, av)
    dlp, dsol = dual_solution(lp, sol)
    return is_optimum_unique(dlp, dsol).unique


def tight_sets(f: Sequence, p: SkewPolytope, W: int) -> list[int]:
    """Nonempty ``A <= W`` with ``f[A] = c(A) rk(A)``; closure under union and intersection is verified."""
    vec = as_vector(f, p.matroid.n, "f")
    if not membership(vec, p):
        raise InputError("tight_sets needs a point of the polytope")
    if any(vec[v] for v in range(len(vec)) if not W >> v & 1):
        raise InputError("supp(f) must lie inside W")
    tight = {0}
    for A in range(1, 1 << p.matroid.n):
        if A & ~W:
            continue
        if total(vec, A) == p.bound(A):
            tight.add(A)
    for A in tight:
        for B in tight:
            if A | B not in tight or A & B not in tight:
                raise InvariantError(f"tight family not closed at {A:#x}, {B:#x}")
    return sorted(tight - {0})


def round_two_matroids(f: Sequence, m1: Matroid, m2: Matroid) -> tuple[int, ...]:
    """Return a 0/1 vertex ``g`` of ``P(M1) & P(M2)`` with ``supp(g) <= supp(f)`` and ``|g| >= |f|``."""
    sys = IntersectionSystem([m1, m2])
    vec = as_vector(f, sys.n, "f")
    if not in_system(vec, sys):
        raise InputError("f must lie in both matroid polytopes")
    support = sum(1 << v for v, x in enumerate(vec) if x)
    g = nu_star(sys, support).f
    if any(x not in (0, 1) for x in g):
        raise InvariantError(f"two-matroid vertex is not integral: {g}")
    if total(g) < total(vec):
        raise InvariantError("rounded vertex is smaller than the input")
    return tuple(int(x) for x in g)


def hypergraph_nu_star(hg: Hypergraph, W: int) -> Fraction:
    """Fractional matching number of the edges in ``W`` via the edge-vertex program."""
    edges = elements_of(W)
    if not edges:
        return ZERO
    verts = sorted(hg.vertices(W), key=repr)
    rows = [[1 if hg.edges[e][i] == x else 0 for e in edges] for i, x in verts]
    sol = solve(LinearProgram([1] * len(edges), rows, [1] * len(rows)))
    return sol.value


def is_common_independent(mask: int, matroids: Sequence[Matroid]) -> bool:
    k = popcount(mask)
    return all(m.rank(mask) == k for m in matroids)
