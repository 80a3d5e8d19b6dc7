"""Exact rational simplex for ``max c.x  s.t.  A x <= b, x >= 0``.

The solver works on a dictionary (Tucker) tableau holding only the
nonbasic columns, so the tableau is ``m x n`` regardless of how many slack
variables the problem has.  Arithmetic inside the tableau uses ``gmpy2.mpq``;
everything crossing the module boundary is a ``fractions.Fraction``.
Variables ``0..n-1`` are structural and
``n..n+m-1`` are the slacks of the rows.  Pivoting follows Bland's rule;
infeasible starting dictionaries are repaired by a phase one with a single
artificial variable.  Duals are read off the final objective row, so
complementary slackness holds by construction and is checked anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .errors import InputError, InvariantError

_MPQ = type(mpq(0))
OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def rational(x) -> Fraction:
    """Parse ``x`` exactly; strings such as ``"0.1"`` or ``"3/7"`` are accepted."""
    if isinstance(x, Fraction):
        return x
    if type(x) is _MPQ:
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a rational: {x!r}") from exc


def _exact(x):
    # ints are exact already; skipping the Fraction wrapper keeps big programs cheap
    if type(x) is int:
        return x
    return rational(x)


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __init__(self, objective: Sequence, rows: Sequence[Sequence], rhs: Sequence):
        obj = tuple(_exact(c) for c in objective)
        mat = tuple(tuple(_exact(a) for a in row) for row in rows)
        b = tuple(_exact(x) for x in rhs)
        if len(mat) != len(b):
            raise InputError(f"{len(mat)} constraint rows but {len(b)} right-hand sides")
        for i, row in enumerate(mat):
            if len(row) != len(obj):
                raise InputError(f"row {i} has {len(row)} coefficients, expected {len(obj)}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", mat)
        object.__setattr__(self, "rhs", b)

    @property
    def n(self) -> int:
        return len(self.objective)

    @property
    def m(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    basis: tuple[int, ...] = ()
    pivots: int = 0
    tableau: "_Tableau | None" = field(default=None, repr=False, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dictionary ``x_B = beta - T x_N`` with objective ``z = z0 + d . x_N``."""

    def __init__(self, lp: LinearProgram):
        self.n, self.m = lp.n, lp.m
        self.T = [[mpq(x) for x in row] for row in lp.rows]
        self.beta = [mpq(x) for x in lp.rhs]
        self.d = [mpq(x) for x in lp.objective]
        self.z0 = mpq(0)
        self.basic = list(range(self.n, self.n + self.m))
        self.nonbasic = list(range(self.n))
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        T, beta = self.T, self.beta
        row = T[r]
        p = row[s]
        row = [x / p for x in row]
        row[s] = 1 / p
        T[r] = row
        br = beta[r] / p
        beta[r] = br
        nz = [j for j, x in enumerate(row) if x]
        for i, other in enumerate(T):
            if i == r:
                continue
            q = other[s]
            if not q:
                continue
            other[s] = 0
            for j in nz:
                other[j] -= q * row[j]
            beta[i] -= q * br
        ds = self.d[s]
        if ds:
            d = self.d
            d[s] = 0
            for j in nz:
                d[j] -= ds * row[j]
            self.z0 += ds * br
        self.basic[r], self.nonbasic[s] = self.nonbasic[s], self.basic[r]
        self.pivots += 1

    def entering(self) -> int | None:
        best = None
        for j, dj in enumerate(self.d):
            if dj > 0 and (best is None or self.nonbasic[j] < self.nonbasic[best]):
                best = j
        return best

    def leaving(self, s: int) -> int | None:
        best, best_ratio = None, None
        for i, row in enumerate(self.T):
            a = row[s]
            if a > 0:
                ratio = self.beta[i] / a
                if (
                    best is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basic[i] < self.basic[best])
                ):
                    best, best_ratio = i, ratio
        return best

    def run(self) -> str:
        while True:
            s = self.entering()
            if s is None:
                return OPTIMAL
            r = self.leaving(s)
            if r is None:
                return UNBOUNDED
            self.pivot(r, s)

    def phase_one(self, objective: Sequence[Fraction]) -> bool:
        """Drive the dictionary feasible; return False if the LP is infeasible."""
        art = self.n + self.m
        for row in self.T:
            row.append(mpq(-1))
        self.nonbasic.append(art)
        self.d = [mpq(0)] * (len(self.nonbasic) - 1) + [mpq(-1)]
        self.z0 = mpq(0)
        s = len(self.nonbasic) - 1
        r = min(range(self.m), key=lambda i: (self.beta[i], self.basic[i]))
        self.pivot(r, s)
        if self.run() != OPTIMAL:
            raise InvariantError("phase one objective is bounded by zero")
        if self.z0 < 0:
            return False
        if art in self.basic:
            r = self.basic.index(art)
            candidates = [j for j, x in enumerate(self.T[r]) if x]
            if not candidates:
                raise InvariantError("artificial row has no pivot")
            self.pivot(r, min(candidates, key=lambda j: self.nonbasic[j]))
        s = self.nonbasic.index(art)
        for row in self.T:
            del row[s]
        del self.nonbasic[s]
        # restate the true objective in terms of the current nonbasic variables
        d = [mpq(0)] * len(self.nonbasic)
        z0 = mpq(0)
        for j, var in enumerate(self.nonbasic):
            if var < self.n:
                d[j] += mpq(objective[var])
        for i, var in enumerate(self.basic):
            if var < self.n and objective[var]:
                c = mpq(objective[var])
                z0 += c * self.beta[i]
                for j, x in enumerate(self.T[i]):
                    if x:
                        d[j] -= c * x
        self.d, self.z0 = d, z0
        return True

    def primal(self) -> list:
        x = [mpq(0)] * (self.n + self.m)
        for i, var in enumerate(self.basic):
            x[var] = self.beta[i]
        return x

    def dual(self) -> list:
        y = [mpq(0)] * self.m
        for j, var in enumerate(self.nonbasic):
            if var >= self.n:
                y[var - self.n] = -self.d[j]
        return y


_ZERO = Fraction(0)


def _frac(q) -> Fraction:
    if not q:
        return _ZERO
    return Fraction(int(q.numerator), int(q.denominator))


def _certify(lp: LinearProgram, x: Sequence, y: Sequence, value) -> None:
    c = [mpq(v) for v in lp.objective]
    b = [mpq(v) for v in lp.rhs]
    if any(v < 0 for v in x) or any(v < 0 for v in y):
        raise InvariantError("negative primal or dual value at optimum")
    support = [(j, v) for j, v in enumerate(x) if v]
    col = [mpq(0)] * lp.n
    for i, row in enumerate(lp.rows):
        lhs = sum((row[j] * v for j, v in support), mpq(0))
        if lhs > b[i]:
            raise InvariantError(f"primal infeasible at row {i}")
        if y[i]:
            if lhs != b[i]:
                raise InvariantError(f"complementary slackness fails at row {i}")
            yi = y[i]
            for j, a in enumerate(row):
                if a:
                    col[j] += a * yi
    for j in range(lp.n):
        if col[j] < c[j]:
            raise InvariantError(f"dual infeasible at column {j}")
        if x[j] and col[j] != c[j]:
            raise InvariantError(f"complementary slackness fails at column {j}")
    primal_value = sum((cj * xj for cj, xj in zip(c, x)), mpq(0))
    dual_value = sum((bi * yi for bi, yi in zip(b, y) if yi), mpq(0))
    if not primal_value == dual_value == value:
        raise InvariantError(f"duality gap: {primal_value} vs {dual_value}")


def _finish(tab: _Tableau) -> LPSolution:
    full = tab.primal()
    x = tuple(_frac(v) for v in full[: tab.n])
    y = tuple(_frac(v) for v in tab.dual())
    return LPSolution(OPTIMAL, _frac(tab.z0), x, y, tuple(sorted(tab.basic)), tab.pivots, tab)


def solve(lp: LinearProgram, certify: bool = True) -> LPSolution:
    """Solve ``lp`` exactly with Bland's rule.

    On an optimal status the solution carries the primal vertex (structural
    variables), the dual vector (one entry per row) and the basis as the
    sorted list of basic variable ids.  With ``certify`` the optimality
    conditions are re-checked from scratch.
    """
    tab = _Tableau(lp)
    if any(x < 0 for x in lp.rhs):
        if not tab.phase_one(lp.objective):
            return LPSolution(INFEASIBLE, pivots=tab.pivots)
    status = tab.run()
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, pivots=tab.pivots)
    if certify:
        _certify(lp, tab.primal()[: lp.n], tab.dual(), tab.z0)
    return _finish(tab)


@dataclass(frozen=True)
class Uniqueness:
    unique: bool
    alternate: tuple[Fraction, ...] | None = None

    def __bool__(self):
        return self.unique


def is_optimum_unique(lp: LinearProgram, sol: LPSolution) -> Uniqueness:
    """Decide exactly whether the optimal face of ``lp`` is the single point ``sol.primal``.

    In the optimal dictionary the optimal face is the set of points with
    every nonbasic variable of nonzero reduced cost held at zero.  It is a
    single point iff the remaining nonbasic variables cannot move, which is
    settled by maximizing their sum (capped at 1) over the face.  When they
    can move, the maximizer is returned as an alternate optimum.
    """
    tab = sol.tableau
    if not sol.optimal or tab is None:
        raise InputError("uniqueness needs an optimal solution produced by solve()")
    if (tab.n, tab.m) != (lp.n, lp.m):
        raise InputError("solution does not belong to this program")
    free = [j for j, dj in enumerate(tab.d) if dj == 0]
    if not free:
        return Uniqueness(True)
    rows = [[tab.T[i][j] for j in free] for i in range(tab.m)]
    rows.append([1] * len(free))
    secondary = LinearProgram([1] * len(free), rows, list(tab.beta) + [1])
    sec = solve(secondary)
    if sec.value == 0:
        return Uniqueness(True)
    step = [mpq(v) for v in sec.primal]
    full = [mpq(0)] * (tab.n + tab.m)
    for jj, j in enumerate(free):
        full[tab.nonbasic[j]] = step[jj]
    for i, var in enumerate(tab.basic):
        full[var] = tab.beta[i] - sum((tab.T[i][j] * step[jj] for jj, j in enumerate(free)), mpq(0))
    return Uniqueness(False, tuple(_frac(v) for v in full[: tab.n]))


def dual_program(lp: LinearProgram) -> LinearProgram:
    """The LP dual ``min b.y, A^T y >= c, y >= 0`` written as ``max -b.y, -A^T y <= -c``."""
    cols = [[-lp.rows[i][j] for i in range(lp.m)] for j in range(lp.n)]
    return LinearProgram([-x for x in lp.rhs], cols, [-x for x in lp.objective])


def dual_solution(lp: LinearProgram, sol: LPSolution) -> tuple[LinearProgram, LPSolution]:
    """Optimal solution of ``dual_program(lp)`` read off the final dictionary of ``sol``.

    The dual dictionary is the negative transpose of the primal one, with
    each variable swapped for its complement (primal slack ``i`` for dual
    ``y_i``, primal ``x_j`` for the slack of dual row ``j``).  Its basis is
    optimal, so it can be handed to ``is_optimum_unique``.
    """
    tab = sol.tableau
    if not sol.optimal or tab is None:
        raise InputError("dual_solution needs an optimal solution produced by solve()")
    n, m = tab.n, tab.m
    dlp = dual_program(lp)

    def comp(var):
        return var - n if var >= n else m + var

    dual = _Tableau.__new__(_Tableau)
    dual.n, dual.m = m, n
    dual.T = [[-tab.T[i][j] for i in range(m)] for j in range(n)]
    dual.beta = [-x for x in tab.d]
    dual.d = [-x for x in tab.beta]
    dual.z0 = -tab.z0
    dual.basic = [comp(v) for v in tab.nonbasic]
    dual.nonbasic = [comp(v) for v in tab.basic]
    dual.pivots = 0
    if any(x < 0 for x in dual.beta) or any(x > 0 for x in dual.d):
        raise InvariantError("transposed dictionary is not optimal")
    out = _finish(dual)
    if out.primal != sol.dual or out.dual != sol.primal:
        raise InvariantError("transposed dictionary disagrees with the primal solution")
    return dlp, out
