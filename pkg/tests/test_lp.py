from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowlab.errors import InputError
from rainbowlab.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    dual_program,
    dual_solution,
    is_optimum_unique,
    rational,
    solve,
)
from oracles import lp_oracle


def test_single_variable():
    sol = solve(LinearProgram([1], [[1]], [1]))
    assert sol.status == OPTIMAL
    assert sol.value == 1 and sol.primal == (1,) and sol.dual == (1,)


def test_box():
    sol = solve(LinearProgram([1, 1], [[1, 0], [0, 1]], [1, 1]))
    assert sol.value == 2


def test_uniform_matroid_polytope():
    # uniform(4,2): f[A] <= min(|A|, 2) for every nonempty A
    rows, rhs = [], []
    for A in range(1, 16):
        rows.append([A >> v & 1 for v in range(4)])
        rhs.append(min(bin(A).count("1"), 2))
    assert solve(LinearProgram([1] * 4, rows, rhs)).value == 2


def test_infeasible_and_unbounded():
    assert solve(LinearProgram([1], [[1]], [-1])).status == INFEASIBLE
    assert solve(LinearProgram([1, 0], [[0, 1]], [1])).status == UNBOUNDED


def test_phase_one_needed():
    # x >= 1 written as -x <= -1, x <= 3
    sol = solve(LinearProgram([-1], [[-1], [1]], [-1, 3]))
    assert sol.value == -1 and sol.primal == (1,)


def test_rational_parsing():
    assert rational("3/6") == Fraction(1, 2)
    assert rational(0.25) == Fraction(1, 4)
    assert rational("0.1") == Fraction(1, 10)
    with pytest.raises(InputError):
        rational([1])
    with pytest.raises(InputError):
        LinearProgram([1, 2], [[1]], [1])


def test_uniqueness_examples():
    lp = LinearProgram([1], [[1]], [1])
    assert is_optimum_unique(lp, solve(lp)).unique
    lp = LinearProgram([1, 1], [[1, 1]], [1])
    sol = solve(lp)
    u = is_optimum_unique(lp, sol)
    assert not u.unique
    assert u.alternate != sol.primal
    assert sum(u.alternate) == 1 and min(u.alternate) >= 0


def test_uniqueness_requires_optimal():
    lp = LinearProgram([1], [[1]], [-1])
    with pytest.raises(InputError):
        is_optimum_unique(lp, solve(lp))


small = st.integers(-2, 4)


@st.composite
def bounded_lps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 3))
    c = [draw(st.integers(-3, 5)) for _ in range(n)]
    A = [[draw(small) for _ in range(n)] for _ in range(m)]
    b = [draw(st.integers(-2, 6)) for _ in range(m)]
    # a bounding row keeps every feasible region a polytope
    A.append([1] * n)
    b.append(draw(st.integers(1, 8)))
    return c, A, b


@settings(max_examples=200)
@given(bounded_lps())
def test_solve_matches_vertex_enumeration(data):
    c, A, b = data
    value, optima = lp_oracle(c, A, b)
    sol = solve(LinearProgram(c, A, b))
    if value is None:
        assert sol.status == INFEASIBLE
        return
    assert sol.status == OPTIMAL
    assert sol.value == value
    assert tuple(sol.primal) in optima
    # zero duality gap, exactly
    assert sum(y * bi for y, bi in zip(sol.dual, b)) == value
    # complementary slackness
    for row, bi, y in zip(A, b, sol.dual):
        if y:
            assert sum(a * x for a, x in zip(row, sol.primal)) == bi


@settings(max_examples=150)
@given(bounded_lps())
def test_uniqueness_matches_vertex_enumeration(data):
    c, A, b = data
    value, optima = lp_oracle(c, A, b)
    if value is None:
        return
    lp = LinearProgram(c, A, b)
    u = is_optimum_unique(lp, solve(lp))
    assert u.unique == (len(optima) == 1)
    if not u.unique:
        alt = u.alternate
        assert sum(ci * x for ci, x in zip(c, alt)) == value
        assert all(sum(a * x for a, x in zip(row, alt)) <= bi for row, bi in zip(A, b))


def _per_variable_unique(lp, sol):
    # pin the objective to its optimum, then max and min every coordinate
    rows = list(lp.rows) + [list(lp.objective), [-x for x in lp.objective]]
    rhs = list(lp.rhs) + [sol.value, -sol.value]
    for j in range(lp.n):
        e = [1 if i == j else 0 for i in range(lp.n)]
        hi = solve(LinearProgram(e, rows, rhs)).value
        lo = -solve(LinearProgram([-x for x in e], rows, rhs)).value
        if hi != lo:
            return False
    return True


@settings(max_examples=100)
@given(bounded_lps())
def test_uniqueness_matches_per_variable_method(data):
    c, A, b = data
    lp = LinearProgram(c, A, b)
    sol = solve(lp)
    if not sol.optimal:
        return
    assert is_optimum_unique(lp, sol).unique == _per_variable_unique(lp, sol)


@settings(max_examples=100)
@given(bounded_lps())
def test_dual_solution_is_optimal_for_dual(data):
    c, A, b = data
    lp = LinearProgram(c, A, b)
    sol = solve(lp)
    if not sol.optimal:
        return
    dlp, dsol = dual_solution(lp, sol)
    assert dlp == dual_program(lp)
    assert dsol.value == -sol.value
    assert dsol.primal == sol.dual
    independent = solve(dlp)
    assert independent.value == dsol.value
