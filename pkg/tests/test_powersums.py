import math
from itertools import product

import pytest

from orbdiam.errors import SearchBudgetExceededError
from orbdiam.powersums import (
    PowerSumSystem,
    binomial_moment_system,
    power_signature,
    solvability_frontier,
    solve,
    unknown_count,
    verify_solution,
)


def _brute_solutions(system):
    # exhaustive enumeration, lexicographic order
    out = []
    for xs in product(range(system.p), repeat=system.m):
        if verify_solution(system, xs):
            out.append(xs)
    return out


def test_single_linear_equation():
    for alpha in range(11):
        assert solve(PowerSumSystem(p=11, k=1, m=1, rhs=(alpha,))) == (alpha,)


def test_zero_rhs_has_zero_solution():
    for m in (1, 3, 5):
        assert solve(PowerSumSystem(p=7, k=2, m=m, rhs=(0, 0))) == (0,) * m


def test_p37_k2_m6_example():
    system = PowerSumSystem(p=37, k=2, m=6, rhs=(0, 4))
    sol = solve(system)
    assert sol is not None
    assert sum(sol) % 37 == 0
    assert sum(x * x for x in sol) % 37 == 4


def test_no_solution_is_exhaustive():
    # one unknown: x = 1 forces x^2 = 1, so rhs (1, 2) is unsolvable over F_5
    system = PowerSumSystem(p=5, k=2, m=1, rhs=(1, 2))
    assert solve(system) is None
    assert _brute_solutions(system) == []


def test_solver_returns_lexicographically_least():
    for rhs in [(0, 1), (3, 2), (6, 5), (1, 1)]:
        system = PowerSumSystem(p=7, k=2, m=2, rhs=rhs)
        brute = _brute_solutions(system)
        got = solve(system)
        assert got == (brute[0] if brute else None)


def test_unknown_count():
    assert unknown_count(2) == 1
    assert unknown_count(3) == math.ceil(8 * math.log(2))  # 6
    assert unknown_count(4) == math.ceil(12 * math.log(3))


def test_moment_system_k2():
    s = binomial_moment_system(2, 5, 11)
    assert (s.k, s.m, s.rhs) == (1, 1, (5,))
    assert solve(s) == (5,)


def test_moment_system_k3():
    s = binomial_moment_system(3, 4, 89)
    assert (s.k, s.m) == (2, 6)
    assert s.rhs == (0, 8)  # alpha * 2!


def test_moment_system_zero_alpha():
    s = binomial_moment_system(3, 0, 89)
    assert solve(s) == (0,) * s.m


def test_moment_system_range_check():
    with pytest.raises(ValueError):
        binomial_moment_system(1, 0, 7)
    with pytest.raises(ValueError):
        binomial_moment_system(7, 0, 7)


def test_frontier_k1_trivially_solvable():
    rows = solvability_frontier(11, 1, 1)
    assert rows[0].all_solvable


def test_frontier_p37_k2():
    rows = solvability_frontier(37, 2, 6)
    assert rows[-1].all_solvable  # m = 6 > 4k log k, p = 37 >= 9k^2
    assert not rows[0].all_solvable


def test_frontier_counterexample_is_unsolvable():
    rows = solvability_frontier(5, 2, 2)
    row = rows[0]  # m = 1 over F_5 cannot hit every rhs
    assert not row.all_solvable
    system = PowerSumSystem(p=5, k=2, m=1, rhs=row.counterexample)
    assert _brute_solutions(system) == []


def test_scaling_symmetry():
    # if x solves rhs b then c*x solves (c b_1, c^2 b_2, ...)
    p = 13
    system = PowerSumSystem(p=p, k=2, m=3, rhs=(4, 9))
    sol = solve(system)
    assert sol is not None
    for c in range(1, p):
        scaled = PowerSumSystem(
            p=p, k=2, m=3, rhs=(c * 4 % p, c * c * 9 % p)
        )
        assert verify_solution(scaled, tuple(c * x % p for x in sol))
        assert solve(scaled) is not None


def test_budget_exceeded_is_distinct_from_no_solution():
    big = PowerSumSystem(p=101, k=4, m=2, rhs=(0, 0, 0, 0))
    with pytest.raises(SearchBudgetExceededError):
        solve(big, budget_cells=10**6)


def test_power_signature():
    assert list(power_signature(3, 3, 7)) == [3, 2, 6]


def test_system_validation():
    with pytest.raises(ValueError):
        PowerSumSystem(p=7, k=0, m=1, rhs=())
    with pytest.raises(ValueError):
        PowerSumSystem(p=7, k=2, m=1, rhs=(1,))
