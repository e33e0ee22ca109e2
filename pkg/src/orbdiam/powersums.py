"""Simultaneous diagonal power-sum systems over F_p.

A system asks for x_1..x_m in F_p with sum_j x_j^i = b_i for i = 1..k.  The
solver is layered: R_j is the set of power-sum vectors attainable with j
unknowns, built as iterated sumsets of the curve {(x, x^2, ..., x^k)} inside
(Z/pZ)^k.  Membership of the right-hand side in R_m decides solvability
exhaustively, and walking the residual target back down the tables, always
taking the smallest feasible unknown, yields the lexicographically least
solution.  The tables also answer solvability for every right-hand side at
once, which is what the frontier scan wants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SearchBudgetExceededError

# total bool cells across all layers of one table stack
DEFAULT_BUDGET_CELLS = 1 << 27

__all__ = [
    "PowerSumSystem",
    "FrontierRow",
    "power_signature",
    "solve",
    "verify_solution",
    "binomial_moment_system",
    "unknown_count",
    "solvability_frontier",
]


@dataclass(frozen=True)
class PowerSumSystem:
    p: int
    k: int
    m: int
    rhs: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1 or self.m < 1:
            raise ValueError("k and m must be >= 1")
        if len(self.rhs) != self.k:
            raise ValueError(f"rhs has length {len(self.rhs)}, expected k = {self.k}")
        object.__setattr__(self, "rhs", tuple(int(b) % self.p for b in self.rhs))


def power_signature(x: int, k: int, p: int) -> np.ndarray:
    """(x, x^2, ..., x^k) mod p."""
    out = np.empty(k, dtype=np.int64)
    v = 1
    for i in range(k):
        v = v * x % p
        out[i] = v
    return out


def _signature_index(sig: np.ndarray, p: int) -> int:
    idx = 0
    for i in range(len(sig) - 1, -1, -1):
        idx = idx * p + int(sig[i])
    return idx


@lru_cache(maxsize=32)
def _reach_tables(p: int, k: int, m: int) -> tuple[np.ndarray, ...]:
    """R_0..R_m as boolean grids of shape (p,)*k; R_0 = {0}."""
    shape = (p,) * k
    r0 = np.zeros(shape, dtype=bool)
    r0.flat[0] = True
    tables = [r0]
    sigs = [power_signature(x, k, p) for x in range(p)]
    axes = tuple(range(k))
    current = r0
    for _ in range(m):
        nxt = np.zeros(shape, dtype=bool)
        for sig in sigs:
            # grid axis 0 is the most significant digit, i.e. sig[k-1]
            shift = tuple(int(sig[k - 1 - a]) for a in axes)
            nxt |= np.roll(current, shift=shift, axis=axes)
        tables.append(nxt)
        current = nxt
    for t in tables:
        t.setflags(write=False)
    return tuple(tables)


def _check_budget(p: int, k: int, m: int, budget_cells: int):
    cells = (m + 1) * p**k
    if cells > budget_cells:
        raise SearchBudgetExceededError(
            f"table stack needs {cells} cells, budget is {budget_cells}"
        )


def solve(
    system: PowerSumSystem, budget_cells: int = DEFAULT_BUDGET_CELLS
) -> tuple[int, ...] | None:
    """Lexicographically smallest solution, or None when none exists.

    None is an exhaustive verdict (the attainable-set tables cover all of
    F_p^m); infeasible table sizes raise SearchBudgetExceededError instead.
    """
    p, k, m = system.p, system.k, system.m
    _check_budget(p, k, m, budget_cells)
    tables = _reach_tables(p, k, m)
    target = np.asarray(system.rhs, dtype=np.int64)
    if not tables[m].flat[_signature_index(target, p)]:
        return None
    xs: list[int] = []
    residual = target
    for j in range(m, 0, -1):
        for x in range(p):
            rem = (residual - power_signature(x, k, p)) % p
            if tables[j - 1].flat[_signature_index(rem, p)]:
                xs.append(x)
                residual = rem
                break
        else:
            raise AssertionError("reachability tables are inconsistent")
    solution = tuple(xs)
    if not verify_solution(system, solution):
        raise AssertionError("reconstructed solution failed verification")
    return solution


def verify_solution(system: PowerSumSystem, xs) -> bool:
    """Direct substitution check, independent of the solver's tables."""
    if len(xs) != system.m:
        return False
    p = system.p
    for i in range(1, system.k + 1):
        total = sum(pow(int(x) % p, i, p) for x in xs) % p
        if total != system.rhs[i - 1]:
            return False
    return True


def unknown_count(k: int) -> int:
    """max(1, ceil(4(k-1) log(k-1))) unknowns for a degree-k construction."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 2:
        return 1
    return max(1, math.ceil(4 * (k - 1) * math.log(k - 1)))


def binomial_moment_system(k: int, alpha: int, p: int) -> PowerSumSystem:
    """System whose solutions collapse binomial-coefficient sums.

    The k-1 equations prescribe vanishing power sums below degree k-1 and
    value alpha * (k-1)! at degree k-1; then sum_j C(x_j, i) equals m, 0, or
    alpha for i = 0, 0 < i < k-1, i = k-1 respectively.  For k = 2 this is
    the single equation x_1 = alpha with one unknown.
    """
    if not 2 <= k < p:
        raise ValueError(f"need 2 <= k < p, got k={k}, p={p}")
    m = unknown_count(k)
    rhs = (0,) * (k - 2) + (alpha * math.factorial(k - 1) % p,)
    return PowerSumSystem(p=p, k=k - 1, m=m, rhs=rhs)


@dataclass(frozen=True)
class FrontierRow:
    p: int
    k: int
    m: int
    all_solvable: bool
    unsolvable_count: int
    counterexample: tuple[int, ...] | None


def solvability_frontier(
    p: int, k: int, m_max: int, budget_cells: int = DEFAULT_BUDGET_CELLS
) -> list[FrontierRow]:
    """For each m <= m_max, whether every rhs in F_p^k is solvable.

    Exhaustive over right-hand sides: R_m is exactly the attainable set.  The
    recorded counterexample is the first unsolvable rhs in table order.
    """
    _check_budget(p, k, m_max, budget_cells)
    tables = _reach_tables(p, k, m_max)
    rows = []
    for m in range(1, m_max + 1):
        flat = tables[m].reshape(-1)
        missing = np.flatnonzero(~flat)
        if missing.size:
            first = int(missing[0])
            digits = []
            for _ in range(k):
                digits.append(first % p)
                first //= p
            counterexample = tuple(digits)
        else:
            counterexample = None
        rows.append(
            FrontierRow(
                p=p,
                k=k,
                m=m,
                all_solvable=missing.size == 0,
                unsolvable_count=int(missing.size),
                counterexample=counterexample,
            )
        )
    return rows
