"""Named instance families with known properties, for tests and controls."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .fpmat import is_prime, mat_pow, identity
from .groups import AffineInstance, MAX_POINTS

__all__ = [
    "FamilySpec",
    "wreath_c2_cp",
    "sl_natural",
    "singer_control",
    "family_spec",
    "build_family",
    "FAMILY_NAMES",
]

FAMILY_NAMES = ("wreath", "sl", "singer")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    p: int
    d: int
    expected_irreducible: bool
    expected_p_divides_order: bool
    expected_order: int | None
    expected_diameter: int | None


def wreath_c2_cp(p: int) -> AffineInstance:
    """Sign-flip plus p-cycle generators of C2 wr Cp acting on F_p^p.

    Expected directed diameter p(p-1)/2, group order 2^p * p.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"wreath family needs an odd prime, got {p}")
    flip = identity(p)
    flip[0, 0] = p - 1
    cycle = np.zeros((p, p), dtype=np.int64)
    for i in range(p):
        cycle[i, (i + 1) % p] = 1
    return AffineInstance(p=p, d=p, generators=(flip, cycle), label=f"wreath_c2_c{p}")


def sl_natural(d: int, p: int) -> AffineInstance:
    """SL(d, p) on its natural module, generated by elementary transvections."""
    if d < 2:
        raise ValueError("sl family needs d >= 2")
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                E = identity(d)
                E[i, j] = 1
                gens.append(E)
    return AffineInstance(p=p, d=d, generators=tuple(gens), label=f"sl_{d}_{p}")


def _companion(coeffs: tuple[int, ...], p: int) -> np.ndarray:
    """Multiplication-by-x matrix of x^d + c_{d-1} x^{d-1} + ... + c_0, row convention."""
    d = len(coeffs)
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        C[i, i + 1] = 1
    C[d - 1] = [(-c) % p for c in coeffs]
    return C


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def singer_control(d: int, p: int) -> AffineInstance:
    """Cyclic irreducible group of order p^d - 1 (so p never divides |G|).

    The generator is the companion matrix of the first primitive polynomial
    in coefficient-lexicographic order; primitivity is certified by checking
    the matrix order against the factorization of p^d - 1.
    """
    if not is_prime(p) or d < 1:
        raise ValueError("singer family needs prime p and d >= 1")
    if p**d > MAX_POINTS:
        raise ValueError(f"p^d = {p**d} exceeds the supported point cap")
    n = p**d - 1
    if n == 1:
        # F_2 with d = 1: the trivial group is the whole multiplicative group
        return AffineInstance(p=p, d=d, generators=(identity(1),), label=f"singer_{d}_{p}")
    factors = _prime_factors(n)
    for coeffs in product(range(p), repeat=d):
        if coeffs[0] == 0:
            continue  # constant term must be a unit for an invertible companion
        C = _companion(coeffs, p)
        if not np.array_equal(mat_pow(C, n, p), identity(d)):
            continue
        if any(np.array_equal(mat_pow(C, n // q, p), identity(d)) for q in factors):
            continue
        return AffineInstance(p=p, d=d, generators=(C,), label=f"singer_{d}_{p}")
    raise RuntimeError(f"no primitive polynomial found for d={d}, p={p}")


def _order_sl(d: int, p: int) -> int:
    order = 1
    q = p**d
    for i in range(d):
        order *= q - p**i
    return order // (p - 1)


def family_spec(family: str, p: int, d: int | None = None) -> FamilySpec:
    if family == "wreath":
        return FamilySpec(
            family="wreath",
            p=p,
            d=p,
            expected_irreducible=True,
            expected_p_divides_order=True,
            expected_order=2**p * p,
            expected_diameter=p * (p - 1) // 2,
        )
    if family == "sl":
        if d is None:
            raise ValueError("sl family needs d")
        return FamilySpec(
            family="sl",
            p=p,
            d=d,
            expected_irreducible=True,
            expected_p_divides_order=True,
            expected_order=_order_sl(d, p),
            expected_diameter=1,  # transitive on nonzero vectors
        )
    if family == "singer":
        if d is None:
            raise ValueError("singer family needs d")
        return FamilySpec(
            family="singer",
            p=p,
            d=d,
            expected_irreducible=True,
            expected_p_divides_order=False,
            expected_order=p**d - 1,
            expected_diameter=1,  # transitive on nonzero vectors
        )
    raise ValueError(f"unknown family '{family}', expected one of {FAMILY_NAMES}")


def build_family(family: str, p: int, d: int | None = None) -> AffineInstance:
    if family == "wreath":
        return wreath_c2_cp(p)
    if family == "sl":
        if d is None:
            raise ValueError("sl family needs d")
        return sl_natural(d, p)
    if family == "singer":
        if d is None:
            raise ValueError("singer family needs d")
        return singer_control(d, p)
    raise ValueError(f"unknown family '{family}', expected one of {FAMILY_NAMES}")
