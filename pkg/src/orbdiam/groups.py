"""Matrix group closure, orbits on the underlying vector space, irreducibility.

Vectors of V = F_p^d are interned as integers in [0, p^d) through the mixed
radix encoding index = sum_i v_i * p^i, so orbit and sumset machinery can work
on flat integer arrays and bitmaps.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapExceededError, SpanFailureError
from .fpmat import identity, is_prime, rank

# p^d above this is rejected at instance construction: the engines index V by
# machine integers and keep per-point tables in memory.
MAX_POINTS = 10_000_000

DEFAULT_CLOSURE_CAP = 1_000_000
CLOSURE_CAP_ENV = "ORBDIAM_CAP"

__all__ = [
    "MAX_POINTS",
    "DEFAULT_CLOSURE_CAP",
    "AffineInstance",
    "VectorSpace",
    "GroupClosure",
    "Orbit",
    "OrbitPartition",
    "close_group",
    "element_order",
    "find_order_p_element",
    "vector_orbits",
    "single_orbit",
    "is_irreducible",
    "spanning_translates",
]


@dataclass(frozen=True, eq=False)
class AffineInstance:
    """Problem input: the group <generators> acting on (Z/pZ)^d by v -> v @ A."""

    p: int
    d: int
    generators: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.p**self.d > MAX_POINTS:
            raise ValueError(
                f"p^d = {self.p}^{self.d} exceeds the supported point cap {MAX_POINTS}"
            )
        if not self.generators:
            raise ValueError("at least one generator is required")
        gens = []
        for g in self.generators:
            A = np.asarray(g, dtype=np.int64) % self.p
            if A.shape != (self.d, self.d):
                raise ValueError(f"generator has shape {A.shape}, expected ({self.d}, {self.d})")
            if rank(A, self.p) != self.d:
                raise ValueError("generator is not invertible mod p")
            A.setflags(write=False)
            gens.append(A)
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def npoints(self) -> int:
        return self.p**self.d


class VectorSpace:
    """Index bijection between (Z/pZ)^d and [0, p^d)."""

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.n = p**d
        self.powers = p ** np.arange(d, dtype=np.int64)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Full decode table, shape (p^d, d), row i = digits of i."""
        idx = np.arange(self.n, dtype=np.int64)
        return ((idx[:, None] // self.powers) % self.p).astype(np.int32)

    def encode(self, vectors: np.ndarray) -> np.ndarray:
        return (np.asarray(vectors, dtype=np.int64) % self.p) @ self.powers

    def decode(self, indices) -> np.ndarray:
        return self.vectors[np.asarray(indices)]

    def negate(self, indices) -> np.ndarray:
        return self.encode((-self.decode(indices).astype(np.int64)) % self.p)


@dataclass(eq=False)
class GroupClosure:
    """Enumerated element set of a finite matrix group.

    Elements are numbered in breadth-first discovery order: the identity is
    element 0, then products parent @ generator with generators applied in
    their listed order.  This ordering is part of the contract so that
    generator words and greedy scans are reproducible run to run.
    """

    p: int
    d: int
    elements: np.ndarray  # (order, d, d) int32
    parent: np.ndarray  # BFS tree, -1 for the identity
    via_gen: np.ndarray  # generator index applied at parent

    def __post_init__(self):
        self._index = {
            self.elements[i].tobytes(): i for i in range(len(self.elements))
        }

    @property
    def order(self) -> int:
        return len(self.elements)

    def matrix(self, i: int) -> np.ndarray:
        return self.elements[i].astype(np.int64)

    def index_of(self, A: np.ndarray) -> int | None:
        key = (np.asarray(A, dtype=np.int64) % self.p).astype(np.int32).tobytes()
        return self._index.get(key)

    def word(self, i: int) -> tuple[int, ...]:
        """Generator indices whose left-to-right product is element i."""
        out: list[int] = []
        while i != 0:
            out.append(int(self.via_gen[i]))
            i = int(self.parent[i])
        return tuple(reversed(out))


def _closure_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(CLOSURE_CAP_ENV)
    return int(env) if env else DEFAULT_CLOSURE_CAP


def close_group(inst: AffineInstance, cap: int | None = None) -> GroupClosure:
    """Breadth-first closure of <generators> under multiplication.

    The cap bounds the number of enumerated elements (default
    DEFAULT_CLOSURE_CAP, overridable through the ORBDIAM_CAP environment
    variable); CapExceededError signals an instance too large for exact mode.
    """
    cap = _closure_cap(cap)
    p, d = inst.p, inst.d
    gens = [g.astype(np.int64) for g in inst.generators]
    ident = identity(d).astype(np.int32)
    elements: list[np.ndarray] = [ident]
    index: dict[bytes, int] = {ident.tobytes(): 0}
    parent: list[int] = [-1]
    via: list[int] = [-1]
    ptr = 0
    while ptr < len(elements):
        A = elements[ptr].astype(np.int64)
        for gi, g in enumerate(gens):
            B = ((A @ g) % p).astype(np.int32)
            key = B.tobytes()
            if key not in index:
                if len(elements) >= cap:
                    raise CapExceededError(
                        f"closure of '{inst.label or 'instance'}' exceeds cap {cap}"
                    )
                index[key] = len(elements)
                elements.append(B)
                parent.append(ptr)
                via.append(gi)
        ptr += 1
    return GroupClosure(
        p=p,
        d=d,
        elements=np.stack(elements),
        parent=np.asarray(parent, dtype=np.int64),
        via_gen=np.asarray(via, dtype=np.int64),
    )


def element_order(A: np.ndarray, p: int, limit: int = 2_000_000) -> int:
    """Least n >= 1 with A^n = I, by direct powering."""
    A = np.asarray(A, dtype=np.int64) % p
    ident = identity(len(A))
    B = A
    n = 1
    while not np.array_equal(B, ident):
        B = (B @ A) % p
        n += 1
        if n > limit:
            raise RuntimeError(f"element order exceeds {limit}")
    return n


def _batched_matmul(P: np.ndarray, N: np.ndarray, p: int) -> np.ndarray:
    return np.einsum("nij,njk->nik", P, N) % p


def find_order_p_element(closure: GroupClosure, p: int) -> np.ndarray | None:
    """Some element of order p, or None exactly when p does not divide |G|.

    Elements of order p are precisely the nontrivial unipotent matrices whose
    nilpotency degree k satisfies k <= p, so the scan tests (A - I)^k = 0
    vectorized over the whole closure for ascending k.  Smaller k is preferred
    (k = 2 first); ties break by enumeration order, which puts the input
    generators ahead of deeper products.
    """
    if closure.order % p:
        return None
    d = closure.d
    E = closure.elements.astype(np.int64)
    N = (E - identity(d)) % p
    nontrivial = N.any(axis=(1, 2))
    P = N
    for _ in range(2, min(d, p) + 1):
        P = _batched_matmul(P, N, p)
        mask = nontrivial & ~P.any(axis=(1, 2))
        hits = np.flatnonzero(mask)
        if hits.size:
            return closure.matrix(int(hits[0]))
    raise RuntimeError(
        "p divides the group order but no order-p element was found; "
        "closure enumeration is inconsistent"
    )


@dataclass(eq=False)
class Orbit:
    """One nonzero orbit of G on V, stored as sorted interned indices."""

    space: VectorSpace
    id: int
    rep_index: int
    indices: np.ndarray  # sorted ascending
    partition: "OrbitPartition | None" = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def representative(self) -> np.ndarray:
        return self.space.decode(self.rep_index).astype(np.int64)

    @cached_property
    def members(self) -> np.ndarray:
        """Member vectors, shape (size, d) int64, ascending index order."""
        return self.space.decode(self.indices).astype(np.int64)

    def contains_indices(self, idx: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.indices, idx)
        pos = np.clip(pos, 0, len(self.indices) - 1)
        return self.indices[pos] == idx


@dataclass(eq=False)
class OrbitPartition:
    """Partition of V \\ {0} into G-orbits plus the singleton zero orbit.

    orbit_id maps every point index to its orbit; the zero vector gets the
    extra id len(orbits).  Orbits are numbered by ascending representative
    index, which makes all downstream reports canonical.
    """

    space: VectorSpace
    orbit_id: np.ndarray  # int32 over [0, p^d)
    orbits: list[Orbit]

    @property
    def zero_id(self) -> int:
        return len(self.orbits)

    @cached_property
    def rep_indices(self) -> np.ndarray:
        return np.asarray([o.rep_index for o in self.orbits] + [0], dtype=np.int64)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.asarray([o.size for o in self.orbits] + [1], dtype=np.int64)

    def negation_of(self, oid: int) -> int:
        """Orbit id of -O for orbit id oid (itself an orbit)."""
        neg = self.space.negate(np.asarray([self.rep_indices[oid]]))
        return int(self.orbit_id[neg[0]])

    def orbit_of_vector(self, v: np.ndarray) -> Orbit:
        idx = int(self.space.encode(np.asarray(v, dtype=np.int64)))
        oid = int(self.orbit_id[idx])
        if oid == self.zero_id:
            raise ValueError("zero vector belongs to the excluded zero orbit")
        return self.orbits[oid]


def _generator_index_maps(inst: AffineInstance, space: VectorSpace) -> list[np.ndarray]:
    """For each generator A, the permutation index -> index of v @ A."""
    vecs = space.vectors.astype(np.int64)
    return [space.encode(vecs @ g) for g in inst.generators]


def vector_orbits(inst: AffineInstance) -> OrbitPartition:
    """All nonzero orbits of <generators> on V via index-level BFS.

    Forward images under the generators suffice: the group is finite, so
    reachability is already symmetric.
    """
    space = VectorSpace(inst.p, inst.d)
    perms = _generator_index_maps(inst, space)
    orbit_id = np.full(space.n, -1, dtype=np.int32)
    orbits: list[Orbit] = []
    ptr = 1  # index 0 is the zero vector, handled at the end
    while True:
        while ptr < space.n and orbit_id[ptr] != -1:
            ptr += 1
        if ptr >= space.n:
            break
        oid = len(orbits)
        orbit_id[ptr] = oid
        frontier = np.asarray([ptr], dtype=np.int64)
        chunks = [frontier]
        while frontier.size:
            images = np.unique(np.concatenate([perm[frontier] for perm in perms]))
            fresh = images[orbit_id[images] == -1]
            orbit_id[fresh] = oid
            if fresh.size:
                chunks.append(fresh)
            frontier = fresh
        indices = np.sort(np.concatenate(chunks))
        orbits.append(Orbit(space=space, id=oid, rep_index=ptr, indices=indices))
    orbit_id[0] = len(orbits)
    part = OrbitPartition(space=space, orbit_id=orbit_id, orbits=orbits)
    for o in orbits:
        o.partition = part
    return part


def single_orbit(space: VectorSpace, start: np.ndarray, generators) -> Orbit:
    """Orbit of one vector without materializing the full partition.

    The result has no partition back-reference, so it supports the witness
    machinery but not the partition-based diameter engine.
    """
    gens = [np.asarray(g, dtype=np.int64) % space.p for g in generators]
    start_idx = int(space.encode(np.asarray(start, dtype=np.int64)))
    seen = {start_idx}
    frontier = np.asarray([start_idx], dtype=np.int64)
    while frontier.size:
        vecs = space.decode(frontier).astype(np.int64)
        images = np.unique(np.concatenate([space.encode(vecs @ g) for g in gens]))
        fresh = np.asarray([i for i in images.tolist() if i not in seen], dtype=np.int64)
        seen.update(fresh.tolist())
        frontier = fresh
    indices = np.asarray(sorted(seen), dtype=np.int64)
    return Orbit(space=space, id=0, rep_index=int(indices[0]), indices=indices)


def is_irreducible(partition: OrbitPartition) -> bool:
    """True iff every nonzero orbit spans the whole of V.

    A proper invariant subspace traps the orbit of any of its nonzero
    vectors, so orbit spans detect reducibility exactly.
    """
    d = partition.space.d
    p = partition.space.p
    for orbit in partition.orbits:
        if rank(orbit.members, p) != d:
            return False
    return True


def spanning_translates(closure: GroupClosure, u: np.ndarray) -> list[int]:
    """Indices of d closure elements g_1..g_d with {u @ g_i} a basis of V.

    Greedy scan in enumeration order, keeping elements that grow the span;
    guaranteed to succeed for irreducible groups and any u != 0, otherwise
    raises SpanFailureError.
    """
    p, d = closure.p, closure.d
    u = np.asarray(u, dtype=np.int64) % p
    if not u.any():
        raise ValueError("u must be nonzero")
    images = np.einsum("j,njk->nk", u, closure.elements.astype(np.int64)) % p
    basis = np.zeros((d, d), dtype=np.int64)
    pivot_cols: list[int] = []
    chosen: list[int] = []
    for i in range(len(images)):
        row = images[i].copy()
        for r, c in enumerate(pivot_cols):
            if row[c]:
                row = (row - row[c] * basis[r]) % p
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        c = int(nz[0])
        row = (row * pow(int(row[c]), p - 2, p)) % p
        basis[len(pivot_cols)] = row
        pivot_cols.append(c)
        chosen.append(i)
        if len(chosen) == d:
            return chosen
    raise SpanFailureError(
        "group translates of u do not span V (group is reducible or u is degenerate)"
    )
