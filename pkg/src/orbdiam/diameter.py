"""Exact orbital-graph diameters via iterated sumsets.

The diameter of the Cayley digraph on V with a G-orbit O as connection set is
the least m with the m-fold sumset of O u {0} equal to V.  Every such sumset
is G-stable (it is built from G-stable sets by pointwise sums), hence a union
of whole orbits; the iteration therefore runs on orbit ids, adding the
connection orbit to one representative per newly reached orbit and closing
under G through the precomputed orbit_id table.  A plain vertex-level BFS is
kept alongside as an independent oracle, and bitmap sumsets back the low-level
sumset_add contract.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .errors import NonSpanningOrbitError, ReducibleInstanceError
from .groups import (
    AffineInstance,
    GroupClosure,
    Orbit,
    OrbitPartition,
    VectorSpace,
    close_group,
    is_irreducible,
    vector_orbits,
)

# transient pair arrays in expansion steps are chunked to roughly this size
_CHUNK_CELLS = 4_000_000

__all__ = [
    "IndexedSet",
    "sumset_add",
    "directed_orbit_diameter",
    "directed_orbit_diameter_bfs",
    "undirected_orbit_diameter",
    "undirected_orbit_diameter_bfs",
    "instance_diameter",
    "OrbitDiameterRow",
    "DiameterReport",
]


@dataclass(eq=False)
class IndexedSet:
    """Subset of V as a membership bitmap over [0, p^d)."""

    space: VectorSpace
    bits: np.ndarray  # bool, length p^d

    @classmethod
    def from_indices(cls, space: VectorSpace, indices) -> "IndexedSet":
        bits = np.zeros(space.n, dtype=bool)
        bits[np.asarray(indices, dtype=np.int64)] = True
        return cls(space=space, bits=bits)

    @classmethod
    def from_vectors(cls, space: VectorSpace, vectors) -> "IndexedSet":
        return cls.from_indices(space, space.encode(vectors))

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def is_full(self) -> bool:
        return bool(self.bits.all())


def _grid(space: VectorSpace, bits: np.ndarray) -> np.ndarray:
    # C-order reshape puts the most significant digit v_{d-1} on axis 0
    return bits.reshape((space.p,) * space.d)


def sumset_add(S: IndexedSet, T: IndexedSet) -> IndexedSet:
    """Pairwise sums {s + t mod p} of two subsets of the same space.

    Iterates the smaller set and shifts the other cyclically along every
    axis, so cost is min(|S|, |T|) * p^d bitmap operations.
    """
    if S.space.p != T.space.p or S.space.d != T.space.d:
        raise ValueError("sumset operands live in different spaces")
    space = S.space
    small, large = (S, T) if S.count <= T.count else (T, S)
    result = np.zeros(space.n, dtype=bool)
    out = _grid(space, result)
    base = _grid(space, large.bits)
    axes = tuple(range(space.d))
    for v in space.decode(small.indices()):
        shift = tuple(int(v[space.d - 1 - a]) for a in axes)
        out |= np.roll(base, shift=shift, axis=axes)
    return IndexedSet(space=space, bits=result)


@numba.njit(cache=True, nogil=True)
def _mark_sum_orbits(rep_vecs, rep_enc, conn, conn_enc, carry_cost, orbit_id, reached, p):
    """Set reached[orbit of r + o] for every frontier representative r and
    connection member o.

    Index arithmetic stays in encoded form: the sum index is the sum of the
    two encoded indices minus p * p^t for every digit t that wraps.
    """
    for a in range(rep_vecs.shape[0]):
        base = rep_enc[a]
        for b in range(conn.shape[0]):
            idx = base + conn_enc[b]
            for t in range(rep_vecs.shape[1]):
                if rep_vecs[a, t] + conn[b, t] >= p:
                    idx -= carry_cost[t]
            reached[orbit_id[idx]] = True


def _expand_orbit_frontier(
    part: OrbitPartition,
    frontier_ids: np.ndarray,
    conn_members: np.ndarray,
    conn_enc: np.ndarray,
    reached: np.ndarray,
) -> np.ndarray:
    """Mark orbits of (rep of each frontier orbit) + (connection members).

    Returns the newly reached orbit ids.  One representative per orbit is
    enough: the connection set is G-stable, so the G-closure of rep + O is the
    whole sumset orbit + O.
    """
    space = part.space
    reps = space.decode(part.rep_indices[frontier_ids]).astype(np.int64)
    before = reached.copy()
    _mark_sum_orbits(
        reps,
        space.encode(reps),
        conn_members,
        conn_enc,
        space.powers * space.p,
        part.orbit_id,
        reached,
        space.p,
    )
    return np.flatnonzero(reached & ~before)


def _orbit_diameter_collapsed(
    orbit: Orbit, conn_ids: list[int], conn_members: np.ndarray
) -> tuple[int, list[int]]:
    """Least m with the m-fold sumset of (connection u {0}) covering V.

    Returns (m, covered point counts after each step).  Raises
    NonSpanningOrbitError if the iteration stabilizes early or overruns the
    d(p-1) guard, both of which mean a non-spanning connection set.
    """
    part = orbit.partition
    if part is None:
        raise ValueError("orbit has no partition context; use vector_orbits")
    space = part.space
    nslots = len(part.orbits) + 1
    reached = np.zeros(nslots, dtype=bool)
    reached[part.zero_id] = True
    for cid in conn_ids:
        reached[cid] = True
    sizes = part.sizes
    covered = int(sizes[reached].sum())
    growth = [covered]
    m = 1
    frontier = np.asarray(conn_ids, dtype=np.int64)
    conn_enc = space.encode(conn_members)
    guard = space.d * (space.p - 1)
    while covered < space.n:
        if frontier.size == 0:
            raise NonSpanningOrbitError(
                f"sumset iteration stabilized at {covered}/{space.n} points"
            )
        if m >= guard:
            raise NonSpanningOrbitError(
                f"sumset iteration passed the d(p-1) = {guard} step guard"
            )
        fresh = _expand_orbit_frontier(part, frontier, conn_members, conn_enc, reached)
        covered += int(sizes[fresh].sum())
        m += 1
        growth.append(covered)
        frontier = fresh
    return m, growth


def directed_orbit_diameter(orbit: Orbit, with_growth: bool = False):
    """Directed diameter of the orbital graph with connection set O."""
    m, growth = _orbit_diameter_collapsed(orbit, [orbit.id], orbit.members)
    return (m, growth) if with_growth else m


def undirected_orbit_diameter(orbit: Orbit, with_growth: bool = False):
    """Diameter ignoring orientations: connection set O u (-O) u {0}.

    -O is itself an orbit, so the symmetrized run simply starts from both ids.
    """
    part = orbit.partition
    if part is None:
        raise ValueError("orbit has no partition context; use vector_orbits")
    neg = part.negation_of(orbit.id)
    if neg == orbit.id:
        conn_ids = [orbit.id]
        members = orbit.members
    else:
        conn_ids = [orbit.id, neg]
        members = np.concatenate([orbit.members, part.orbits[neg].members])
    m, growth = _orbit_diameter_collapsed(orbit, conn_ids, members)
    return (m, growth) if with_growth else m


def _bfs_eccentricity_of_zero(space: VectorSpace, conn: np.ndarray) -> int:
    """Layered BFS from the zero vertex along arcs x -> x + o, o in conn."""
    visited = np.zeros(space.n, dtype=bool)
    visited[0] = True
    frontier = np.asarray([0], dtype=np.int64)
    dist = 0
    rows_per_chunk = max(1, _CHUNK_CELLS // max(1, len(conn)))
    while frontier.size:
        fresh_chunks = []
        vecs = space.decode(frontier).astype(np.int64)
        for start in range(0, len(vecs), rows_per_chunk):
            block = vecs[start : start + rows_per_chunk]
            sums = (block[:, None, :] + conn[None, :, :]) % space.p
            idx = np.unique(space.encode(sums.reshape(-1, space.d)))
            fresh = idx[~visited[idx]]
            visited[fresh] = True
            if fresh.size:
                fresh_chunks.append(fresh)
        frontier = (
            np.unique(np.concatenate(fresh_chunks))
            if fresh_chunks
            else np.asarray([], dtype=np.int64)
        )
        if frontier.size:
            dist += 1
    if not visited.all():
        raise NonSpanningOrbitError(
            f"{int((~visited).sum())} vertices unreachable from 0"
        )
    return dist


def directed_orbit_diameter_bfs(orbit: Orbit) -> int:
    """Independent oracle: eccentricity of 0 in the explicit Cayley digraph.

    Must agree with directed_orbit_diameter everywhere; kept deliberately
    naive (per-vertex layering, no orbit collapsing).
    """
    return _bfs_eccentricity_of_zero(orbit.space, orbit.members)


def undirected_orbit_diameter_bfs(orbit: Orbit) -> int:
    conn = np.concatenate([orbit.members, (-orbit.members) % orbit.space.p])
    return _bfs_eccentricity_of_zero(orbit.space, conn)


@dataclass(eq=False)
class OrbitDiameterRow:
    orbit_id: int
    representative: tuple[int, ...]
    size: int
    directed: int
    coverage_by_step: list[int]
    undirected: int | None = None


@dataclass(eq=False)
class DiameterReport:
    label: str
    p: int
    d: int
    group_order: int
    rows: list[OrbitDiameterRow]
    overall_directed: int
    overall_undirected: int | None = None

    @property
    def orbit_count(self) -> int:
        return len(self.rows)


def instance_diameter(
    inst: AffineInstance,
    cap: int | None = None,
    undirected: bool = False,
    threads: int = 1,
    closure: GroupClosure | None = None,
    partition: OrbitPartition | None = None,
) -> DiameterReport:
    """Per-orbit diameters and their maximum for an irreducible instance.

    Orbits are processed independently (optionally in a thread pool); rows
    come back sorted by representative index regardless of schedule.
    """
    closure = closure if closure is not None else close_group(inst, cap)
    partition = partition if partition is not None else vector_orbits(inst)
    if not is_irreducible(partition):
        raise ReducibleInstanceError(
            f"instance '{inst.label}' is reducible; diameters are not defined per contract"
        )

    def row_for(orbit: Orbit) -> OrbitDiameterRow:
        directed, growth = directed_orbit_diameter(orbit, with_growth=True)
        undir = undirected_orbit_diameter(orbit) if undirected else None
        return OrbitDiameterRow(
            orbit_id=orbit.id,
            representative=tuple(int(x) for x in orbit.representative),
            size=orbit.size,
            directed=directed,
            coverage_by_step=growth,
            undirected=undir,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row_for, partition.orbits))
    else:
        rows = [row_for(o) for o in partition.orbits]
    rows.sort(key=lambda r: r.orbit_id)
    return DiameterReport(
        label=inst.label,
        p=inst.p,
        d=inst.d,
        group_order=closure.order,
        rows=rows,
        overall_directed=max(r.directed for r in rows),
        overall_undirected=max(r.undirected for r in rows) if undirected else None,
    )
