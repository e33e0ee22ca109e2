import numpy as np
import pytest

from conftest import SINGER_CONTROLS, get_closure, get_instance, get_partition
from orbdiam.errors import ReducibleInstanceError
from orbdiam.fpmat import binom_mod, identity, mat_pow, rank
from orbdiam.groups import VectorSpace, find_order_p_element, single_orbit
from orbdiam.witness import (
    build_line_witness,
    certify_instance,
    decompose_target,
    decompose_target_trivial,
    pick_witness_vector,
    span_line,
    trivial_certificate,
)


def jordan_block(d, p):
    J = identity(d)
    for i in range(d - 1):
        J[i, i + 1] = 1
    return J


def synthetic_jordan_orbit(p, d):
    """Orbit of e1 under the cyclic group generated by a full Jordan block."""
    J = jordan_block(d, p)
    space = VectorSpace(p, d)
    e1 = np.zeros(d, dtype=np.int64)
    e1[0] = 1
    return single_orbit(space, e1, [J]), J


def test_pick_witness_vector_transvection():
    # A = [[1,1],[0,1]] over F_3: ker(A - I) is the line x_1 = 0
    part = get_partition("sl_2_3")
    A = np.array([[1, 1], [0, 1]])
    v = pick_witness_vector(part.orbits[0], A, 2)
    N = (A - identity(2)) % 3
    assert ((v @ N) % 3).any()
    assert np.array_equal(v, [1, 0])  # first qualifying member by index


def test_pick_witness_vector_full_jordan():
    orbit, J = synthetic_jordan_orbit(11, 3)
    v = pick_witness_vector(orbit, J, 3)
    N = (J - identity(3)) % 11
    image = (v @ N @ N) % 11
    assert image.any()


def test_pick_witness_vector_counting_oracle():
    part = get_partition("sl_2_5")
    A = find_order_p_element(get_closure("sl_2_5"), 5)
    N = (A - identity(2)) % 5
    qualifying = [v for v in part.orbits[0].members if ((v @ N) % 5).any()]
    assert qualifying  # kernel is proper, so some member must qualify
    v = pick_witness_vector(part.orbits[0], A, 2)
    assert any(np.array_equal(v, q) for q in qualifying)


def test_line_witness_sl2_11():
    part = get_partition("sl_2_11")
    A = find_order_p_element(get_closure("sl_2_11"), 11)
    w = build_line_witness(part.orbits[0], A)
    assert (w.k, w.m) == (2, 1)  # transvection-like element: one summand
    assert w.verify()
    for alpha in range(11):
        assert w.exponents[alpha] == (alpha,)
        want = (w.base + alpha * w.direction) % 11
        assert np.array_equal(w.summands[alpha][0], want)


def test_line_witness_matrix_identity_exhaustive():
    # k = 3 construction over F_89 (p >= 9(k-1)^2 so moments always solve)
    orbit, J = synthetic_jordan_orbit(89, 3)
    w = build_line_witness(orbit, J)
    assert (w.k, w.m) == (3, 6)
    N = (J - identity(3)) % 89
    N2 = (N @ N) % 89
    for alpha in range(89):
        total = sum(mat_pow(J, x, 89) for x in w.exponents[alpha]) % 89
        assert np.array_equal(total, (w.m * identity(3) + alpha * N2) % 89)


def test_line_witness_zero_alpha_gives_zero_exponents():
    orbit, J = synthetic_jordan_orbit(89, 3)
    w = build_line_witness(orbit, J)
    assert w.exponents[0] == (0,) * w.m
    assert np.array_equal(w.summands[0].sum(axis=0) % 89, w.base)


def test_binomial_sum_bookkeeping():
    # sum_j C(x_j, i) collapses to m, 0, alpha by degree
    orbit, J = synthetic_jordan_orbit(89, 3)
    w = build_line_witness(orbit, J)
    for alpha in (0, 1, 17, 88):
        xs = w.exponents[alpha]
        assert sum(binom_mod(x, 0, 89) for x in xs) % 89 == w.m % 89
        for i in range(1, w.k - 1):
            assert sum(binom_mod(x, i, 89) for x in xs) % 89 == 0
        assert sum(binom_mod(x, w.k - 1, 89) for x in xs) % 89 == alpha


def test_span_line_basis_rank():
    part = get_partition("sl_2_11")
    G = get_closure("sl_2_11")
    A = find_order_p_element(G, 11)
    cert = span_line(build_line_witness(part.orbits[0], A), G)
    assert rank(cert.basis, 11) == 2
    assert len(cert.element_indices) == 2


def test_decompose_target_base_case():
    part = get_partition("sl_2_11")
    G = get_closure("sl_2_11")
    cert = span_line(build_line_witness(part.orbits[0], find_order_p_element(G, 11)), G)
    w = decompose_target(cert.base_image_sum, cert)
    assert w.verified and w.length == 2 * cert.witness.m
    # all-zero coordinates means both alpha = 0 lists
    assert np.array_equal(
        w.summands,
        np.concatenate(
            [(cert.witness.summands[0] @ g) % 11 for g in cert.translates]
        ),
    )


def test_decompose_target_random_targets():
    part = get_partition("sl_2_11")
    G = get_closure("sl_2_11")
    inst = get_instance("sl_2_11")
    cert = span_line(build_line_witness(part.orbits[0], find_order_p_element(G, 11)), G)
    rng = np.random.default_rng(5)
    member_set = {tuple(v) for v in part.orbits[0].members}
    for _ in range(25):
        target = rng.integers(0, 11, size=2)
        w = decompose_target(target, cert)
        assert w.verified
        assert w.length <= 4 * inst.d**3
        assert np.array_equal(w.summands.sum(axis=0) % 11, target % 11)
        assert all(tuple(s) in member_set for s in w.summands)


def test_decompose_zero_vector():
    part = get_partition("sl_2_11")
    G = get_closure("sl_2_11")
    cert = span_line(build_line_witness(part.orbits[0], find_order_p_element(G, 11)), G)
    w = decompose_target(np.zeros(2, dtype=np.int64), cert)
    assert w.verified and w.length == 2 * cert.witness.m


def test_trivial_decomposition_single_and_empty():
    part = get_partition("wreath3")
    G = get_closure("wreath3")
    orbit = part.orbits[0]
    w = decompose_target_trivial(orbit.representative, orbit, G)
    assert w.verified and w.length == 1
    w0 = decompose_target_trivial(np.zeros(3, dtype=np.int64), orbit, G)
    assert w0.verified and w0.length == 0


def test_trivial_decomposition_all_ones():
    part = get_partition("wreath3")
    G = get_closure("wreath3")
    orbit = part.orbit_of_vector(np.array([1, 0, 0]))
    w = decompose_target_trivial(np.array([1, 1, 1]), orbit, G)
    assert w.verified
    assert w.length == 3  # e1 + e2 + e3, within d(p-1) = 6
    assert {tuple(s) for s in w.summands} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_trivial_decompositions_exhaustive_wreath3():
    part = get_partition("wreath3")
    G = get_closure("wreath3")
    space = part.space
    for orbit in part.orbits:
        cert = trivial_certificate(orbit, G)
        member_set = {tuple(v) for v in orbit.members}
        for idx in range(space.n):
            target = space.decode(idx).astype(np.int64)
            w = decompose_target_trivial(target, orbit, G, cert)
            assert w.verified and w.length <= 3 * 2
            assert all(tuple(s) in member_set for s in w.summands)


def test_certify_trivial_branch():
    res = certify_instance(get_instance("wreath3"))
    assert res.status == "certified" and res.branch == "trivial"
    assert res.max_length <= 6 and res.bound == 9 * 27
    assert res.verified and res.targets_mode == "all"


def test_certify_unipotent_branch():
    res = certify_instance(get_instance("sl_2_37"))
    assert res.status == "certified" and res.branch == "unipotent"
    assert (res.k, res.m) == (2, 1)
    assert res.max_length == 2 and res.branch_bound == 2
    assert res.bound == 9 * 8


def test_certify_not_applicable_for_singer():
    for name in SINGER_CONTROLS:
        res = certify_instance(get_instance(name))
        assert res.status == "not_applicable"
        assert "divisible" in res.reason


def test_certify_rejects_reducible():
    with pytest.raises(ReducibleInstanceError):
        certify_instance(get_instance("c3_perm"))


def test_certify_sample_witnesses_are_verified():
    res = certify_instance(get_instance("sl_2_3"))
    assert res.sample_witnesses
    for w in res.sample_witnesses:
        assert w.verified
        assert np.array_equal(w.summands.sum(axis=0) % 3, w.target)


def test_exact_diameter_bounded_by_witness_length():
    # with exhaustive targets the worst witness dominates the true diameter
    from conftest import get_diameter_report

    for name in ("wreath3", "sl_2_3", "sl_2_5", "gl_2_3"):
        rep = get_diameter_report(name)
        res = certify_instance(
            get_instance(name),
            targets="all",
            closure=get_closure(name),
            partition=get_partition(name),
        )
        assert rep.overall_directed <= res.max_length


def test_certify_seed_determinism():
    inst = get_instance("sl_2_37")
    a = certify_instance(inst, targets="sample", sample_size=50, seed=3)
    b = certify_instance(inst, targets="sample", sample_size=50, seed=3)
    assert a.max_length == b.max_length
    assert [(r.orbit_id, r.max_length) for r in a.rows] == [
        (r.orbit_id, r.max_length) for r in b.rows
    ]


def test_certify_threads_do_not_change_results():
    inst = get_instance("wreath3")
    seq = certify_instance(inst)
    par = certify_instance(inst, threads=2)
    assert seq.max_length == par.max_length
    assert [(r.orbit_id, r.max_length) for r in seq.rows] == [
        (r.orbit_id, r.max_length) for r in par.rows
    ]
