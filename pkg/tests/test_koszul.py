"""Slices, Koszul differentials, Betti tables, LES verification."""

import random

import numpy as np
import pytest

from projsyz.fields import DEFAULT_FIELD, QQ
from projsyz.groebner import Ideal
from projsyz.koszul import (
    BettiTable,
    betti_numbers,
    betti_table_text,
    betti_table_tsv,
    build_slice,
    check_mult_commute,
    euler_characteristic_checks,
    koszul_differential,
    reduce_slice,
    verify_les,
)
from projsyz.linalg import ExactMatrix, rank
from projsyz.polyring import RingDescriptor, random_polynomial

R2 = RingDescriptor(("x0", "x1"), DEFAULT_FIELD, "deglex")
R4 = RingDescriptor(("x0", "x1", "x2", "x3"), DEFAULT_FIELD, "deglex")
TC = ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]


def test_slice_dims_examples():
    one_var = Ideal(RingDescriptor(("x0", "x1"), DEFAULT_FIELD), ["x0"])
    sl = build_slice(one_var, 0, None, 4)
    assert sl.dims == [1, 1, 1, 1, 1]

    tc = Ideal(R4, TC)
    sl2 = build_slice(tc, 0, None, 3)
    assert sl2.dims == [1, 4, 7, 10]

    # ideal truncation (x0)_{>=2}: degree-1 piece fattens back to full R_1,
    # higher degrees agree with R/(x0); this realizes the module whose
    # degree-<d generators are the center's power monomials
    sl3 = build_slice(one_var, 0, truncation=2, max_degree=4)
    assert sl3.dims == [1, 2, 1, 1, 1]
    # truncation of the zero ideal is the zero ideal: slice unchanged
    r1 = RingDescriptor(("x0",), DEFAULT_FIELD)
    sl4 = build_slice(Ideal.zero(r1), 0, truncation=2, max_degree=4)
    assert sl4.dims == [1, 1, 1, 1, 1]


def test_mult_matrices_commute():
    tc = Ideal(R4, TC)
    sl = build_slice(tc, 0, None, 4)
    assert check_mult_commute(sl, 0)
    assert check_mult_commute(sl, 2)


def test_differential_shapes_and_complex_property():
    tc = Ideal(R4, TC)
    sl = build_slice(tc, 0, None, 4)
    d23 = koszul_differential(sl, 0, 2, 3)
    assert (d23.rows, d23.cols) == (28, 24)  # (Lambda^1)*M_2=4*7, (Lambda^2)*M_1=6*4

    # d o d = 0 on several spots
    from projsyz.koszul import _differential_dense, _matmul
    wpos = sl.w_positions(0)
    for (i, d) in [(2, 3), (3, 4), (2, 4)]:
        a = _differential_dense(sl, wpos, i - 1, d)
        b = _differential_dense(sl, wpos, i, d)
        prod = _matmul(sl.field, a, b)
        assert not np.any(prod)


def test_rank_one_differential():
    r1 = RingDescriptor(("x0",), DEFAULT_FIELD)
    sl = build_slice(Ideal.zero(r1), 0, None, 2)
    d11 = koszul_differential(sl, 0, 1, 1)
    assert (d11.rows, d11.cols) == (1, 1)
    assert d11.entry(0, 0).value == 1


def test_betti_hypersurface():
    ideal = Ideal(R2, ["x0*x1"])
    b = betti_numbers(ideal, 0, max_i=2, max_d=3)
    assert b.nonzero() == [(0, 0, 1), (1, 2, 1)]


def test_betti_twisted_cubic_with_and_without_reduction():
    tc = Ideal(R4, TC)
    b1 = betti_numbers(tc, 0, max_i=3, max_d=4, reduce=False)
    b2 = betti_numbers(tc, 0, max_i=3, max_d=4, reduce=True)
    expected = {(0, 0): 1, (1, 2): 3, (2, 3): 2}
    assert b1.entries == expected
    assert b2.entries == expected
    assert b2.meta["reductions"] >= 1


def test_betti_over_q_small():
    tc = Ideal(RingDescriptor(("x0", "x1", "x2", "x3"), QQ), TC)
    b = betti_numbers(tc, 0, max_i=2, max_d=3, reduce=False)
    assert b.beta(1, 2) == 3 and b.beta(2, 3) == 2


def test_betti_invariant_under_coordinate_change():
    from projsyz.groebner import change_coordinates
    rng = random.Random(5)
    tc = Ideal(R4, TC)
    while True:
        rows = [[rng.randrange(32003) for _ in range(4)] for _ in range(4)]
        if rank(ExactMatrix.from_dense(rows, DEFAULT_FIELD)) == 4:
            break
    moved = change_coordinates(tc, rows)
    b1 = betti_numbers(tc, 0, max_i=3, max_d=4)
    b2 = betti_numbers(moved, 0, max_i=3, max_d=4)
    assert b1.entries == b2.entries


def test_euler_characteristic_identity():
    tc = Ideal(R4, TC)
    assert euler_characteristic_checks(tc, 4) == [0, 0, 0, 0, 0]
    rng = random.Random(2)
    r3 = RingDescriptor(("x0", "x1", "x2"), DEFAULT_FIELD)
    ideal = Ideal(r3, [random_polynomial(r3, 2, rng) for _ in range(2)])
    assert all(v == 0 for v in euler_characteristic_checks(ideal, 4))


def test_subring_finiteness_note():
    # e_0 not on V(x0): R/(x0) is a finitely generated S_1-module
    ideal = Ideal(R2, ["x0"])
    sl = build_slice(ideal, 1, None, 4)
    assert sl.notes["dims_stabilized"]


def test_betti_table_formats():
    tc = Ideal(R4, TC)
    b = betti_numbers(tc, 0, max_i=3, max_d=4)
    text = betti_table_text(b)
    assert text.splitlines()[0] == "betti ring=R rows=j cols=i"
    assert "." in text
    tsv = betti_table_tsv(b)
    assert "1\t2\t3" in tsv.splitlines()


def test_les_free_module():
    free = Ideal.zero(R4)
    rep = verify_les(free, 0, max_i=3, max_d=3)
    assert rep.exact
    for n in rep.nodes:
        if n.i >= 1:
            assert n.dim == 0


def test_les_twisted_cubic_t0_and_t1():
    tc = Ideal(R4, TC)
    rep = verify_les(tc, 0, max_i=3, max_d=5)
    assert rep.exact
    rep2 = verify_les(tc, 1, max_i=3, max_d=5)
    assert rep2.exact


def test_les_detects_two_linear_delta_isomorphism():
    # for a 2-linear resolution the connecting map is an isomorphism away
    # from the generator degrees: check via reported dims on the cubic
    tc = Ideal(R4, TC)
    b_s1 = betti_numbers(tc, 1, max_i=2, max_d=4)
    # finite module over S_1 after a generic change; here e_0 lies on the
    # curve, so only the exactness (not finiteness) is asserted
    rep = verify_les(tc, 0, max_i=2, max_d=4)
    assert rep.exact


@pytest.mark.slow
def test_scroll_betti_table_matches_eagon_northcott():
    names = tuple(f"x{i}" for i in range(9))
    ring = RingDescriptor(names, DEFAULT_FIELD, "deglex")
    top = [0, 2, 4, 5, 6, 7]
    bot = [1, 3, 5, 6, 7, 8]
    gens = []
    for a in range(6):
        for bcol in range(a + 1, 6):
            t = {}
            for (i, j, s) in [(top[a], bot[bcol], 1), (top[bcol], bot[a], -1)]:
                e = [0] * 9
                e[i] += 1
                e[j] += 1
                t[tuple(e)] = t.get(tuple(e), 0) + s
            gens.append(ring.zero().from_terms(ring, t.items()))
    scroll = Ideal(ring, [g for g in gens if g])
    b = betti_numbers(scroll, 0, max_i=5, max_d=6)
    assert [b.beta(i, i + 1) for i in range(1, 6)] == [15, 40, 45, 24, 5]
    assert sum(b.entries.values()) == 1 + 15 + 40 + 45 + 24 + 5
