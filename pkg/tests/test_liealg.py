import numpy as np
import pytest

from parasasaki.catalog import quad_ext_algebra, quad_ext_pairing, sl_structure_constants
from parasasaki.liealg import (
    AntisymmetryViolation,
    JacobiViolation,
    NotAutomorphism,
    NotInvolution,
    NotSubalgebra,
    Subspace,
    ad_matrix,
    bracket,
    center_of_subalgebra,
    centralizer,
    commutator_subalgebra,
    direct_sum,
    involution_eigensplit,
    is_invariant_form,
    killing_form,
    realify,
    validate_algebra,
)
from parasasaki.linalg import Q, block_diag, eye, qarray, rank, zeros


def sl2():
    c, labels, _ = sl_structure_constants(2)
    return validate_algebra(c, labels)


def table_algebra(dim, table, labels=None):
    c = zeros(dim, dim, dim)
    for (i, j), out in table.items():
        for k, v in out.items():
            c[i, j, k] = Q(v)
            c[j, i, k] = -Q(v)
    return validate_algebra(c, labels)


def brute_killing(g):
    """trace(ad x o ad y) by explicit loops over basis indices."""
    n = g.dim
    B = zeros(n, n)
    for a in range(n):
        for b in range(n):
            s = Q(0)
            for j in range(n):
                # (ad_a ad_b e_j)_j
                for k in range(n):
                    s += g.c[b, j, k] * g.c[a, k, j]
            B[a, b] = s
    return B


def test_abelian_valid_and_zero_killing():
    g = validate_algebra(zeros(2, 2, 2))
    assert not killing_form(g).any()


def test_sl2_brackets():
    g = sl2()
    h, x, y = (g.e(i) for i in range(3))
    assert list(bracket(g, h, x)) == list(2 * x)
    assert list(bracket(g, h, y)) == list(-2 * y)
    assert list(bracket(g, x, y)) == list(h)
    assert not bracket(g, x + y, x + y).any()


def test_sl2_ad_and_killing():
    g = sl2()
    assert (ad_matrix(g, g.e(0)) == np.diag(qarray([0, 2, -2]))).all()
    assert not ad_matrix(g, zeros(3)).any()
    assert killing_form(g).tolist() == [[8, 0, 0], [0, 0, 4], [0, 4, 0]]
    assert (killing_form(g) == brute_killing(g)).all()


def test_split_basis_killing_is_diag():
    g = table_algebra(3, {(0, 1): {2: 1}, (0, 2): {1: 1}, (1, 2): {0: 1}})
    assert (brute_killing(g) == np.diag(qarray([2, -2, 2]))).all()
    assert (killing_form(g) == brute_killing(g)).all()


def test_antisymmetry_violation():
    c = zeros(2, 2, 2)
    c[0, 1, 0] = Q(1)
    with pytest.raises(AntisymmetryViolation):
        validate_algebra(c)


def test_jacobi_violation_witness():
    c, labels, _ = sl_structure_constants(2)
    c = c.copy()
    c[0, 1, 1] += 1
    c[1, 0, 1] -= 1
    with pytest.raises(JacobiViolation) as info:
        validate_algebra(c, labels)
    i, j, l, k, value = info.value.witness
    assert value != 0
    assert len({i, j, l}) == 3


def test_quad_ext_brackets_and_ad():
    g = quad_ext_algebra(1)
    e1, e2, e3, n1, n2, n3 = (g.e(i) for i in range(6))
    assert list(bracket(g, e1, e2)) == list(e3 + n3)
    adZ = ad_matrix(g, e1 - n1)
    assert list(adZ @ e2) == list(e3)
    assert list(adZ @ e3) == list(e2)
    assert list(adZ @ n2) == list(-n3)
    assert list(adZ @ n3) == list(-n2)


def test_centralizers():
    g = sl2()
    assert centralizer(g, zeros(3)) == Subspace.full(3)
    assert centralizer(g, g.e(0)) == Subspace(3, [g.e(0)])
    d = quad_ext_algebra(1)
    assert centralizer(d, d.e(0) - d.e(3)) == Subspace(6, [d.e(0), d.e(3)])


def test_commutator_and_center():
    g = sl2()
    assert commutator_subalgebra(g, Subspace.full(3)) == Subspace.full(3)
    h = Subspace(3, [g.e(0)])
    assert commutator_subalgebra(g, h).dim == 0
    assert center_of_subalgebra(g, h) == h
    d = quad_ext_algebra(1)
    hd = Subspace(6, [d.e(0), d.e(3)])
    assert center_of_subalgebra(d, hd) == hd
    with pytest.raises(NotSubalgebra):
        commutator_subalgebra(g, Subspace(3, [g.e(1), g.e(2)]))


def test_sl3_block_isotropy_commutator_dim():
    from parasasaki.catalog import gen_sl_real

    s = gen_sl_real(2, 1)
    hh = commutator_subalgebra(s.algebra, s.h)
    assert hh.dim == 3  # sl(2) block, the gl(1) block contributes nothing
    # [h,h] for block-diagonal (A, B): A in sl(2), B in sl(1) = 0
    assert center_of_subalgebra(s.algebra, s.h).dim == 1


def test_eigensplit_examples():
    g = sl2()
    h, n = involution_eigensplit(g, eye(3))
    assert h.dim == 3 and n.dim == 0
    h, n = involution_eigensplit(g, np.diag(qarray([1, -1, -1])))
    assert h == Subspace(3, [g.e(0)])
    assert n == Subspace(3, [g.e(1), g.e(2)])
    d = quad_ext_algebra(2)
    h, n = involution_eigensplit(d, np.diag(qarray([1, -1, -1, 1, -1, -1])))
    assert h == Subspace(6, [d.e(0), d.e(3)])
    assert n == Subspace(6, [d.e(1), d.e(2), d.e(4), d.e(5)])


def test_eigensplit_errors():
    g = sl2()
    with pytest.raises(NotInvolution):
        involution_eigensplit(g, 2 * eye(3))
    with pytest.raises(NotAutomorphism):
        # swapping h with x is an involution of the vector space but not of the algebra
        involution_eigensplit(g, qarray([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))


def test_invariant_forms():
    g = sl2()
    assert is_invariant_form(g, killing_form(g))[0]
    ok, wit = is_invariant_form(g, eye(3))
    assert not ok and wit is not None
    d = quad_ext_algebra(1)
    P = quad_ext_pairing()
    assert is_invariant_form(d, P)[0]
    assert rank(P) == 6
    assert rank(killing_form(d)) < 6


def test_direct_sum():
    g = sl2()
    assert direct_sum([g]).dim == 3
    s = direct_sum([g, g])
    assert s.dim == 6
    for i in range(3):
        for j in range(3, 6):
            assert not bracket(s, s.e(i), s.e(j)).any()
    K = killing_form(g)
    assert (killing_form(s) == block_diag(K, K)).all()


def test_realify_sl2c():
    c, labels, _ = sl_structure_constants(2)
    g, tag = realify(c, None, labels)
    assert g.dim == 6
    assert (tag.endo @ tag.endo == -eye(6)).all()
    assert killing_form(g)[0, 0] == 16


def test_realify_abelian():
    g, tag = realify(zeros(1, 1, 1), None, ["z"])
    assert not g.c.any()
    assert tag.endo.tolist() == [[0, -1], [1, 0]]
