import pytest

from conftest import system
from parasasaki.catalog import gen_sl_complex, gen_sl_real, sl2_std
from parasasaki.linalg import Q, eye, signature
from parasasaki.symmsys import (
    AxiomViolation,
    BothZero,
    CenterDimUnexpected,
    DecompositionFails,
    KillingDegenerate,
    build_f_metric,
    center_data,
    decompose_A,
    find_A,
    find_Z,
    scale_system,
    verify_system,
)


def test_sl2_system_valid():
    s = sl2_std()
    assert s.h.dim == 1 and s.n.dim == 2
    # I(x) = -x, I(y) = y
    assert s.I_on_n.tolist() == [[-1, 0], [0, 1]]


def test_noninvariant_metric_rejected():
    s = sl2_std()
    with pytest.raises(AxiomViolation) as info:
        verify_system(s.algebra, s.sigma, s.I_on_n, eye(2))
    assert "III" in info.value.tags
    assert "IV" in info.value.tags
    tag, witness, message = info.value.violations[0]
    assert tag == "III" and "-2" in message


def test_axiom_I_violation():
    s = sl2_std()
    with pytest.raises(AxiomViolation) as info:
        verify_system(s.algebra, s.sigma, 2 * s.I_on_n, s.inner)
    assert "I" in info.value.tags


def test_find_Z_closed_forms():
    s = sl2_std()
    assert list(find_Z(s)) == [Q(-1, 2), 0, 0]
    s = gen_sl_real(2, 1)
    Z = find_Z(s)
    # diag(-1/3, -1/3, 2/3) in H-coordinates (running sums of the diagonal)
    assert list(Z[:2]) == [Q(-1, 3), Q(-2, 3)]
    assert not Z[2:].any()
    d = system("quad_ext:3")
    assert list(find_Z(d)) == [1, 0, 0, -3, 0, 0]


def test_find_A_and_decompose():
    s = sl2_std()
    Z = find_Z(s)
    A = find_A(s)
    assert (A == Z).all()
    cd = decompose_A(s, A, Z)
    assert cd.lam == 1 and cd.mu is None and cd.center_dim == 1


def test_find_A_scales_with_metric():
    s = gen_sl_real(1, 2, scale=2)
    cd = center_data(s)
    assert (cd.A == 2 * cd.Z).all() and cd.lam == 2


def test_find_A_needs_pairing():
    d = system("quad_ext:1")
    with pytest.raises(KillingDegenerate):
        find_A(d)
    A = find_A(d, d.form)
    assert (A == find_Z(d)).all()


@pytest.mark.parametrize("lam, mu", [(1, 1), (3, 0), (1, 0), (0, 1), (2, 3)])
def test_complex_decomposition_round_trip(lam, mu):
    cd = center_data(gen_sl_complex(1, 1, lam, mu))
    assert (cd.lam, cd.mu) == (lam, mu)
    assert cd.center_dim == 2


def test_A_is_Z_plus_iZ():
    s = gen_sl_complex(1, 1, 1, 1)
    cd = center_data(s)
    assert (cd.A == cd.Z + s.complex_structure.endo @ cd.Z).all()


def test_decompose_rejects_noncentral():
    s = sl2_std()
    with pytest.raises(DecompositionFails):
        decompose_A(s, s.algebra.e(1), find_Z(s))


@pytest.mark.parametrize("lam, mu", [(1, 0), (0, 1), (1, 1)])
def test_f_metric_signature(lam, mu):
    s = gen_sl_complex(1, 1, lam, mu)
    assert signature(s.inner) == (2, 2, 0)


def test_f_metric_both_zero():
    s = gen_sl_complex(1, 1, 1, 0)
    with pytest.raises(BothZero):
        build_f_metric(s.algebra, s.complex_structure, s.n, s.h, 0, 0)


@pytest.mark.parametrize("spec", ["sl_r:1,1", "sl_r:1,2", "sl_r:2,1", "sl_r:2,2", "sl_c:1,1,1,0", "quad_ext:-1"])
def test_B_Z_Z_equals_dim_n(spec):
    s = system(spec)
    Z = find_Z(s)
    assert Z @ s.killing @ Z == s.n.dim


@pytest.mark.parametrize("p, q", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_B_Z_Z_is_2pq(p, q):
    s = system(f"sl_r:{p},{q}")
    Z = find_Z(s)
    assert Z @ s.killing @ Z == 2 * p * q


def test_complex_centre_killing_relations():
    s = gen_sl_complex(1, 1, 2, 3)
    Z = find_Z(s)
    iZ = s.complex_structure.endo @ Z
    B = s.killing
    assert Z @ B @ iZ == 0
    assert iZ @ B @ iZ == -(Z @ B @ Z)


@pytest.mark.parametrize("spec", ["sl_r:2,1", "quad_ext:2", "sl_c:1,1,1,1"])
def test_omega_antisymmetric_and_grading(spec):
    s = system(spec)
    om = s.omega()
    assert (om == -om.T).all()
    g = s.algebra
    for a in s.n.basis:
        for b in s.n.basis:
            assert g.bracket(a, b) in s.h


def test_scale_system():
    s = scale_system(sl2_std(), Q(3))
    assert (s.inner == 3 * sl2_std().inner).all()
    with pytest.raises(ValueError):
        scale_system(sl2_std(), 0)


def test_centre_dim_three_without_blocks_rejected():
    # abelian h of dim 3 cannot occur for simple systems; a direct sum of three
    # sl2 copies without block data has a 3-dim centre and no single lambda when the
    # metrics differ across blocks
    from parasasaki.catalog import gen_direct_sum
    from dataclasses import replace

    parts = [gen_sl_real(1, 1, scale=k) for k in (1, 2, 3)]
    s = gen_direct_sum(parts)
    cd = center_data(s)
    assert cd.block_lambdas == (1, 2, 3)
    with pytest.raises(CenterDimUnexpected):
        decompose_A(replace(s, blocks=None), cd.A, cd.Z)
