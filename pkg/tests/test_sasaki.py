import pytest

from conftest import structure, system
from parasasaki.linalg import Q, signature
from parasasaki.sasaki import (
    alpha_closed_form,
    compute_alpha,
    eigendistributions,
    select_C_tilde,
    select_k,
    structure_checks,
)
from parasasaki.symmsys import center_data, find_Z
from parasasaki.catalog import DEFAULT_GRID


def test_sl2_structure_values(sl2):
    assert sl2.alpha == Q(1, 4)
    assert sl2.k.dim == 0 and sl2.C is None
    assert list(sl2.C_tilde) == list(find_Z(system("sl2_std")))
    # phi(x) = -x, phi(y) = y, phi(Z) = 0 (columns are images)
    assert sl2.phi.tolist() == [[-1, 0, 0], [0, 1, 0], [0, 0, 0]]
    assert list(sl2.xi) == [0, 0, Q(1, 4)]
    assert list(sl2.eta) == [0, 0, 4]
    assert sl2.g[0, 1] == 4
    assert sl2.xi @ sl2.g @ sl2.xi == 1
    assert sl2.d_eta[0, 1] == 4 == sl2.g_phi[0, 1]
    assert signature(sl2.g) == (2, 1, 0)


def test_sl2_eigendistributions(sl2):
    plus, minus = eigendistributions(sl2)
    assert plus.basis.tolist() == [[0, 1, 0]]
    assert minus.basis.tolist() == [[1, 0, 0]]


def test_quad_ext_eigendistributions(d1):
    plus, minus = eigendistributions(d1)
    # m basis: e2, e3, eta2, eta3, C~
    from parasasaki.liealg import Subspace

    assert plus == Subspace(5, [[1, 1, 0, 0, 0], [0, 0, 1, -1, 0]])
    assert minus == Subspace(5, [[1, -1, 0, 0, 0], [0, 0, 1, 1, 0]])


def test_sl22_k_dimension():
    st = structure("sl_r:2,2")
    assert st.k.dim == 6


def test_sl_c_10_isotropic_direction():
    s = system("sl_c:1,1,1,0")
    cd = center_data(s)
    ksel = select_k(s, cd)
    iZ = s.complex_structure.endo @ cd.Z
    assert (ksel.C == iZ).all()


def test_sl_c_11_C_tilde_and_alpha():
    s = system("sl_c:1,1,1,1")
    cd = center_data(s)
    ksel = select_k(s, cd)
    Ct = select_C_tilde(s, cd, ksel)
    iZ = s.complex_structure.endo @ cd.Z
    assert (Ct == cd.Z - iZ).all()
    B = s.killing
    assert cd.A @ B @ Ct == 2 * (cd.Z @ B @ cd.Z)
    assert compute_alpha(s, cd, Ct) == 1 / (4 * (cd.Z @ B @ cd.Z))


@pytest.mark.parametrize("c", [1, -1, 2])
def test_quad_ext_alpha(c):
    st = structure(f"quad_ext:{c}")
    assert st.alpha == Q(1, 4 * c)
    Z = find_Z(st.system)
    assert st.system.form @ Z @ Z == -2 * c
    assert (st.to_ambient(st.xi) == -Z / (4 * c)).all()


@pytest.mark.parametrize("c", [1, 2])
def test_quad_ext_reeb_sign_is_forced(c):
    """C~ = Z with alpha = 1/(4c) breaks d eta = g(., phi .); C~ = -Z does not."""
    from parasasaki.sasaki import build_structure

    s = system(f"quad_ext:{c}")
    cd = center_data(s)
    ksel = select_k(s, cd)
    st = build_structure(s, cd, ksel, cd.Z, Q(1, 4 * c))
    bad = [r.check_id for r in structure_checks(st) if r.status == "fail"]
    assert "structure.deta" in bad
    st = build_structure(s, cd, ksel, -cd.Z, Q(1, 4 * c))
    assert not [r for r in structure_checks(st) if r.status == "fail"]


def test_quad_ext_signature():
    assert signature(structure("quad_ext:-1").g) == (3, 2, 0)


@pytest.mark.parametrize("p, q", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_alpha_closed_form_sl_real(p, q):
    st = structure(f"sl_r:{p},{q}")
    assert st.alpha == Q(1, 4 * p * q)
    assert alpha_closed_form(st.system, st.center, st.C_tilde) == st.alpha


@pytest.mark.parametrize("spec", DEFAULT_GRID + ["sum:sl2_std+sl_r:2,1"])
@pytest.mark.parametrize("alt", [False, True])
def test_structure_checks_pass(spec, alt):
    st = structure(spec, alt)
    bad = [r for r in structure_checks(st) if r.status == "fail"]
    assert not bad, bad[0]


def test_alt_choice_differs():
    a, b = structure("sl_c:1,1,2,3"), structure("sl_c:1,1,2,3", True)
    assert (a.C_tilde != b.C_tilde).any()
    assert a.alpha != b.alpha


def test_wrong_alpha_fails_only_deta():
    from parasasaki.sasaki import build_structure

    s = system("sl2_std")
    cd = center_data(s)
    ksel = select_k(s, cd)
    Ct = select_C_tilde(s, cd, ksel)
    st = build_structure(s, cd, ksel, Ct, Q(1, 2))
    bad = [r.check_id for r in structure_checks(st) if r.status == "fail"]
    assert bad == ["structure.deta"]


def test_eta_bracket_relation(sl2):
    # [x, y] = h = -2 Z so eta([x,y]_m) = -2 / alpha = -8
    assert sl2.bm[0, 1] @ sl2.eta == -8
