"""The base of the fibration at the origin: (n, I, g_bar) and its curvature.

Horizontal lifts are the identity in the m-model: the first ``dim n`` basis
vectors of m are the basis of n, so base tensors are slices of total-space
tensors followed by a projection that drops the xi component.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import CheckResult, flag_check, tensor_check
from .connection import ConnectionData, derivation, derivation_endo, levi_civita
from .linalg import eye, first_nonzero, is_zero, kernel, qeinsum, rank, to_strings
from .sasaki import ParaSasakiStructure


class MismatchError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class BaseStructure:
    I_t: np.ndarray      # I_t[a, b] = component b of I(e_a)
    g_bar: np.ndarray
    omega: np.ndarray    # Omega(X, Y) = g_bar(X, IY)
    bn: np.ndarray       # n-projected brackets of n, (n, n, n)
    labels: tuple

    @property
    def dim(self) -> int:
        return self.g_bar.shape[0]

    @property
    def I(self) -> np.ndarray:
        return self.I_t.T.copy()


def base_structure(st: ParaSasakiStructure) -> BaseStructure:
    H = st.horizontal
    I_t = st.phi_t[H, H].copy()
    g_bar = st.g[H, H].copy()
    return BaseStructure(
        I_t=I_t,
        g_bar=g_bar,
        omega=g_bar @ I_t.T,
        bn=st.bm[H, H, H].copy(),
        labels=st.labels[:-1],
    )


def _require(a, b, what: str, check: bool):
    if check and not is_zero(a - b):
        raise MismatchError(f"{what}: the two computations disagree")


def base_connection(st: ParaSasakiStructure, cd: ConnectionData, check: bool = True):
    """Base Levi-Civita map computed two ways.

    (a) Koszul on (n, g_bar) with n-projected brackets;
    (b) the phi^2-projection of the total-space Lambda on horizontal pairs.
    Returns ``(a, b_full)`` where ``b_full`` still carries the xi component.
    """
    base = base_structure(st)
    H = st.horizontal
    a = levi_civita(base.bn, base.g_bar)
    phi2 = st.phi_t @ st.phi_t
    b_full = qeinsum("abe,ed->abd", cd.Lam[H, H], phi2)
    _require(a, b_full[..., H], "base connection", check)
    return a, b_full


def _bracket_h_action(st: ParaSasakiStructure) -> np.ndarray:
    """n-components of [[X,Y]_h, Z] for X, Y, Z in n, as ``[x, y, z, d]``."""
    system = st.system
    g = system.algebra
    nb = system.n.basis
    full = qeinsum("ai,bj,ijk->abk", nb, nb, g.c)
    hpart = (full + qeinsum("abk,lk->abl", full, system.sigma)) / 2
    act = qeinsum("abi,cj,ijk->abck", hpart, nb, g.c)
    return act[..., list(system.n.pivots)]


def base_curvature(st: ParaSasakiStructure, cd: ConnectionData, check: bool = True):
    """Base curvature computed two ways plus the phi^2-wrapped generic form.

    Way 1: R_bar(X,Y)Z = -[[X,Y]_h, Z] (sign matched to the total-space calibration).
    Way 2: R(X,Y)Z + g(Z,phiY)phiX - g(Z,phiX)phiY - 2g(phiX,Y)phiZ on horizontal X, Y, Z.
    Returns ``(way1, way2_full, generic_full)``; the full arrays keep the xi component.
    """
    H = st.horizontal
    P, gp = st.phi_t, st.g_phi
    way1 = -cd.curv_sign * _bracket_h_action(st)
    Rh = cd.R[H, H, H]
    Ph = P[H]
    gph = gp[H, H]
    way2 = (
        Rh
        + qeinsum("zy,xd->xyzd", gph, Ph)
        - qeinsum("zx,yd->xyzd", gph, Ph)
        - 2 * qeinsum("yx,zd->xyzd", gph, Ph)
    )
    generic = qeinsum("xyze,ed->xyzd", way2, P @ P)
    _require(way1, way2[..., H], "base curvature", check)
    return way1, way2, generic


def base_nabla_curvature(st: ParaSasakiStructure, cd: ConnectionData, R_bar: np.ndarray):
    """nabla_bar R_bar by the derivation action of the base connection."""
    base = base_structure(st)
    Lbar = levi_civita(base.bn, base.g_bar)
    Abar = derivation_endo(Lbar, base.bn, cd.deriv_sign)
    return derivation(R_bar, Abar, 3)


def base_integrability(base: BaseStructure) -> np.ndarray:
    """N_I(X,Y) = [IX,IY]_n + I^2[X,Y]_n - I[IX,Y]_n - I[X,IY]_n."""
    It, bn = base.I_t, base.bn
    return (
        qeinsum("xp,yq,pqo->xyo", It, It, bn)
        + qeinsum("xye,eo->xyo", bn, It @ It)
        - qeinsum("xp,pye,eo->xyo", It, bn, It)
        - qeinsum("yq,xqe,eo->xyo", It, bn, It)
    )


def fibration_checks(st: ParaSasakiStructure, cd: ConnectionData) -> list[CheckResult]:
    base = base_structure(st)
    H = st.horizontal
    n = base.dim
    lab = base.labels
    tlab = st.labels
    It, gb, Om, bn = base.I_t, base.g_bar, base.omega, base.bn
    idn = eye(n)
    out: list[CheckResult] = []

    def add(cid, res, names, n_lead=None, labels=lab):
        r = tensor_check(cid, res, labels, n_lead=n_lead, names=names)
        out.append(r)
        return r

    # almost para-complex structure with a para-Hermitian metric
    plus = kernel(It.T - idn)
    minus = kernel(It.T + idn)
    struct_hit = first_nonzero(It @ It - idn)
    herm = qeinsum("xa,yb,ab->xy", It, It, gb) + gb
    herm_hit = first_nonzero(herm)
    out.append(flag_check(
        "fibration.base_structure",
        struct_hit is None and len(plus) == len(minus) == n // 2 and herm_hit is None,
        {"I2": None if struct_hit is None else [lab[i] for i in struct_hit],
         "eigen_dims": [len(plus), len(minus)],
         "g_bar(IX,IY)+g_bar(X,Y)": None if herm_hit is None else [lab[i] for i in herm_hit]},
    ))

    d_omega = (
        qeinsum("xye,ez->xyz", bn, Om)
        + qeinsum("yze,ex->xyz", bn, Om)
        + qeinsum("zxe,ey->xyz", bn, Om)
    )
    lag = [qeinsum("ia,ab,jb->ij", V, Om, V) for V in (plus, minus) if len(V)]
    omega_ok = (
        is_zero(Om + Om.T)
        and rank(Om) == n
        and is_zero(d_omega)
        and all(is_zero(x) for x in lag)
    )
    out.append(flag_check(
        "fibration.omega", omega_ok,
        {"antisymmetric": is_zero(Om + Om.T), "rank": rank(Om), "closed": is_zero(d_omega),
         "lagrangian": all(is_zero(x) for x in lag)},
    ))

    phi2 = st.phi_t @ st.phi_t
    Lh = cd.Lam[H, H]
    lift_res = Lh + qeinsum("ab,c->abc", st.d_eta[H, H], st.xi) - qeinsum("abe,ed->abd", Lh, phi2)
    add("fibration.connection_lift", lift_res, ("X", "Y"), 2, labels=tlab)

    a, b_full = base_connection(st, cd, check=False)
    add("fibration.base_connection",
        np.concatenate([a - b_full[..., H], b_full[..., -1:]], axis=-1), ("X", "Y"), 2)

    way1, way2, generic = base_curvature(st, cd, check=False)
    add("fibration.base_curvature",
        np.concatenate([way1 - way2[..., H], way2[..., -1:]], axis=-1), ("X", "Y", "Z"), 3)
    add("fibration.base_curvature_generic", generic - way2, ("X", "Y", "Z"), 3)

    low = qeinsum("xyze,ew->xyzw", way1, gb)
    riemann = [
        low + low.transpose(1, 0, 2, 3),
        low + low.transpose(0, 1, 3, 2),
        low - low.transpose(2, 3, 0, 1),
        way1 + way1.transpose(1, 2, 0, 3) + way1.transpose(2, 0, 1, 3),
    ]
    hits = [first_nonzero(t) for t in riemann]
    out.append(flag_check(
        "fibration.base_riemann", all(h is None for h in hits),
        {name: (None if h is None else [lab[i] for i in h])
         for name, h in zip(("antisym_xy", "antisym_zw", "pair", "bianchi"), hits)},
    ))

    nRbar = base_nabla_curvature(st, cd, way1)
    projected = qeinsum("xyzwe,ed->xyzwd", cd.nR[H, H, H, H], phi2)
    sym_res = np.concatenate([nRbar, projected], axis=-1)
    add("fibration.base_symmetric", sym_res, ("X", "Y", "Z", "W"), 4)

    add("fibration.integrability", base_integrability(base), ("X", "Y"), 2)

    # s_bar = -id acts by (-1)^(valence)
    parity = {
        "I": (It, 2), "g_bar": (gb, 2), "R_bar": (way1, 4),
    }
    bad = []
    for name, (T, valence) in parity.items():
        s = -idn
        moved = T
        for axis in range(T.ndim):
            moved = np.moveaxis(qeinsum("ij,j...->i...", s, np.moveaxis(moved, axis, 0)), 0, axis)
        if not is_zero(moved - T):
            bad.append(name)
    out.append(flag_check("fibration.base_parity", not bad, {"tensors": bad}))
    return out


def base_report(st: ParaSasakiStructure, cd: ConnectionData) -> dict:
    base = base_structure(st)
    way1, _, _ = base_curvature(st, cd, check=False)
    return {
        "basis": list(base.labels),
        "I": {"index_order": "[a][b] = component b of I(e_a)", "data": to_strings(base.I_t)},
        "g_bar": {"index_order": "[a][b]", "data": to_strings(base.g_bar)},
        "Omega": {"index_order": "[a][b] = g_bar(e_a, I e_b)", "data": to_strings(base.omega)},
        "R_bar": {"index_order": "[x][y][z][d] = component d of R_bar(e_x, e_y) e_z",
                  "data": to_strings(way1)},
    }


__all__ = [
    "MismatchError",
    "BaseStructure",
    "base_structure",
    "base_connection",
    "base_curvature",
    "base_nabla_curvature",
    "base_integrability",
    "fibration_checks",
    "base_report",
]
