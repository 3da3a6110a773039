"""Invariant Levi-Civita connection, curvature and the identity suite.

Index conventions (all in the m-basis, output component last):

* ``Lam[a, b, c]``       component c of Lambda(e_a) e_b
* ``R[a, b, c, d]``      component d of R(e_a, e_b) e_c
* ``nR[x, a, b, c, d]``  component d of (nabla_{e_x} R)(e_a, e_b, e_c)
* ``Ax[x, y, o]``        component o of A_{e_x}(e_y), the derivation endomorphism

Covariant derivatives of invariant tensors at the origin are the derivation
action of ``A_X`` on the tensor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from string import ascii_lowercase

import numpy as np

from .checks import CheckResult, flag_check, passed, tensor_check
from .linalg import Q, eye, first_nonzero, is_zero, qeinsum, rank
from .sasaki import ParaSasakiStructure


class DegenerateMetric(ValueError):
    pass


class CalibrationFailure(RuntimeError):
    pass


class SignCalibrationFailure(CalibrationFailure):
    pass


def levi_civita(bm: np.ndarray, g: np.ndarray, g_inv: np.ndarray | None = None) -> np.ndarray:
    """Koszul: 2 g(Lam(X)Y, W) = g([X,Y],W) - g([Y,W],X) + g([W,X],Y)."""
    N = g.shape[0]
    if rank(g) != N:
        raise DegenerateMetric("metric is degenerate")
    if g_inv is None:
        from .linalg import inverse

        g_inv = inverse(g)
    low = (
        qeinsum("abe,ew->abw", bm, g)
        - qeinsum("bwe,ea->abw", bm, g)
        + qeinsum("wae,eb->abw", bm, g)
    ) / 2
    return qeinsum("abw,wc->abc", low, g_inv)


def nomizu_curvature(Lam: np.ndarray, bm: np.ndarray, kact: np.ndarray, sign: int = 1) -> np.ndarray:
    """R(X,Y)Z = Lam(X)Lam(Y)Z - Lam(Y)Lam(X)Z - Lam([X,Y]_m)Z - [[X,Y]_k, Z]."""
    R = (
        qeinsum("bce,aed->abcd", Lam, Lam)
        - qeinsum("ace,bed->abcd", Lam, Lam)
        - qeinsum("abe,ecd->abcd", bm, Lam)
        - kact
    )
    return R if sign == 1 else -R


def derivation_endo(Lam: np.ndarray, bm: np.ndarray, sign: int = 1) -> np.ndarray:
    """A_X(Y) = Lam(Y)X + sign*[X,Y]_m, as ``Ax[x, y, o]``."""
    return Lam.transpose(1, 0, 2) + sign * bm


def derivation(T: np.ndarray, Ax: np.ndarray, n_in: int, has_out: bool = True) -> np.ndarray:
    """Derivation action of A_X on a tensor with ``n_in`` vector slots.

    Returns an array with a new leading index for X.
    """
    slots = ascii_lowercase[:n_in]  # never contains 'x', 'e', 'o' for n_in <= 4
    out = "o" if has_out else ""
    tin = slots + out
    result = 0
    if has_out:
        result = qeinsum(f"{slots}e,xeo->x{tin}", T, Ax)
    for s in range(n_in):
        replaced = slots[:s] + "e" + slots[s + 1:]
        result = result - qeinsum(f"x{slots[s]}e,{replaced}{out}->x{tin}", Ax, T)
    return result


@dataclass
class ConnectionData:
    st: ParaSasakiStructure
    Lam: np.ndarray
    Ax: np.ndarray
    R: np.ndarray
    nR: np.ndarray
    deriv_sign: int
    curv_sign: int
    calibration: dict = field(default_factory=dict)


def _nabla_xi_residual(st: ParaSasakiStructure, Ax):
    return qeinsum("y,xyo->xo", st.xi, Ax) + st.phi_t


def _r_xi_residual(st: ParaSasakiStructure, R):
    N = st.dim
    d = eye(N)
    return qeinsum("abcd,c->abd", R, st.xi) - (
        qeinsum("a,bd->abd", st.eta, d) - qeinsum("b,ad->abd", st.eta, d)
    )


def compute_connection(st: ParaSasakiStructure, strict: bool = False) -> ConnectionData:
    """Lambda, the calibrated derivation endomorphisms, R and nabla R.

    With ``strict`` a failed calibration raises instead of being recorded.
    """
    Lam = levi_civita(st.bm, st.g, st.g_inv)
    calib = {}
    deriv_sign = None
    for s in (1, -1):
        if is_zero(_nabla_xi_residual(st, derivation_endo(Lam, st.bm, s))):
            deriv_sign = s
            break
    if deriv_sign is None and strict:
        raise CalibrationFailure("nabla xi = -phi fails for both derivation signs")
    calib["derivation"] = {1: "Lam(Y)X + [X,Y]_m", -1: "Lam(Y)X - [X,Y]_m", None: "failed"}[deriv_sign]
    Ax = derivation_endo(Lam, st.bm, deriv_sign or 1)

    curv_sign = None
    R = nomizu_curvature(Lam, st.bm, st.kact)
    for s in (1, -1):
        if is_zero(_r_xi_residual(st, s * R)):
            curv_sign = s
            break
    if curv_sign is None and strict:
        raise SignCalibrationFailure("R(X,Y)xi = eta(X)Y - eta(Y)X fails for both signs")
    calib["curvature"] = {1: "Nomizu", -1: "negated Nomizu", None: "failed"}[curv_sign]
    R = R if (curv_sign or 1) == 1 else -R
    nR = derivation(R, Ax, 3)
    return ConnectionData(st, Lam, Ax, R, nR, deriv_sign or 1, curv_sign or 1, calib)


def difference_tensor(st: ParaSasakiStructure) -> np.ndarray:
    """A(X,Y) = eta(X) phi Y + eta(Y) phi X + d eta(X,Y) xi, as ``At[a, b, c]``."""
    P = st.phi_t
    return (
        qeinsum("a,bc->abc", st.eta, P)
        + qeinsum("b,ac->abc", st.eta, P)
        + qeinsum("ab,c->abc", st.d_eta, st.xi)
    )


def nijenhuis_phi(st: ParaSasakiStructure, D: np.ndarray) -> np.ndarray:
    """N_phi(X,Y) from (nabla phi), given as ``D[x, y, o]`` = ((nabla_x phi) y)_o."""
    P = st.phi_t
    return (
        qeinsum("xp,pyo->xyo", P, D)
        - qeinsum("yp,pxo->xyo", P, D)
        + qeinsum("yxe,eo->xyo", D, P)
        - qeinsum("xye,eo->xyo", D, P)
    )


def phi_symmetry_iv_rhs(st: ParaSasakiStructure, R: np.ndarray) -> np.ndarray:
    """Right-hand side of the full covariant-derivative formula, ``[x,y,z,w,d]``."""
    G, P, gp, eta, xi = st.g, st.phi_t, st.g_phi, st.eta, st.xi
    d = eye(st.dim)
    coeff = (
        qeinsum("xy,wz->xyzw", G, gp)
        - qeinsum("xz,wy->xyzw", G, gp)
        - qeinsum("yzxf,wf->xyzw", R, gp)
    )
    t1 = qeinsum("xyzw,o->xyzwo", coeff, xi)
    t2 = qeinsum("y,xzwo->xyzwo", eta, (
        -qeinsum("wx,zo->xzwo", gp, d)
        + qeinsum("wz,xo->xzwo", G, P)
        - qeinsum("xp,zpwo->xzwo", P, R)
    ))
    t3 = qeinsum("z,xywo->xyzwo", eta, (
        qeinsum("wx,yo->xywo", gp, d)
        - qeinsum("wy,xo->xywo", G, P)
        + qeinsum("xp,ypwo->xywo", P, R)
    ))
    t4 = qeinsum("w,xyzo->xyzwo", eta, (
        qeinsum("zx,yo->xyzo", gp, d)
        - qeinsum("yx,zo->xyzo", gp, d)
        + qeinsum("xp,yzpo->xyzo", P, R)
    ))
    return t1 + t2 + t3 + t4


def connection_checks(st: ParaSasakiStructure):
    """Run the connection and curvature identity suite.

    Returns ``(ConnectionData, list of CheckResult)``.
    """
    cd = compute_connection(st)
    Lam, Ax, R, nR = cd.Lam, cd.Ax, cd.R, cd.nR
    N = st.dim
    H = st.horizontal
    G, P, gp, eta, xi, bm = st.g, st.phi_t, st.g_phi, st.eta, st.xi, st.bm
    d = eye(N)
    lab = st.labels
    out: list[CheckResult] = []

    def add(cid, res, names, n_lead=None, note=None):
        r = tensor_check(cid, res, lab, n_lead=n_lead, names=names, note=note)
        out.append(r)
        return r

    add("connection.torsion_free", Lam - Lam.transpose(1, 0, 2) - bm, ("X", "Y"), 2)
    add("connection.metric",
        qeinsum("xye,ew->xyw", Lam, G) + qeinsum("xwe,ye->xyw", Lam, G), ("X", "Y", "W"))
    add("connection.nabla_g", derivation(G, Ax, 2, has_out=False), ("X", "Y", "W"))

    calib_ok = "failed" not in cd.calibration.values()
    out.append(flag_check(
        "connection.calibration", calib_ok, {"calibration": dict(cd.calibration)},
        note="; ".join(f"{k}: {v}" for k, v in cd.calibration.items()),
    ))

    add("connection.R_antisym", R + R.transpose(1, 0, 2, 3), ("X", "Y", "Z"), 3)
    add("connection.R_bianchi",
        R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3), ("X", "Y", "Z"), 3)
    add("connection.R_gskew",
        qeinsum("xyze,ew->xyzw", R, G) + qeinsum("xywe,ez->xyzw", R, G), ("X", "Y", "Z", "W"))

    add("connection.nabla_xi", _nabla_xi_residual(st, Ax), ("X",), 1)
    D = derivation(P, Ax, 1)
    rhs_phi = -qeinsum("xy,o->xyo", G, xi) + qeinsum("y,xo->xyo", eta, d)
    r_nabla_phi = add("connection.nabla_phi", D - rhs_phi, ("X", "Y"), 2)
    add("connection.R_xi", _r_xi_residual(st, R), ("X", "Y"), 2)
    add("connection.R_xi2",
        qeinsum("xbyd,b->xyd", R, xi)
        - (qeinsum("xy,d->xyd", G, xi) - qeinsum("y,xd->xyd", eta, d)),
        ("X", "Y"), 2)
    add("connection.R_phi",
        qeinsum("xp,pyzd->xyzd", P, R)
        + qeinsum("yp,xpzd->xyzd", P, R)
        + qeinsum("xz,yd->xyzd", gp, d)
        + qeinsum("zy,xd->xyzd", gp, d)
        - qeinsum("zx,yd->xyzd", G, P)
        + qeinsum("zy,xd->xyzd", G, P),
        ("X", "Y", "Z"), 3)

    # three double identities for nabla R with one slot on xi
    L1 = qeinsum("vxycd,c->vxyd", nR, xi)
    L1a = (qeinsum("yv,xd->vxyd", gp, d) - qeinsum("xv,yd->vxyd", gp, d)
           + qeinsum("vp,xypd->vxyd", P, R))
    L1b = (qeinsum("yv,xd->vxyd", G, P) - qeinsum("xv,yd->vxyd", G, P)
           + qeinsum("xyve,ed->vxyd", R, P))
    L2 = qeinsum("vxbyd,b->vxyd", nR, xi)
    L2a = (qeinsum("yx,vd->vxyd", gp, d) - qeinsum("vy,xd->vxyd", G, P)
           - qeinsum("xp,pvyd->vxyd", P, R))
    L2b = (qeinsum("yv,xd->vxyd", gp, d) - qeinsum("xy,vd->vxyd", G, P)
           + qeinsum("vp,xpyd->vxyd", P, R))
    L3 = qeinsum("vaxyd,a->vxyd", nR, xi)
    # R-term sign here is the one forced by antisymmetry from L2b
    L3a = (qeinsum("yx,vd->vxyd", G, P) - qeinsum("yv,xd->vxyd", gp, d)
           + qeinsum("vp,pxyd->vxyd", P, R))
    L3b = (-qeinsum("yx,vd->vxyd", gp, d) + qeinsum("vy,xd->vxyd", G, P)
           - qeinsum("xp,vpyd->vxyd", P, R))
    names = ("V", "X", "Y")
    add("connection.nablaR_xi_first", L1 - L1a, names, 3)
    add("connection.nablaR_xi_second", L1 - L1b, names, 3)
    add("connection.nablaR_mid_xi_first", L2 - L2a, names, 3)
    add("connection.nablaR_mid_xi_second", L2 - L2b, names, 3)
    add("connection.nablaR_xi_front_first", L3 - L3a, names, 3)
    add("connection.nablaR_xi_front_second", L3 - L3b, names, 3)

    two_deta_xi = 2 * qeinsum("xy,o->xyo", st.d_eta, xi)
    r_nij = add("connection.nijenhuis", nijenhuis_phi(st, D) - two_deta_xi, ("X", "Y"), 2)
    substituted = nijenhuis_phi(st, rhs_phi) - two_deta_xi
    implied = (not r_nabla_phi.ok) or (is_zero(substituted) and r_nij.ok)
    out.append(flag_check(
        "connection.nijenhuis_implied", implied,
        {"nabla_phi": r_nabla_phi.status, "nijenhuis": r_nij.status},
    ))

    add("connection.eta_R_horizontal", qeinsum("xyzd,d->xyz", R[H, H, H], eta), ("X", "Y", "Z"))
    add("connection.nabla_xi_R", qeinsum("v,vxyzd->xyzd", xi, nR)[H, H, H], ("X", "Y", "Z"), 3)

    phi2 = P @ P
    r3 = add("connection.phi_sym_iii",
             qeinsum("xyzwe,ed->xyzwd", nR[H, H, H, H], phi2), ("X", "Y", "Z", "W"), 4)
    r4 = add("connection.phi_sym_iv", nR - phi_symmetry_iv_rhs(st, R), ("X", "Y", "Z", "W"), 4)

    At = difference_tensor(st)
    Tt = At - At.transpose(1, 0, 2)
    add("connection.tilde_torsion", (Tt - two_deta_xi)[H, H], ("X", "Y"), 2)
    At_x = Ax + At
    parallel = [
        derivation(P, At_x, 1),
        derivation(xi, At_x, 0),
        derivation(eta, At_x, 1, has_out=False),
        derivation(G, At_x, 2, has_out=False),
    ]
    hit = next(((name, first_nonzero(t)) for name, t in zip(("phi", "xi", "eta", "g"), parallel)
                if first_nonzero(t) is not None), None)
    out.append(flag_check(
        "connection.tilde_parallel", hit is None,
        None if hit is None else {"tensor": hit[0], "index": [lab[i] for i in hit[1]]},
    ))
    Rt = (
        R
        - qeinsum("yze,xed->xyzd", At, At)
        + qeinsum("xze,yed->xyzd", At, At)
        + qeinsum("xye,ezd->xyzd", At, At)
        - qeinsum("yxe,ezd->xyzd", At, At)
    )
    Rt_nomizu = nomizu_curvature(Lam + At, bm, st.kact, cd.curv_sign)
    nRt = nR + derivation(R, At, 3)
    nRt_direct = derivation(Rt_nomizu, At_x, 3)
    routes = add("connection.tilde_curvature_routes", Rt - Rt_nomizu, ("X", "Y", "Z"), 3)
    if routes.ok:
        add("connection.tilde_nabla_routes", nRt - nRt_direct, ("V", "X", "Y", "Z"), 4)
    else:
        out.append(flag_check("connection.tilde_nabla_routes", False,
                              {"detail": "curvature routes already disagree"}))
    r5 = add("connection.phi_sym_v", nRt, ("V", "X", "Y", "Z"), 4)

    s = np.array([Q(-1)] * (N - 1) + [Q(1)], dtype=object)
    sT = qeinsum("a,b,c,abc->abc", s, s, s, Tt)
    sR = qeinsum("a,b,c,d,abcd->abcd", s, s, s, s, Rt)
    hitT = first_nonzero(Tt - sT)
    hitR = first_nonzero(Rt - sR)
    out.append(flag_check(
        "connection.tilde_symmetry", hitT is None and hitR is None,
        {"T": None if hitT is None else [lab[i] for i in hitT],
         "R": None if hitR is None else [lab[i] for i in hitR]},
    ))

    verdicts = {"iii": r3.ok, "iv": r4.ok, "v": r5.ok}
    out.append(flag_check(
        "connection.phi_sym_coherence", len(set(verdicts.values())) == 1, {"verdicts": verdicts},
        note=f"iii={r3.status}, iv={r4.status}, v={r5.status}",
    ))
    out.append(local_symmetry_test(st, cd))
    return cd, out


def sectional_curvatures(st: ParaSasakiStructure, R: np.ndarray):
    """K on basis planes with nonzero denominator; degenerate planes are listed."""
    G = st.g
    vals, skipped = {}, []
    for i in range(st.dim):
        for j in range(i + 1, st.dim):
            den = G[i, i] * G[j, j] - G[i, j] ** 2
            if den == 0:
                skipped.append((i, j))
                continue
            num = sum(R[i, j, j, e] * G[e, i] for e in range(st.dim))
            vals[(i, j)] = num / den
    return vals, skipped


def local_symmetry_test(st: ParaSasakiStructure, cd: ConnectionData) -> CheckResult:
    """Locally symmetric structures must have constant curvature -1."""
    hit = first_nonzero(cd.nR)
    lab = st.labels
    if hit is not None:
        tup = [lab[i] for i in hit[:4]]
        return passed("connection.local_symmetry",
                      note=f"not locally symmetric: nabla R != 0 at {tup}")
    vals, skipped = sectional_curvatures(st, cd.R)
    bad = [(k, v) for k, v in vals.items() if v != -1]
    if bad:
        (i, j), v = bad[0]
        return flag_check("connection.local_symmetry", False,
                          {"plane": [lab[i], lab[j]], "K": str(v),
                           "detail": "nabla R = 0 but sectional curvature != -1"})
    return passed("connection.local_symmetry",
                  note=f"locally symmetric, K = -1 on {len(vals)} planes, {len(skipped)} degenerate skipped")


__all__ = [
    "DegenerateMetric",
    "CalibrationFailure",
    "SignCalibrationFailure",
    "ConnectionData",
    "levi_civita",
    "nomizu_curvature",
    "derivation_endo",
    "derivation",
    "compute_connection",
    "difference_tensor",
    "nijenhuis_phi",
    "phi_symmetry_iv_rhs",
    "connection_checks",
    "sectional_curvatures",
    "local_symmetry_test",
]
