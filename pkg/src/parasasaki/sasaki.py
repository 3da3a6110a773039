"""The para-contact metric structure on m = n + R*C~ built from a symmetric system.

Tensors on m are expressed in the ordered basis (echelon basis of n, C~).
The structure endomorphism ``phi`` is stored as a matrix acting on column
vectors; ``phi_t[i, o]`` is component ``o`` of ``phi(e_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .checks import CheckResult, flag_check, not_applicable, tensor_check
from .liealg import Subspace, ad_matrix, center_of_subalgebra, commutator_subalgebra
from .linalg import (
    Q,
    eye,
    first_nonzero,
    inverse,
    is_zero,
    kernel,
    qeinsum,
    rank,
    signature,
    zeros,
)
from .symmsys import CenterData, SymmetricSystem


class ConstructionError(Exception):
    pass


class NoIsotropicDirection(ConstructionError):
    pass


class NoTransverseDirection(ConstructionError):
    pass


class ReductiveSplitFails(ConstructionError):
    pass


@dataclass(frozen=True, eq=False)
class KSelection:
    k: Subspace
    C: Optional[np.ndarray]
    C_space: Subspace


@dataclass(frozen=True, eq=False)
class ParaSasakiStructure:
    system: SymmetricSystem
    center: CenterData
    k: Subspace
    C: Optional[np.ndarray]
    C_space: Subspace
    C_tilde: np.ndarray
    alpha: object
    m_basis: np.ndarray        # (N, d) ambient vectors
    m_coords: np.ndarray       # (d, N) ambient -> m coordinates along k
    k_coords: np.ndarray       # (d, dim k)
    phi: np.ndarray            # (N, N)
    xi: np.ndarray
    eta: np.ndarray
    g: np.ndarray
    bm: np.ndarray             # [X,Y]_m components, (N, N, N)
    kpart: np.ndarray          # [X,Y]_k as ambient vectors, (N, N, d)
    kact: np.ndarray           # m-components of [[X,Y]_k, W], (N, N, N, N)
    form_used: str
    labels: tuple

    @property
    def dim(self) -> int:
        return self.m_basis.shape[0]

    @property
    def horizontal(self) -> slice:
        return slice(0, self.dim - 1)

    @cached_property
    def phi_t(self) -> np.ndarray:
        return self.phi.T.copy()

    @cached_property
    def g_inv(self) -> np.ndarray:
        return inverse(self.g)

    @cached_property
    def d_eta(self) -> np.ndarray:
        """d eta(X, Y) = -1/2 eta([X, Y]_m)."""
        return -qeinsum("abc,c->ab", self.bm, self.eta) / 2

    @cached_property
    def g_phi(self) -> np.ndarray:
        """g(e_a, phi e_b)."""
        return self.g @ self.phi

    def to_ambient(self, v) -> np.ndarray:
        return np.asarray(v, dtype=object) @ self.m_basis


def _normalize(v: np.ndarray) -> np.ndarray:
    idx = first_nonzero(v)
    return v / v[idx] if idx is not None else v


def select_k(system: SymmetricSystem, cd: CenterData) -> KSelection:
    """k = [h,h] + {C in z(h) : F(A, C) = 0}; one dimension less than h."""
    g, h = system.algebra, system.h
    F = system.ambient_form
    hh = commutator_subalgebra(g, h)
    z = center_of_subalgebra(g, h)
    row = (cd.A @ F @ z.basis.T).reshape(1, -1)
    T = kernel(row)
    C_space = Subspace(g.dim, T @ z.basis if T.shape[0] else ())
    if C_space.dim == z.dim:
        raise NoTransverseDirection("F(A, .) vanishes on the centre of h")
    k = hh + C_space
    if k.dim != h.dim - 1:
        raise NoIsotropicDirection(f"dim k = {k.dim}, expected {h.dim - 1}")
    C = None
    tag = system.complex_structure
    if tag is not None and cd.mu is not None:
        C = cd.mu * cd.Z + cd.lam * (tag.endo @ cd.Z)
        if C not in C_space:
            raise NoIsotropicDirection("mu Z + lambda iZ is not F(A, .)-isotropic")
    elif C_space.dim:
        C = _normalize(C_space.basis[0].copy())
    return KSelection(k, C, C_space)


def _admissible(system, cd, ksel: KSelection, v) -> bool:
    F = system.ambient_form
    z = center_of_subalgebra(system.algebra, system.h)
    return v in z and cd.A @ F @ v != 0 and v not in ksel.k


def select_C_tilde(system: SymmetricSystem, cd: CenterData, ksel: KSelection, alt: bool = False):
    """A transverse central element C~ with F(A, C~) != 0.

    Canonical choices: Z when the centre is a line; (lam Z - mu iZ)/s with
    s the first nonzero of (lam, mu) when a complex structure is present;
    -Z for the invariant-pairing flavour.  ``alt`` selects a second
    admissible element (2 C~, plus C when C exists).
    """
    Z = cd.Z
    tag = system.complex_structure
    candidates = []
    if tag is not None and cd.mu is not None:
        s = cd.lam if cd.lam != 0 else cd.mu
        candidates.append((cd.lam * Z - cd.mu * (tag.endo @ Z)) / s)
    elif system.flavor == "InvariantPairing":
        candidates.append(-Z)
    candidates.append(Z)
    if tag is not None:
        candidates.append(tag.endo @ Z)
    candidates.extend(center_of_subalgebra(system.algebra, system.h).basis)
    for v in candidates:
        if _admissible(system, cd, ksel, v):
            if alt:
                w = 2 * v + (ksel.C if ksel.C is not None else 0)
                if not _admissible(system, cd, ksel, w):
                    raise NoTransverseDirection("alternate choice is not admissible")
                return w
            return v
    raise NoTransverseDirection("no admissible complement of k in h")


def compute_alpha(system: SymmetricSystem, cd: CenterData, C_tilde) -> object:
    """alpha = 1 / (2 F(A, C~))."""
    val = cd.A @ system.ambient_form @ C_tilde
    if val == 0:
        raise ZeroDivisionError("F(A, C~) = 0: upstream selection is inconsistent")
    return Q(1) / (2 * val)


def alpha_closed_form(system: SymmetricSystem, cd: CenterData, C_tilde):
    """1/(2 lam dim n) when the centre is a line and C~ = Z, else None."""
    if cd.center_dim == 1 and cd.lam is not None and is_zero(C_tilde - cd.Z):
        return Q(1) / (2 * cd.lam * system.n.dim)
    return None


def build_structure(
    system: SymmetricSystem,
    cd: CenterData,
    ksel: KSelection,
    C_tilde,
    alpha,
) -> ParaSasakiStructure:
    g = system.algebra
    n, k = system.n, ksel.k
    N = n.dim + 1
    m_basis = np.concatenate([n.basis, np.asarray(C_tilde, dtype=object).reshape(1, -1)])
    P = np.concatenate([m_basis, k.basis])
    if P.shape[0] != g.dim or rank(P) != g.dim:
        raise ReductiveSplitFails("m and k do not span g as a direct sum")
    Pinv = inverse(P)
    m_coords = Pinv[:, :N]
    k_coords = Pinv[:, N:]

    kk = qeinsum("pi,qj,ijk->pqk", k.basis, k.basis, g.c)
    if k.dim and not is_zero(qeinsum("pqk,kr->pqr", kk, m_coords)):
        raise ReductiveSplitFails("k is not a subalgebra")
    km = qeinsum("pi,qj,ijk->pqk", k.basis, m_basis, g.c)
    if k.dim and not is_zero(qeinsum("pqk,kr->pqr", km, k_coords)):
        raise ReductiveSplitFails("[k, m] is not contained in m")

    full = qeinsum("ai,bj,ijk->abk", m_basis, m_basis, g.c)
    bm = qeinsum("abk,kr->abr", full, m_coords)
    kpart = qeinsum("abk,kr,rl->abl", full, k_coords, k.basis) if k.dim else zeros(N, N, g.dim)
    kact = qeinsum("abi,cj,ijk,kr->abcr", kpart, m_basis, g.c, m_coords)

    adZ = ad_matrix(g, cd.Z)
    img = m_basis @ adZ.T                    # rows: ad_Z(m_a)
    if not is_zero(img @ k_coords):
        raise ReductiveSplitFails("ad_Z does not preserve m")
    phi = (img @ m_coords).T                 # column convention

    alpha = Q(alpha)
    xi = zeros(N)
    xi[N - 1] = alpha
    eta = zeros(N)
    eta[N - 1] = 1 / alpha
    G = zeros(N, N)
    G[: N - 1, : N - 1] = system.inner
    G[N - 1, N - 1] = 1 / alpha**2

    labels = tuple(g.label(v) for v in n.basis) + ("Ct",)
    for arr in (m_basis, phi, xi, eta, G, bm, kpart, kact):
        arr.flags.writeable = False
    return ParaSasakiStructure(
        system=system,
        center=cd,
        k=k,
        C=ksel.C,
        C_space=ksel.C_space,
        C_tilde=np.asarray(C_tilde, dtype=object),
        alpha=alpha,
        m_basis=m_basis,
        m_coords=m_coords,
        k_coords=k_coords,
        phi=phi,
        xi=xi,
        eta=eta,
        g=G,
        bm=bm,
        kpart=kpart,
        kact=kact,
        form_used=system.flavor,
        labels=labels,
    )


def eigendistributions(st: ParaSasakiStructure):
    """(+1, -1) eigenspaces of phi on ker eta, in m-coordinates."""
    H = st.horizontal
    N = st.dim
    ph = st.phi[H, H]
    out = []
    for s in (1, -1):
        K = kernel(ph - s * eye(N - 1))
        vecs = zeros(K.shape[0], N)
        vecs[:, H] = K
        out.append(Subspace(N, vecs))
    return tuple(out)


def h_decomposition(st: ParaSasakiStructure) -> np.ndarray:
    """Matrix sending v in h to its coordinates in (C~, C_space basis, [h,h] basis)."""
    sysm = st.system
    hh = commutator_subalgebra(sysm.algebra, sysm.h)
    rows = np.concatenate([
        st.C_tilde.reshape(1, -1), st.C_space.basis.reshape(-1, sysm.algebra.dim), hh.basis
    ])
    if rows.shape[0] != sysm.h.dim or rank(rows) != sysm.h.dim:
        raise ReductiveSplitFails("C~, C and [h,h] do not form a basis of h")
    return inverse(np.concatenate([rows, sysm.n.basis]))[:, : sysm.h.dim]


def structure_checks(st: ParaSasakiStructure) -> list[CheckResult]:
    """Verify the para-contact metric axioms and the consistency relations."""
    N = st.dim
    H = st.horizontal
    lab = st.labels
    G, P, eta, xi = st.g, st.phi, st.eta, st.xi
    out = []

    out.append(tensor_check(
        "structure.phi2", P @ P - eye(N) + np.outer(xi, eta), lab, names=("out", "X"),
    ))
    out.append(tensor_check(
        "structure.g_phi", P.T @ G @ P + G - np.outer(eta, eta), lab, names=("X", "Y"),
    ))
    out.append(tensor_check(
        "structure.deta", st.d_eta - st.g_phi, lab, names=("X", "Y"),
    ))
    out.append(flag_check(
        "structure.eta_xi", eta @ xi == 1, {"eta(xi)": str(eta @ xi)},
    ))
    out.append(tensor_check("structure.g_xi", G @ xi - eta, lab, names=("X",)))

    n = (N - 1) // 2
    sig = signature(G)
    out.append(flag_check(
        "structure.signature", (N - 1) % 2 == 0 and sig == (n + 1, n, 0),
        {"signature": list(sig)},
    ))

    dp, dm = eigendistributions(st)
    iso = all(is_zero(D.basis @ G @ D.basis.T) for D in (dp, dm) if D.dim)
    out.append(flag_check(
        "structure.eigendistributions",
        dp.dim == dm.dim == n and iso,
        {"dim_plus": dp.dim, "dim_minus": dm.dim, "isotropic": iso},
    ))
    out.append(flag_check(
        "structure.phi_xi",
        is_zero(P @ xi) and is_zero(eta @ P),
        {"phi(xi)": [str(x) for x in P @ xi], "eta.phi": [str(x) for x in eta @ P]},
    ))

    # eta([X,Y]_m) = a / alpha where a is the C~-coefficient
    res = qeinsum("abc,c->ab", st.bm[H, H], eta) - st.bm[H, H, N - 1] / st.alpha
    out.append(tensor_check("structure.eta_bracket", res, lab, names=("X", "Y")))

    # <<X, phi Y>> = -a F(C~, A) - sum_i b_i F(C_i, A)
    F = st.system.ambient_form
    A = st.center.A
    fa = [st.C_tilde @ F @ A] + [c @ F @ A for c in st.C_space.basis]
    nb = st.system.n.basis
    nn = qeinsum("ai,bj,ijk->abk", nb, nb, st.system.algebra.c)   # [X,Y] for X,Y in n
    coef = qeinsum("abk,kr->abr", nn, h_decomposition(st))
    fa = np.array(fa + [Q(0)] * (coef.shape[2] - len(fa)), dtype=object)
    res = st.g_phi[H, H] + qeinsum("abr,r->ab", coef, fa)
    out.append(tensor_check("structure.omega_center", res, lab, names=("X", "Y")))

    cd = st.center
    if cd.center_dim == 1 and cd.lam is not None and st.form_used == "Killing":
        # on a line centre C~ = r Z, so the Z-coefficient is r times the C~ one
        r = _ratio(st.C_tilde, cd.Z)
        res = st.g_phi[H, H] + cd.lam * (N - 1) * r * coef[:, :, 0]
        out.append(tensor_check("structure.omega_center_line", res, lab, names=("X", "Y")))
    else:
        out.append(not_applicable("structure.omega_center_line", "centre of h is not a line"))
    return out


def _ratio(v, w):
    """r with v = r w (w nonzero, v known to be parallel)."""
    i = first_nonzero(w)
    return v[i] / w[i]


__all__ = [
    "ConstructionError",
    "NoIsotropicDirection",
    "NoTransverseDirection",
    "ReductiveSplitFails",
    "KSelection",
    "ParaSasakiStructure",
    "select_k",
    "select_C_tilde",
    "compute_alpha",
    "alpha_closed_form",
    "build_structure",
    "eigendistributions",
    "structure_checks",
]
