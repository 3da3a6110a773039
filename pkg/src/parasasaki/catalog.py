"""Generators for the example families.

Matrix algebras are built on matrix-unit bases and their structure
constants are computed from commutators, never typed in by hand.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .liealg import (
    ad_matrix,
    center_of_subalgebra,
    check_complex_structure,
    direct_sum,
    involution_eigensplit,
    realify,
    validate_algebra,
)
from .linalg import Q, block_diag, parse_scalar, zeros
from .symmsys import (
    BothZero,
    SymmetricSystem,
    build_f_metric,
    lift_endo,
    lift_form,
    verify_system,
)


class CatalogError(ValueError):
    pass


class ZeroC(CatalogError):
    pass


def _sl_basis(N: int):
    """Matrix basis of sl(N): H_k = E_kk - E_{k+1,k+1}, then E_ij (i != j) row-major."""
    mats, labels = [], []
    for k in range(N - 1):
        m = zeros(N, N)
        m[k, k] = Q(1)
        m[k + 1, k + 1] = Q(-1)
        mats.append(m)
        labels.append(f"H{k + 1}")
    for i in range(N):
        for j in range(N):
            if i != j:
                m = zeros(N, N)
                m[i, j] = Q(1)
                mats.append(m)
                labels.append(f"E{i + 1}{j + 1}")
    if N == 2:
        labels = ["h", "x", "y"]
    return mats, labels


def _sl_coords(M: np.ndarray) -> np.ndarray:
    """Coordinates of a traceless matrix in the basis of ``_sl_basis``."""
    N = M.shape[0]
    out = []
    running = Q(0)
    for k in range(N - 1):
        running += M[k, k]
        out.append(running)
    if running + M[N - 1, N - 1] != 0:
        raise CatalogError("matrix is not traceless")
    for i in range(N):
        for j in range(N):
            if i != j:
                out.append(Q(M[i, j]))
    return np.array(out, dtype=object)


def sl_structure_constants(N: int):
    mats, labels = _sl_basis(N)
    d = len(mats)
    c = zeros(d, d, d)
    for i in range(d):
        for j in range(i + 1, d):
            v = _sl_coords(mats[i] @ mats[j] - mats[j] @ mats[i])
            c[i, j] = v
            c[j, i] = -v
    return c, labels, mats


def _sl_block_data(p: int, q: int):
    N = p + q
    c, labels, mats = sl_structure_constants(N)
    s = [1] * p + [-1] * q
    D = np.diag(np.array([Q(x) for x in s], dtype=object))
    sigma = np.array([_sl_coords(D @ m @ D) for m in mats], dtype=object).T
    zmat = np.diag(np.array([Q(-q, N)] * p + [Q(p, N)] * q, dtype=object))
    Z = _sl_coords(zmat)
    return c, labels, sigma, Z


def gen_sl_real(p: int, q: int, scale=1) -> SymmetricSystem:
    """sl(p+q, R) with the block involution, I = ad_Z and metric scale*B on n."""
    if p < 1 or q < 1:
        raise CatalogError("p, q must be positive")
    c, labels, sigma, Z = _sl_block_data(p, q)
    g = validate_algebra(c, labels)
    adZ = ad_matrix(g, Z)
    return verify_system(
        g, sigma, adZ, Q(scale) * g.killing, name=f"sl_r:{p},{q}"
    )


def sl2_std() -> SymmetricSystem:
    return gen_sl_real(1, 1)


def gen_sl_complex(p: int, q: int, lam, mu) -> SymmetricSystem:
    """Realified sl(p+q, C) with complex structure and metric f_(lam, mu)."""
    if p < 1 or q < 1:
        raise CatalogError("p, q must be positive")
    lam, mu = Q(lam), Q(mu)
    if lam == 0 and mu == 0:
        raise BothZero("(lambda, mu) = (0, 0)")
    c, labels, sigma, Z = _sl_block_data(p, q)
    g, tag = realify(c, None, labels)
    d = len(labels)
    sig = block_diag(sigma, sigma)
    Zr = np.concatenate([Z, zeros(d)])
    adZ = ad_matrix(g, Zr)
    h, n = involution_eigensplit(g, sig)
    f = build_f_metric(g, tag, n, h, lam, mu)
    system = verify_system(
        g, sig, adZ, f, complex_structure=tag, name=f"sl_c:{p},{q},{lam},{mu}"
    )
    dz = center_of_subalgebra(g, system.h).dim
    if dz != 2:
        raise CatalogError(f"expected a 2-dimensional centre, got {dz}")
    return system


def quad_ext_algebra(c):
    """The quadratic extension of sl(2,R) on (e1, e2, e3, eta1, eta2, eta3)."""
    c = Q(c)
    if c == 0:
        raise ZeroC("c must be nonzero")
    e1, e2, e3, n1, n2, n3 = range(6)
    table = {
        (e1, e2): {e3: 1, n3: c},
        (e1, e3): {e2: 1, n2: -c},
        (e2, e3): {e1: 1, n1: c},
        (n1, e2): {n3: 1},
        (n1, e3): {n2: -1},
        (n2, e1): {n3: 1},
        (n2, e3): {n1: -1},
        (n3, e1): {n2: 1},
        (n3, e2): {n1: -1},
    }
    s = zeros(6, 6, 6)
    for (i, j), out in table.items():
        for k, v in out.items():
            s[i, j, k] = Q(v)
            s[j, i, k] = -Q(v)
    labels = ["e1", "e2", "e3", "eta1", "eta2", "eta3"]
    return validate_algebra(s, labels)


def quad_ext_pairing() -> np.ndarray:
    """<alpha + x, beta + y> = alpha(y) + beta(x)."""
    P = zeros(6, 6)
    for i in range(3):
        P[i, 3 + i] = Q(1)
        P[3 + i, i] = Q(1)
    return P


def gen_quad_ext(c) -> SymmetricSystem:
    c = Q(c)
    g = quad_ext_algebra(c)
    theta = np.diag(np.array([Q(x) for x in (1, -1, -1, 1, -1, -1)], dtype=object))
    pairing = quad_ext_pairing()
    Z = np.array([Q(x) for x in (1, 0, 0, -c, 0, 0)], dtype=object)
    return verify_system(
        g, theta, ad_matrix(g, Z), pairing, form=pairing, name=f"quad_ext:{c}"
    )


def gen_direct_sum(systems: Sequence[SymmetricSystem]) -> SymmetricSystem:
    systems = list(systems)
    if len(systems) == 1:
        return systems[0]
    g = direct_sum([s.algebra for s in systems])
    sigma = block_diag(*[s.sigma for s in systems])
    I = block_diag(*[lift_endo(s) for s in systems])
    G = block_diag(*[lift_form(s) for s in systems])
    form = None
    if any(s.form is not None for s in systems):
        form = block_diag(*[s.form if s.form is not None else s.killing for s in systems])
    tag = None
    if all(s.complex_structure is not None for s in systems):
        tag = check_complex_structure(g, block_diag(*[s.complex_structure.endo for s in systems]))
    return verify_system(
        g,
        sigma,
        I,
        G,
        form=form,
        complex_structure=tag,
        blocks=tuple(s.algebra.dim for s in systems),
        name="sum:" + "+".join(s.name for s in systems),
    )


def _ints(text: str, count: int):
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != count:
        raise CatalogError(f"expected {count} parameters, got {text!r}")
    return parts


def parse_catalog(spec: str) -> SymmetricSystem:
    """Build a system from names like ``sl_r:2,1``, ``sl_c:1,1,2,3``,
    ``quad_ext:-1`` or ``sum:sl_r:1,1+sl_r:2,1``."""
    spec = spec.strip()
    family, _, params = spec.partition(":")
    try:
        if family == "sum":
            return gen_direct_sum([parse_catalog(part) for part in params.split("+")])
        if family == "sl2_std":
            return sl2_std()
        if family == "sl_r":
            p, q = (int(x) for x in _ints(params, 2))
            return gen_sl_real(p, q)
        if family == "sl_c":
            p, q, lam, mu = _ints(params, 4)
            return gen_sl_complex(int(p), int(q), parse_scalar(lam), parse_scalar(mu))
        if family == "quad_ext":
            (c,) = _ints(params, 1)
            return gen_quad_ext(parse_scalar(c))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise CatalogError(f"bad catalog parameters in {spec!r}: {exc}") from exc
    raise CatalogError(f"unknown catalog family {family!r}")


DEFAULT_GRID = (
    [f"sl_r:{p},{q}" for p, q in ((1, 1), (1, 2), (2, 1), (2, 2))]
    + [f"quad_ext:{c}" for c in (1, -1, 2)]
    + [f"sl_c:1,1,{l},{m}" for l, m in ((1, 0), (0, 1), (1, 1), (2, 3))]
)


__all__ = [
    "CatalogError",
    "ZeroC",
    "sl_structure_constants",
    "gen_sl_real",
    "sl2_std",
    "gen_sl_complex",
    "quad_ext_algebra",
    "quad_ext_pairing",
    "gen_quad_ext",
    "gen_direct_sum",
    "parse_catalog",
    "DEFAULT_GRID",
]
