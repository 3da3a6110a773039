"""Lie algebras given by exact structure constants.

Conventions: ``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
Vectors are coordinate arrays in the algebra basis and endomorphisms act on
column vectors, so ``ad(x) @ y == [x, y]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .linalg import (
    Q,
    DimensionError,
    block_diag,
    eye,
    first_nonzero,
    is_zero,
    kernel,
    qarray,
    qeinsum,
    rank,
    rref,
    solve_linear,
    zeros,
)


class LieAlgebraError(Exception):
    """Base class for structural failures; ``witness`` locates the problem."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AntisymmetryViolation(LieAlgebraError):
    pass


class JacobiViolation(LieAlgebraError):
    pass


class NotSubalgebra(LieAlgebraError):
    pass


class NotInvolution(LieAlgebraError):
    pass


class NotAutomorphism(LieAlgebraError):
    pass


class GradingViolation(LieAlgebraError):
    pass


class NotComplexStructure(LieAlgebraError):
    pass


class Subspace:
    """A linear subspace stored by its reduced row echelon basis.

    The echelon form is canonical, so equal subspaces compare equal
    entry by entry.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors=()):
        self.ambient_dim = ambient_dim
        vecs = np.asarray(vectors, dtype=object)
        if vecs.size == 0:
            vecs = zeros(0, ambient_dim)
        vecs = vecs.reshape(-1, ambient_dim)
        R, pivots = rref(vecs)
        R.flags.writeable = False
        self.basis = R
        self.pivots = tuple(pivots)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, eye(n))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, v) -> Optional[np.ndarray]:
        """Coefficients of ``v`` in ``self.basis``, or None if ``v`` is outside."""
        v = np.asarray(v, dtype=object)
        c = np.array([v[p] for p in self.pivots], dtype=object)
        if self.dim and not is_zero(c @ self.basis - v):
            return None
        if not self.dim and not is_zero(v):
            return None
        return c

    def __contains__(self, v) -> bool:
        return self.coords(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(row in self for row in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, np.concatenate([self.basis, other.basis]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and is_zero(self.basis - other.basis)
        )

    def __hash__(self):
        return hash((self.ambient_dim, tuple(str(x) for x in self.basis.flat)))

    def __repr__(self):
        rows = [[str(x) for x in r] for r in self.basis]
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={rows})"


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    labels: tuple = ()

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def e(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = Q(1)
        return v

    def bracket(self, x, y) -> np.ndarray:
        return bracket(self, x, y)

    def ad(self, x) -> np.ndarray:
        return ad_matrix(self, x)

    @cached_property
    def killing(self) -> np.ndarray:
        return killing_form(self)

    def label(self, v) -> str:
        """Readable linear combination, for reports."""
        terms = [f"{x}*{self.labels[i]}" for i, x in enumerate(v) if x != 0]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True, eq=False)
class ComplexStructureTag:
    """A complex structure ``i`` on a real Lie algebra: i^2 = -1, i[x,y] = [ix,y]."""

    endo: np.ndarray


def validate_algebra(c, labels: Sequence[str] | None = None) -> LieAlgebra:
    """Check antisymmetry and the Jacobi identity exactly and wrap the constants."""
    c = qarray(c)
    if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
        raise DimensionError(f"structure constants must be n x n x n, got {c.shape}")
    n = c.shape[0]
    if labels is None:
        labels = tuple(f"e{i + 1}" for i in range(n))
    labels = tuple(labels)
    if len(labels) != n:
        raise DimensionError("one label per basis vector")
    bad = first_nonzero(c + c.transpose(1, 0, 2))
    if bad is not None:
        i, j, k = bad
        raise AntisymmetryViolation(
            f"c[{i},{j},{k}] + c[{j},{i},{k}] = {c[i, j, k] + c[j, i, k]} != 0",
            witness=(i, j, k),
        )
    jac = (
        qeinsum("ijm,mlk->ijlk", c, c)
        + qeinsum("jlm,mik->ijlk", c, c)
        + qeinsum("lim,mjk->ijlk", c, c)
    )
    bad = first_nonzero(jac)
    if bad is not None:
        i, j, l, k = bad
        raise JacobiViolation(
            f"Jacobi fails on ({labels[i]}, {labels[j]}, {labels[l]}), "
            f"component {labels[k]}: {jac[bad]}",
            witness=(i, j, l, k, jac[bad]),
        )
    c.flags.writeable = False
    return LieAlgebra(c, labels)


def jacobi_residual(g: LieAlgebra, x, y, z) -> np.ndarray:
    return (
        g.bracket(g.bracket(x, y), z)
        + g.bracket(g.bracket(y, z), x)
        + g.bracket(g.bracket(z, x), y)
    )


def bracket(g: LieAlgebra, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=object)
    y = np.asarray(y, dtype=object)
    if x.shape != (g.dim,) or y.shape != (g.dim,):
        raise DimensionError(f"vectors must have length {g.dim}")
    return qeinsum("i,j,ijk->k", x, y, g.c)


def ad_matrix(g: LieAlgebra, x) -> np.ndarray:
    x = np.asarray(x, dtype=object)
    if x.shape != (g.dim,):
        raise DimensionError(f"vector must have length {g.dim}")
    return qeinsum("i,ijk->kj", x, g.c)


def killing_form(g: LieAlgebra) -> np.ndarray:
    """B(x, y) = trace(ad x . ad y) on basis pairs."""
    return qeinsum("ajk,bkj->ab", g.c, g.c)


def centralizer(g: LieAlgebra, x) -> Subspace:
    return Subspace(g.dim, kernel(ad_matrix(g, x)))


def _brackets_of(g: LieAlgebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All brackets [a_i, b_j] as an (len(a), len(b), dim) array."""
    return qeinsum("pi,qj,ijk->pqk", a, b, g.c)


def _require_subalgebra(g: LieAlgebra, h: Subspace) -> np.ndarray:
    br = _brackets_of(g, h.basis, h.basis)
    for p in range(h.dim):
        for q in range(p + 1, h.dim):
            if br[p, q] not in h:
                raise NotSubalgebra(
                    f"[h_{p}, h_{q}] leaves the subspace", witness=(p, q)
                )
    return br


def commutator_subalgebra(g: LieAlgebra, h: Subspace) -> Subspace:
    br = _require_subalgebra(g, h)
    return Subspace(g.dim, br.reshape(-1, g.dim))


def center_of_subalgebra(g: LieAlgebra, h: Subspace) -> Subspace:
    br = _require_subalgebra(g, h)
    if h.dim == 0:
        return Subspace(g.dim)
    # x = sum t_p h_p is central iff sum_p t_p [h_p, h_q] = 0 for every q
    A = br.transpose(1, 2, 0).reshape(-1, h.dim)
    T = kernel(A)
    return Subspace(g.dim, T @ h.basis if T.shape[0] else ())


def check_automorphism(g: LieAlgebra, S) -> None:
    """Raise NotAutomorphism unless S[e_i, e_j] = [S e_i, S e_j] on all pairs."""
    S = qarray(S)
    lhs = qeinsum("km,ijm->ijk", S, g.c)
    rhs = qeinsum("ai,bj,abk->ijk", S, S, g.c)
    bad = first_nonzero(lhs - rhs)
    if bad is not None:
        i, j, k = bad
        raise NotAutomorphism(
            f"sigma[{g.labels[i]},{g.labels[j]}] != [sigma {g.labels[i]}, "
            f"sigma {g.labels[j]}] in component {g.labels[k]}",
            witness=(i, j, k),
        )


def involution_eigensplit(g: LieAlgebra, sigma) -> tuple[Subspace, Subspace]:
    """(+1, -1) eigenspaces of an involutive automorphism, grading verified."""
    S = qarray(sigma)
    n = g.dim
    if S.shape != (n, n):
        raise DimensionError(f"involution must be {n} x {n}")
    bad = first_nonzero(S @ S - eye(n))
    if bad is not None:
        raise NotInvolution("sigma^2 != id", witness=bad)
    check_automorphism(g, S)
    plus = Subspace(n, kernel(S - eye(n)))
    minus = Subspace(n, kernel(S + eye(n)))
    if plus.dim + minus.dim != n:
        raise NotInvolution("eigenspaces do not span")
    for (a, b, target, name) in (
        (plus, plus, plus, "[h,h] in h"),
        (plus, minus, minus, "[h,n] in n"),
        (minus, minus, plus, "[n,n] in h"),
    ):
        br = _brackets_of(g, a.basis, b.basis)
        for p in range(a.dim):
            for q in range(b.dim):
                if br[p, q] not in target:
                    raise GradingViolation(f"grading {name} fails", witness=(p, q))
    return plus, minus


def is_invariant_form(g: LieAlgebra, f):
    """ad-invariance of a bilinear form.

    Returns ``(True, None)`` or ``(False, (z, x, y))`` with a violating basis triple.
    """
    f = qarray(f)
    t = qeinsum("zxk,ky->zxy", g.c, f) + qeinsum("zyk,xk->zxy", g.c, f)
    bad = first_nonzero(t)
    return (bad is None, bad)


def direct_sum(algebras: Sequence[LieAlgebra]) -> LieAlgebra:
    algebras = list(algebras)
    if len(algebras) == 1:
        return algebras[0]
    n = sum(a.dim for a in algebras)
    c = zeros(n, n, n)
    labels = []
    off = 0
    for idx, a in enumerate(algebras):
        d = a.dim
        c[off : off + d, off : off + d, off : off + d] = a.c
        labels.extend(f"{lab}_{idx + 1}" for lab in a.labels)
        off += d
    c.flags.writeable = False
    return LieAlgebra(c, tuple(labels))


def check_complex_structure(g: LieAlgebra, J) -> ComplexStructureTag:
    J = qarray(J)
    n = g.dim
    bad = first_nonzero(J @ J + eye(n))
    if bad is not None:
        raise NotComplexStructure("i^2 != -1", witness=bad)
    lhs = qeinsum("km,ijm->ijk", J, g.c)
    rhs = qeinsum("ai,abk->ibk", J, g.c)
    bad = first_nonzero(lhs - rhs)
    if bad is not None:
        raise NotComplexStructure("i[x,y] != [ix,y]", witness=bad)
    J.flags.writeable = False
    return ComplexStructureTag(J)


def complex_killing(c_re, c_im):
    """Real and imaginary parts of the complex Killing form."""
    re = qeinsum("ajk,bkj->ab", c_re, c_re) - qeinsum("ajk,bkj->ab", c_im, c_im)
    im = qeinsum("ajk,bkj->ab", c_re, c_im) + qeinsum("ajk,bkj->ab", c_im, c_re)
    return re, im


def realify(c_re, c_im=None, labels=None) -> tuple[LieAlgebra, ComplexStructureTag]:
    """Underlying real algebra of a complex one, basis (e_1..e_n, ie_1..ie_n)."""
    c_re = qarray(c_re)
    n = c_re.shape[0]
    c_im = zeros(n, n, n) if c_im is None else qarray(c_im)
    if labels is None:
        labels = [f"e{i + 1}" for i in range(n)]
    r = zeros(2 * n, 2 * n, 2 * n)
    u = slice(0, n)
    v = slice(n, 2 * n)
    r[u, u, u] = c_re
    r[u, u, v] = c_im
    r[u, v, v] = c_re
    r[u, v, u] = -c_im
    r[v, u, v] = c_re
    r[v, u, u] = -c_im
    r[v, v, u] = -c_re
    r[v, v, v] = -c_im
    alg = validate_algebra(r, list(labels) + [f"i{lab}" for lab in labels])
    J = zeros(2 * n, 2 * n)
    for j in range(n):
        J[n + j, j] = Q(1)
        J[j, n + j] = Q(-1)
    tag = check_complex_structure(alg, J)
    re, im = complex_killing(c_re, c_im)
    expected = zeros(2 * n, 2 * n)
    expected[u, u] = 2 * re
    expected[u, v] = -2 * im
    expected[v, u] = -2 * im
    expected[v, v] = -2 * re
    if not is_zero(alg.killing - expected):
        raise LieAlgebraError("real Killing form differs from 2 Re of the complex one")
    return alg, tag


def restrict_endo(E, sub: Subspace) -> np.ndarray:
    """Matrix (column convention) of E on ``sub`` in its echelon basis.

    Raises ValueError if E does not preserve ``sub``.
    """
    E = qarray(E)
    cols = []
    for p, v in enumerate(sub.basis):
        c = sub.coords(E @ v)
        if c is None:
            raise ValueError(f"endomorphism does not preserve the subspace (basis vector {p})")
        cols.append(c)
    out = zeros(sub.dim, sub.dim)
    for p, c in enumerate(cols):
        out[:, p] = c
    return out


def restrict_form(F, sub: Subspace) -> np.ndarray:
    F = qarray(F)
    return sub.basis @ F @ sub.basis.T if sub.dim else zeros(0, 0)


__all__ = [
    "LieAlgebra",
    "Subspace",
    "ComplexStructureTag",
    "LieAlgebraError",
    "AntisymmetryViolation",
    "JacobiViolation",
    "NotSubalgebra",
    "NotInvolution",
    "NotAutomorphism",
    "GradingViolation",
    "NotComplexStructure",
    "validate_algebra",
    "jacobi_residual",
    "bracket",
    "ad_matrix",
    "killing_form",
    "centralizer",
    "commutator_subalgebra",
    "center_of_subalgebra",
    "check_automorphism",
    "involution_eigensplit",
    "is_invariant_form",
    "direct_sum",
    "check_complex_structure",
    "complex_killing",
    "realify",
    "restrict_endo",
    "restrict_form",
    "block_diag",
    "rank",
    "solve_linear",
]
