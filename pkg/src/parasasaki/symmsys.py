"""Para-Hermitian symmetric systems and their distinguished central elements.

A system is a Lie algebra with an involution ``sigma`` (splitting it into
``h`` and ``n``), a para-complex structure ``I`` on ``n`` and an inner product
on ``n``.  Coordinates on ``n`` always refer to the echelon basis of the
subspace ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .liealg import (
    ComplexStructureTag,
    LieAlgebra,
    Subspace,
    ad_matrix,
    center_of_subalgebra,
    centralizer,
    involution_eigensplit,
    is_invariant_form,
    restrict_endo,
    restrict_form,
)
from .linalg import (
    Q,
    DimensionError,
    eye,
    first_nonzero,
    inverse,
    is_symmetric,
    is_zero,
    kernel,
    qarray,
    qeinsum,
    rank,
    signature,
    solve_linear,
    zeros,
)


class SymmetricSystemError(Exception):
    pass


class AxiomViolation(SymmetricSystemError):
    """One or more system axioms fail.

    ``violations`` lists every ``(tag, witness, message)``; ``tag`` is the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        self.tag, self.witness, msg = self.violations[0]
        super().__init__("; ".join(f"({t}) {m}" for t, _, m in self.violations))

    @property
    def tags(self):
        return [t for t, _, _ in self.violations]


class NoSuchZ(SymmetricSystemError):
    pass


class AmbiguousZ(SymmetricSystemError):
    pass


class KillingDegenerate(SymmetricSystemError):
    pass


class NoSolution(SymmetricSystemError):
    pass


class CenterDimUnexpected(SymmetricSystemError):
    def __init__(self, dim):
        super().__init__(f"centre of h has dimension {dim}")
        self.dim = dim


class DecompositionFails(SymmetricSystemError):
    pass


class BothZero(SymmetricSystemError):
    pass


class SignatureUnexpected(SymmetricSystemError):
    pass


@dataclass(frozen=True, eq=False)
class SymmetricSystem:
    algebra: LieAlgebra
    sigma: np.ndarray
    h: Subspace
    n: Subspace
    I_on_n: np.ndarray
    inner: np.ndarray
    form: Optional[np.ndarray] = None
    complex_structure: Optional[ComplexStructureTag] = None
    blocks: Optional[tuple] = None
    name: str = ""

    @property
    def killing(self) -> np.ndarray:
        return self.algebra.killing

    @property
    def flavor(self) -> str:
        """``"Killing"`` when B is nondegenerate, else ``"InvariantPairing"``."""
        if rank(self.killing) == self.algebra.dim:
            return "Killing"
        return "InvariantPairing"

    @property
    def ambient_form(self) -> np.ndarray:
        """The invariant form used in the construction (B or the pairing)."""
        if self.flavor == "Killing":
            return self.killing
        if self.form is None:
            raise KillingDegenerate(
                "Killing form is degenerate and no invariant pairing was supplied"
            )
        return self.form

    def omega(self) -> np.ndarray:
        """omega(X, Y) = <X, I Y> on the n-basis."""
        return self.inner @ self.I_on_n

    def n_vector(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=object) @ self.n.basis


@dataclass(frozen=True, eq=False)
class CenterData:
    Z: np.ndarray
    A: np.ndarray
    lam: Optional[object]
    mu: Optional[object]
    center_dim: int
    block_lambdas: Optional[tuple] = None


def _as_n_endo(system_n: Subspace, E) -> np.ndarray:
    E = qarray(E)
    k = system_n.dim
    if E.shape == (k, k):
        return E
    return restrict_endo(E, system_n)


def _as_n_form(system_n: Subspace, F) -> np.ndarray:
    F = qarray(F)
    k = system_n.dim
    if F.shape == (k, k):
        return F
    return restrict_form(F, system_n)


def axiom_violations(g: LieAlgebra, h: Subspace, n: Subspace, I, G) -> list:
    """Every failing axiom as ``(tag, witness, message)``; empty when valid."""
    out = []
    k = n.dim
    lab = [g.label(v) for v in n.basis]
    hlab = [g.label(v) for v in h.basis]

    bad = first_nonzero(I @ I - eye(k))
    if bad is not None:
        out.append(("I", {"X": lab[bad[1]]}, f"I^2 != id on {lab[bad[1]]}"))

    ad_h = [restrict_endo(ad_matrix(g, w), n) for w in h.basis]
    for p, adw in enumerate(ad_h):
        bad = first_nonzero(I @ adw - adw @ I)
        if bad is not None:
            out.append(
                ("II", {"W": hlab[p], "X": lab[bad[1]]},
                 f"I does not commute with ad_{hlab[p]}")
            )
            break

    if not is_symmetric(G):
        bad = first_nonzero(G - G.T)
        out.append(("Symmetric", {"X": lab[bad[0]], "Y": lab[bad[1]]}, "inner product not symmetric"))

    bad = first_nonzero(I.T @ G + G @ I)
    if bad is not None:
        i, j = bad
        out.append(
            ("III", {"X": lab[i], "Y": lab[j]},
             f"<IX,Y> + <X,IY> = {(I.T @ G + G @ I)[i, j]} for X={lab[i]}, Y={lab[j]}")
        )

    for p, adw in enumerate(ad_h):
        res = adw.T @ G + G @ adw
        bad = first_nonzero(res)
        if bad is not None:
            i, j = bad
            out.append(
                ("IV", {"X": hlab[p], "Y1": lab[i], "Y2": lab[j]},
                 f"<ad_X Y1, Y2> + <Y1, ad_X Y2> = {res[i, j]}")
            )
            break

    plus = kernel(I - eye(k)).shape[0]
    minus = kernel(I + eye(k)).shape[0]
    if plus != minus or plus + minus != k:
        out.append(("EigenDim", {"plus": plus, "minus": minus}, f"eigenspace dims {plus}, {minus}"))

    if rank(G) != k:
        out.append(("Nondegenerate", {"rank": rank(G)}, "inner product degenerate on n"))
    return out


def verify_system(
    algebra: LieAlgebra,
    sigma,
    I,
    inner,
    form=None,
    complex_structure: ComplexStructureTag | None = None,
    blocks=None,
    name: str = "",
) -> SymmetricSystem:
    """Check the system axioms and return the validated system.

    ``I`` and ``inner`` may be given on the n-basis or as full ambient
    matrices (restricted here).  Raises AxiomViolation listing every failure.
    """
    sigma = qarray(sigma)
    h, n = involution_eigensplit(algebra, sigma)
    I = _as_n_endo(n, I)
    G = _as_n_form(n, inner)
    if form is not None:
        form = qarray(form)
        if form.shape != (algebra.dim, algebra.dim):
            raise DimensionError("invariant form must be ambient-sized")
        problems = []
        if not is_symmetric(form):
            problems.append(("Form", None, "invariant form not symmetric"))
        ok, wit = is_invariant_form(algebra, form)
        if not ok:
            problems.append(("Form", {"zxy": [algebra.labels[i] for i in wit]}, "form not ad-invariant"))
        if rank(form) != algebra.dim:
            problems.append(("Form", None, "invariant form degenerate"))
        if problems:
            raise AxiomViolation(problems)
    bad = axiom_violations(algebra, h, n, I, G)
    if bad:
        raise AxiomViolation(bad)
    for arr in (sigma, I, G):
        arr.flags.writeable = False
    return SymmetricSystem(algebra, sigma, h, n, I, G, form, complex_structure, blocks, name)


def find_Z(system: SymmetricSystem) -> np.ndarray:
    """The element Z of h with ad_Z = I on n and centralizer h.

    The centralizer requirement is linear on h ([Z, h] = 0, while
    c(Z) cannot meet n because I is invertible), so both conditions are
    solved together; a residual kernel is the centre of g inside h.
    """
    g, h, n = system.algebra, system.h, system.n
    if h.dim == 0:
        raise NoSuchZ("h is zero")
    hn = qeinsum("pi,qj,ijk->pqk", h.basis, n.basis, g.c)   # [h_p, n_q]
    hh = qeinsum("pi,qj,ijk->pqk", h.basis, h.basis, g.c)   # [h_p, h_q]
    target = qeinsum("iq,ik->qk", system.I_on_n, n.basis)   # I n_q in ambient coords
    A = np.concatenate(
        [hn.transpose(1, 2, 0).reshape(-1, h.dim), hh.transpose(1, 2, 0).reshape(-1, h.dim)]
    )
    b = np.concatenate([target.reshape(-1), zeros(h.dim * g.dim)])
    sol = solve_linear(A, b)
    if sol is None:
        raise NoSuchZ("no Z in h with ad_Z = I on n and [Z, h] = 0")
    t, K = sol
    if K.shape[0]:
        raise AmbiguousZ(
            f"{K.shape[0]}-dimensional family of solutions (g has centre inside h)"
        )
    Z = t @ h.basis
    if centralizer(g, Z) != h:
        raise NoSuchZ("centralizer of the solution differs from h")
    return Z


def find_A(system: SymmetricSystem, F=None) -> np.ndarray:
    """Unique A with [A, h] = 0 and -F([A,X],Y) = <X, IY> on n.

    F defaults to the Killing form; pass the invariant pairing for
    non-semisimple algebras.
    """
    g, h, n = system.algebra, system.h, system.n
    if F is None:
        F = system.killing
        if rank(F) != g.dim:
            raise KillingDegenerate("Killing form is degenerate; supply an invariant pairing")
    F = qarray(F)
    d = g.dim
    # unknown A = sum_i a_i e_i
    # -F([e_i, n_p], n_q) = omega[p, q]
    brn = qeinsum("ijk,pj->ipk", g.c, n.basis)                 # [e_i, n_p]
    rows1 = -qeinsum("ipk,kl,ql->pqi", brn, F, n.basis).reshape(-1, d)
    rhs1 = system.omega().reshape(-1)
    rows2 = qeinsum("ijk,pj->pki", g.c, h.basis).reshape(-1, d)  # [e_i, h_p] = 0
    rhs2 = zeros(rows2.shape[0])
    sol = solve_linear(np.concatenate([rows1, rows2]), np.concatenate([rhs1, rhs2]))
    if sol is None:
        raise NoSolution("no A satisfies the defining equations")
    A, K = sol
    if K.shape[0]:
        raise NoSolution(f"A is not unique ({K.shape[0]}-dimensional family)")
    if centralizer(g, A) != h:
        raise NoSolution("centralizer of A differs from h")
    return A


def _coeffs_in(vectors, target):
    """Coefficients expressing ``target`` in the span of ``vectors`` (or None)."""
    M = np.array([list(v) for v in vectors], dtype=object).T
    sol = solve_linear(M, np.asarray(target, dtype=object))
    if sol is None:
        return None
    x, K = sol
    if K.shape[0]:
        return None
    return x


def decompose_A(system: SymmetricSystem, A, Z) -> CenterData:
    """Write A in the basis {Z} or {Z, iZ} of the centre of h.

    Direct sums without a complex structure are decomposed block by block.
    """
    center = center_of_subalgebra(system.algebra, system.h)
    d = center.dim
    if A not in center:
        raise DecompositionFails("A is not central in h")
    tag = system.complex_structure
    if tag is not None:
        iZ = tag.endo @ Z
        x = _coeffs_in([Z, iZ], A)
        if x is None:
            raise DecompositionFails("A is not in span{Z, iZ}")
        if d != 2 and not system.blocks:
            raise CenterDimUnexpected(d)
        return CenterData(Z, A, x[0], x[1], d)
    x = _coeffs_in([Z], A)
    if x is not None:
        if d not in (1, 2) and not system.blocks:
            raise CenterDimUnexpected(d)
        return CenterData(Z, A, x[0], None, d)
    if system.blocks:
        lams = []
        off = 0
        for size in system.blocks:
            sl = slice(off, off + size)
            x = _coeffs_in([Z[sl]], A[sl])
            if x is None:
                raise DecompositionFails(f"A is not a multiple of Z on block at {off}")
            lams.append(x[0])
            off += size
        return CenterData(Z, A, None, None, d, tuple(lams))
    if d not in (1, 2):
        raise CenterDimUnexpected(d)
    raise DecompositionFails("A is not a multiple of Z and no complex structure is known")


def center_data(system: SymmetricSystem) -> CenterData:
    Z = find_Z(system)
    F = system.ambient_form
    A = find_A(system, F)
    return decompose_A(system, A, Z)


def build_f_metric(algebra: LieAlgebra, tag: ComplexStructureTag, n: Subspace, h: Subspace, lam, mu):
    """lam*B(.,.) + mu*B(i.,.) restricted to n, with its invariance checked."""
    lam, mu = Q(lam), Q(mu)
    if lam == 0 and mu == 0:
        raise BothZero("(lambda, mu) = (0, 0)")
    B = algebra.killing
    full = lam * B + mu * (tag.endo.T @ B)
    f = restrict_form(full, n)
    for w in h.basis:
        adw = restrict_endo(ad_matrix(algebra, w), n)
        if not is_zero(adw.T @ f + f @ adw):
            raise SignatureUnexpected("f is not ad_h-invariant")
    pos, neg, zero = signature(f)
    if zero or pos != neg:
        raise SignatureUnexpected(f"signature ({pos},{neg},{zero})")
    return f


def n_projector(system: SymmetricSystem) -> np.ndarray:
    """Matrix taking ambient coordinates to n-coordinates along h."""
    P = np.concatenate([system.h.basis, system.n.basis])
    return inverse(P)[:, system.h.dim:].T


def lift_endo(system: SymmetricSystem) -> np.ndarray:
    """Ambient matrix equal to I on n and zero on h."""
    return system.n.basis.T @ system.I_on_n @ n_projector(system)


def lift_form(system: SymmetricSystem) -> np.ndarray:
    """Ambient form equal to the inner product on n, with h in its radical."""
    C = n_projector(system)
    return C.T @ system.inner @ C


def scale_system(system: SymmetricSystem, t) -> SymmetricSystem:
    t = Q(t)
    if t == 0:
        raise ValueError("scale must be nonzero")
    inner = system.inner * t
    inner.flags.writeable = False
    return replace(system, inner=inner)


__all__ = [
    "SymmetricSystem",
    "CenterData",
    "AxiomViolation",
    "NoSuchZ",
    "AmbiguousZ",
    "KillingDegenerate",
    "NoSolution",
    "CenterDimUnexpected",
    "DecompositionFails",
    "BothZero",
    "SignatureUnexpected",
    "axiom_violations",
    "verify_system",
    "find_Z",
    "find_A",
    "decompose_A",
    "center_data",
    "build_f_metric",
    "scale_system",
    "n_projector",
    "lift_endo",
    "lift_form",
]
