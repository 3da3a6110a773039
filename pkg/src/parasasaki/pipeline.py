"""End-to-end verification pipeline and the report it produces.

Stages run in order (algebra, system, center, structure, connection,
fibration).  A stage whose checks fail stops the pipeline; every check of the
later stages is reported as ``not_run``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional


from .checks import FAIL, NOT_RUN, PASS, CheckResult, failed, flag_check, not_applicable, passed, tensor_check
from .connection import connection_checks
from .fibration import base_report, fibration_checks
from .liealg import (
    AntisymmetryViolation,
    JacobiViolation,
    LieAlgebraError,
    NotComplexStructure,
    check_complex_structure,
    is_invariant_form,
    validate_algebra,
)
from .linalg import DimensionError, Q, format_scalar, is_symmetric, is_zero, rank, signature, to_strings
from .sasaki import (
    ConstructionError,
    ParaSasakiStructure,
    alpha_closed_form,
    build_structure,
    compute_alpha,
    select_C_tilde,
    select_k,
    structure_checks,
)
from .serialize import InputError, RawInstance, jsonable
from .symmsys import AxiomViolation, SymmetricSystemError, decompose_A, find_A, find_Z, verify_system

STAGES = ("algebra", "system", "center", "structure", "connection", "fibration")

# (check id, anchor formula)
_REGISTRY = {
    "algebra": [
        ("algebra.antisymmetry", "[X,Y] = -[Y,X]"),
        ("algebra.jacobi", "[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0"),
        ("algebra.killing_invariant", "B([Z,X],Y) + B(X,[Z,Y]) = 0"),
        ("algebra.form_invariant", "<[Z,X],Y> + <X,[Z,Y]> = 0, <,> symmetric nondegenerate"),
        ("algebra.complex_structure", "i^2 = -1, i[X,Y] = [iX,Y]"),
    ],
    "system": [
        ("system.involution", "sigma^2 = id, sigma automorphism, [h,h] in h, [h,n] in n, [n,n] in h"),
        ("system.I", "I^2 = id on n"),
        ("system.II", "I ad_W = ad_W I for W in h"),
        ("system.symmetric", "<X,Y> = <Y,X>"),
        ("system.III", "<IX,Y> + <X,IY> = 0"),
        ("system.IV", "<[W,X],Y> + <X,[W,Y]> = 0 for W in h"),
        ("system.eigendim", "dim n_+ = dim n_-"),
        ("system.nondegenerate", "<,> nondegenerate on n"),
        ("system.omega_antisym", "omega(X,Y) = <X,IY> = -omega(Y,X)"),
    ],
    "center": [
        ("center.Z", "Z in h, ad_Z = I on n, centralizer of Z = h"),
        ("center.BZZ", "B(Z,Z) = tr(ad_Z^2) = dim n"),
        ("center.A", "[A,h] = 0, -F([A,X],Y) = <X,IY>"),
        ("center.decomposition", "A = lambda Z (+ mu iZ)"),
        ("center.complex_pair", "A = lambda Z + mu iZ in the centre of h"),
    ],
    "structure": [
        ("structure.k", "k = [h,h] + {C : F(A,C) = 0}, dim k = dim h - 1"),
        ("structure.C_tilde", "C~ central in h, F(A,C~) != 0"),
        ("structure.alpha", "alpha = 1/(2 F(A,C~)) = 1/(2 lambda dim n)"),
        ("structure.reductive", "g = m + k, [k,k] in k, [k,m] in m, ad_Z m in m"),
        ("structure.phi2", "phi^2 = Id - eta (x) xi"),
        ("structure.g_phi", "g(phiX,phiY) = -g(X,Y) + eta(X)eta(Y)"),
        ("structure.deta", "d eta(X,Y) = g(X,phiY)"),
        ("structure.eta_xi", "eta(xi) = 1"),
        ("structure.g_xi", "g(X,xi) = eta(X)"),
        ("structure.signature", "g has signature (n+1, n)"),
        ("structure.eigendistributions", "phi = +-1 eigendistributions isotropic of equal dimension"),
        ("structure.phi_xi", "phi xi = 0, eta o phi = 0"),
        ("structure.eta_bracket", "eta([X,Y]_m) = a/alpha where a is the C~-coefficient"),
        ("structure.omega_center", "<<X,phiY>> = -a F(C~,A) - sum b_i F(C_i,A)"),
        ("structure.omega_center_line", "<<X,phiY>> = -lambda a dim n (line centre)"),
    ],
    "connection": [
        ("connection.torsion_free", "Lambda(X)Y - Lambda(Y)X = [X,Y]_m"),
        ("connection.metric", "g(Lambda(X)Y,W) + g(Y,Lambda(X)W) = 0"),
        ("connection.nabla_g", "g(A_X Y,W) + g(Y,A_X W) = 0"),
        ("connection.calibration", "nabla xi = -phi and R(X,Y)xi = eta(X)Y - eta(Y)X fix the signs"),
        ("connection.R_antisym", "R(X,Y)Z = -R(Y,X)Z"),
        ("connection.R_bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0"),
        ("connection.R_gskew", "g(R(X,Y)Z,W) = -g(R(X,Y)W,Z)"),
        ("connection.nabla_xi", "nabla_X xi = -phi X"),
        ("connection.nabla_phi", "(nabla_X phi)Y = -g(X,Y)xi + eta(Y)X"),
        ("connection.R_xi", "R(X,Y)xi = eta(X)Y - eta(Y)X"),
        ("connection.R_xi2", "R(X,xi)Y = g(X,Y)xi - eta(Y)X"),
        ("connection.R_phi", "R(phiX,Y)Z = -R(X,phiY)Z - g(phiZ,X)Y - g(Z,phiY)X + g(Z,X)phiY - g(Z,Y)phiX"),
        ("connection.nablaR_xi_first", "(nabla_V R)(X,Y,xi) = g(Y,phiV)X - g(X,phiV)Y + R(X,Y,phiV)"),
        ("connection.nablaR_xi_second", "(nabla_V R)(X,Y,xi) = g(Y,V)phiX - g(X,V)phiY + phi R(X,Y,V)"),
        ("connection.nablaR_mid_xi_first", "(nabla_V R)(X,xi,Y) = g(Y,phiX)V - g(V,Y)phiX - R(phiX,V,Y)"),
        ("connection.nablaR_mid_xi_second", "(nabla_V R)(X,xi,Y) = g(Y,phiV)X - g(X,Y)phiV + R(X,phiV,Y)"),
        ("connection.nablaR_xi_front_first", "(nabla_V R)(xi,X,Y) = g(Y,X)phiV - g(phiV,Y)X + R(phiV,X,Y)"),
        ("connection.nablaR_xi_front_second", "(nabla_V R)(xi,X,Y) = -g(Y,phiX)V + g(V,Y)phiX - R(V,phiX,Y)"),
        ("connection.nijenhuis", "N_phi(X,Y) = 2 d eta(X,Y) xi"),
        ("connection.nijenhuis_implied", "(nabla_X phi)Y = -g(X,Y)xi + eta(Y)X implies N_phi = 2 d eta (x) xi"),
        ("connection.eta_R_horizontal", "eta(R(X,Y)Z) = 0 for horizontal X,Y,Z"),
        ("connection.nabla_xi_R", "(nabla_xi R)(X,Y,Z) = 0 for horizontal X,Y,Z"),
        ("connection.phi_sym_iii", "phi^2((nabla_X R)(Y,Z,W)) = 0 for horizontal X,Y,Z,W"),
        ("connection.phi_sym_iv", "(nabla_X R)(Y,Z,W) = (g(X,Y)g(phiZ,W) - ...)xi + eta(Y)(...) + eta(Z)(...) + eta(W)(...)"),
        ("connection.tilde_torsion", "T~(X,Y) = 2 d eta(X,Y) xi for horizontal X,Y"),
        ("connection.tilde_parallel", "nabla~ phi = nabla~ xi = nabla~ eta = nabla~ g = 0"),
        ("connection.tilde_curvature_routes", "R~ = R - A(X,A(Y,Z)) + A(Y,A(X,Z)) + A(A(X,Y),Z) - A(A(Y,X),Z) = Nomizu(Lambda + A)"),
        ("connection.tilde_nabla_routes", "(nabla~_V R~) = nabla_V R + A(V,R) - R(A(V,.),.,.) - ... = derivation of R~"),
        ("connection.phi_sym_v", "nabla~ R~ = 0"),
        ("connection.tilde_symmetry", "s = -1 on ker eta, +1 on xi preserves T~ and R~"),
        ("connection.phi_sym_coherence", "verdicts of phi-symmetry conditions iii, iv, v agree"),
        ("connection.local_symmetry", "nabla R = 0 implies constant curvature -1"),
    ],
    "fibration": [
        ("fibration.base_structure", "I = phi|n, I^2 = id, g_bar(IX,IY) = -g_bar(X,Y)"),
        ("fibration.omega", "Omega(X,Y) = g_bar(X,IY) closed, nondegenerate, eigenspaces Lagrangian"),
        ("fibration.connection_lift", "nabla_X Y - (1/2)eta([X,Y])xi = phi^2(nabla_X Y)"),
        ("fibration.base_connection", "Koszul on (n, g_bar) = phi^2(Lambda) on n"),
        ("fibration.base_curvature", "-[[X,Y]_h,Z] = R(X,Y,Z) + g(Z,phiY)phiX - g(Z,phiX)phiY - 2g(phiX,Y)phiZ"),
        ("fibration.base_curvature_generic", "phi^2 of the lifted base curvature formula equals the unwrapped form"),
        ("fibration.base_riemann", "g_bar(R_bar(X,Y)Z,W) has Riemann symmetries"),
        ("fibration.base_symmetric", "nabla_bar R_bar = 0 = phi^2((nabla_X R)(Y,Z,W))"),
        ("fibration.integrability", "N_I(X,Y) = 0"),
        ("fibration.base_parity", "s_bar = -id preserves I, g_bar, R_bar"),
    ],
}

CHECKS = {cid: (stage, anchor) for stage in STAGES for cid, anchor in _REGISTRY[stage]}
CHECK_IDS = tuple(CHECKS)


@dataclass
class Report:
    instance: dict
    results: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    structure: Optional[ParaSasakiStructure] = None
    base: Optional[dict] = None

    def record(self, res: CheckResult) -> None:
        if res.check_id not in CHECKS:
            raise KeyError(f"unregistered check {res.check_id}")
        if res.check_id in self.results:
            raise KeyError(f"check {res.check_id} recorded twice")
        self.results[res.check_id] = res

    def stage_ok(self, stage: str) -> bool:
        return all(r.status != FAIL for cid, r in self.results.items() if CHECKS[cid][0] == stage)

    def skip_rest(self, note: str) -> None:
        for cid in CHECK_IDS:
            if cid not in self.results:
                self.results[cid] = not_applicable(cid, note)

    @property
    def ordered(self) -> list[CheckResult]:
        return [self.results[cid] for cid in CHECK_IDS if cid in self.results]

    @property
    def ok(self) -> bool:
        return not any(r.status == FAIL for r in self.results.values())

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, NOT_RUN: 0}
        for r in self.results.values():
            out[r.status] += 1
        return out

    def statuses(self) -> dict:
        return {r.check_id: r.status for r in self.ordered}

    def to_json(self) -> dict:
        checks = []
        for r in self.ordered:
            stage, anchor = CHECKS[r.check_id]
            checks.append({
                "id": r.check_id,
                "stage": stage,
                "anchor": anchor,
                "status": r.status,
                "witness": jsonable(r.witness),
                "note": r.note,
            })
        data = {
            "instance": jsonable(self.instance),
            "checks": checks,
            "summary": self.counts(),
            "outputs": jsonable(self.outputs),
            "timing": self.timing,
        }
        if self.base is not None:
            data["base"] = self.base
        return data


def _lie_witness(exc: LieAlgebraError, labels) -> dict:
    w = exc.witness
    out = {"message": str(exc)}
    if isinstance(exc, JacobiViolation) and w is not None:
        i, j, l, k, v = w
        out.update({"i": i, "j": j, "l": l, "k": k, "tuple": [labels[i], labels[j], labels[l]],
                    "component": labels[k], "value": format_scalar(v)})
    elif w is not None:
        out["index"] = [int(x) for x in w]
    return out


def _vec(g, v) -> dict:
    return {"label": g.label(v), "coords": to_strings(v)}


def _run_algebra(raw: RawInstance, rep: Report):
    labels = raw.labels
    try:
        g = validate_algebra(raw.c, labels)
    except AntisymmetryViolation as exc:
        rep.record(failed("algebra.antisymmetry", _lie_witness(exc, labels)))
        return None
    except JacobiViolation as exc:
        rep.record(passed("algebra.antisymmetry"))
        rep.record(failed("algebra.jacobi", _lie_witness(exc, labels)))
        return None
    rep.record(passed("algebra.antisymmetry"))
    rep.record(passed("algebra.jacobi"))
    ok, wit = is_invariant_form(g, g.killing)
    rep.record(flag_check("algebra.killing_invariant", ok,
                          None if ok else {"zxy": [labels[i] for i in wit]}))
    if raw.form is None:
        rep.record(not_applicable("algebra.form_invariant", "no invariant pairing supplied"))
    else:
        F = raw.form
        ok, wit = is_invariant_form(g, F)
        sym = is_symmetric(F)
        nondeg = rank(F) == g.dim
        rep.record(flag_check(
            "algebra.form_invariant", ok and sym and nondeg,
            {"invariant": ok, "symmetric": sym, "nondegenerate": nondeg,
             "zxy": None if ok else [labels[i] for i in wit]},
        ))
    tag = None
    if raw.complex_structure is None:
        rep.record(not_applicable("algebra.complex_structure", "no complex structure supplied"))
    else:
        try:
            tag = check_complex_structure(g, raw.complex_structure)
            rep.record(passed("algebra.complex_structure"))
        except NotComplexStructure as exc:
            rep.record(failed("algebra.complex_structure", _lie_witness(exc, labels)))
    return g, tag


_AXIOM_IDS = {
    "I": "system.I",
    "II": "system.II",
    "Symmetric": "system.symmetric",
    "III": "system.III",
    "IV": "system.IV",
    "EigenDim": "system.eigendim",
    "Nondegenerate": "system.nondegenerate",
}


def _run_system(raw: RawInstance, g, tag, rep: Report, scale):
    try:
        system = verify_system(g, raw.sigma, raw.I, raw.inner, form=raw.form,
                               complex_structure=tag, blocks=raw.blocks, name=raw.name)
    except DimensionError as exc:
        raise InputError(str(exc)) from exc
    except LieAlgebraError as exc:
        rep.record(failed("system.involution", _lie_witness(exc, raw.labels)))
        return None
    except AxiomViolation as exc:
        rep.record(passed("system.involution"))
        bad = {}
        for tag_name, wit, msg in exc.violations:
            cid = _AXIOM_IDS.get(tag_name)
            if cid and cid not in bad:
                bad[cid] = failed(cid, {"axiom": tag_name, "witness": wit, "message": msg})
        for cid, _ in _REGISTRY["system"][1:-1]:
            rep.record(bad.get(cid) or passed(cid))
        rep.record(not_applicable("system.omega_antisym", "axioms failed"))
        return None
    if scale is not None:
        from .symmsys import scale_system

        system = scale_system(system, scale)
    rep.record(passed("system.involution"))
    for cid, _ in _REGISTRY["system"][1:-1]:
        rep.record(passed(cid))
    om = system.omega()
    labs = [g.label(v) for v in system.n.basis]
    rep.record(tensor_check("system.omega_antisym", om + om.T, labs, names=("X", "Y")))
    rep.outputs["dims"] = {"g": g.dim, "h": system.h.dim, "n": system.n.dim}
    rep.outputs["inner_signature"] = list(signature(system.inner))
    rep.outputs["flavor"] = system.flavor
    return system


def _run_center(system, rep: Report):
    g = system.algebra
    try:
        Z = find_Z(system)
    except SymmetricSystemError as exc:
        rep.record(failed("center.Z", {"error": type(exc).__name__, "message": str(exc)}))
        return None
    rep.record(passed("center.Z"))
    rep.outputs["Z"] = _vec(g, Z)
    bzz = Z @ system.killing @ Z
    rep.record(flag_check("center.BZZ", bzz == system.n.dim,
                          {"B(Z,Z)": format_scalar(bzz), "dim n": system.n.dim},
                          note=f"B(Z,Z) = {format_scalar(bzz)}"))
    try:
        A = find_A(system, system.ambient_form)
    except SymmetricSystemError as exc:
        rep.record(failed("center.A", {"error": type(exc).__name__, "message": str(exc)}))
        return None
    rep.record(passed("center.A", note=f"F = {system.flavor}"))
    rep.outputs["A"] = _vec(g, A)
    try:
        cd = decompose_A(system, A, Z)
    except SymmetricSystemError as exc:
        rep.record(failed("center.decomposition", {"error": type(exc).__name__, "message": str(exc)}))
        return None
    rep.record(passed("center.decomposition", note=f"centre of h has dimension {cd.center_dim}"))
    rep.outputs["lambda"] = cd.lam
    rep.outputs["mu"] = cd.mu
    rep.outputs["center_dim"] = cd.center_dim
    if cd.block_lambdas is not None:
        rep.outputs["block_lambdas"] = list(cd.block_lambdas)
    if system.complex_structure is not None and cd.mu is not None:
        recon = cd.lam * Z + cd.mu * (system.complex_structure.endo @ Z)
        rep.record(flag_check("center.complex_pair", is_zero(recon - A),
                              {"residual": to_strings(recon - A)}))
    else:
        rep.record(not_applicable("center.complex_pair", "no complex structure on the centre"))
    return cd


def _run_structure(system, cd, rep: Report, alt: bool, alpha_override):
    g = system.algebra
    try:
        ksel = select_k(system, cd)
    except ConstructionError as exc:
        rep.record(failed("structure.k", {"error": type(exc).__name__, "message": str(exc)}))
        return None
    rep.record(passed("structure.k", note=f"dim k = {ksel.k.dim}"))
    try:
        Ct = select_C_tilde(system, cd, ksel, alt=alt)
    except ConstructionError as exc:
        rep.record(failed("structure.C_tilde", {"error": type(exc).__name__, "message": str(exc)}))
        return None
    rep.record(passed("structure.C_tilde"))
    rep.outputs["C_tilde"] = _vec(g, Ct)
    if ksel.C is not None:
        rep.outputs["C"] = _vec(g, ksel.C)

    computed = compute_alpha(system, cd, Ct)
    closed = alpha_closed_form(system, cd, Ct)
    if closed is None:
        rep.record(passed("structure.alpha", note=f"alpha = 1/(2 F(A,C~)) = {format_scalar(computed)}"))
    else:
        rep.record(flag_check("structure.alpha", closed == computed,
                              {"1/(2F(A,C~))": format_scalar(computed),
                               "1/(2 lambda dim n)": format_scalar(closed)}))
    alpha = computed if alpha_override is None else Q(alpha_override)
    rep.outputs["alpha"] = alpha
    if alpha_override is not None:
        rep.outputs["alpha_override"] = True
    try:
        st = build_structure(system, cd, ksel, Ct, alpha)
    except ConstructionError as exc:
        rep.record(failed("structure.reductive", {"error": type(exc).__name__, "message": str(exc)}))
        return None
    rep.record(passed("structure.reductive"))
    for r in structure_checks(st):
        rep.record(r)
    rep.outputs["dims"]["k"] = ksel.k.dim
    rep.outputs["dims"]["m"] = st.dim
    rep.outputs["metric_signature"] = list(signature(st.g))
    rep.structure = st
    return st


def run_pipeline(
    raw: RawInstance,
    alt_tiebreak: bool = False,
    scale=None,
    alpha_override=None,
    descriptor: Optional[dict] = None,
) -> Report:
    """Run every stage on ``raw`` and collect the report.

    Raises :class:`InputError` only for malformed input; mathematical
    failures are recorded as failed checks.
    """
    t0 = time.perf_counter()
    rep = Report(instance=descriptor or {"name": raw.name, "dim": len(raw.labels)})
    if alt_tiebreak:
        rep.instance["alt_tiebreak"] = True
    if scale is not None:
        rep.instance["scale"] = format_scalar(Q(scale))

    def gate(stage: str) -> bool:
        if rep.stage_ok(stage):
            return True
        rep.skip_rest(f"skipped: {stage} stage failed")
        return False

    def run():
        out = _run_algebra(raw, rep)
        if out is None or not gate("algebra"):
            return
        system = _run_system(raw, *out, rep, scale)
        if system is None or not gate("system"):
            return
        cd = _run_center(system, rep)
        if cd is None or not gate("center"):
            return
        st = _run_structure(system, cd, rep, alt_tiebreak, alpha_override)
        if st is None or not gate("structure"):
            return
        conn, results = connection_checks(st)
        for r in results:
            rep.record(r)
        rep.outputs["calibration"] = conn.calibration
        if not gate("connection"):
            return
        for r in fibration_checks(st, conn):
            rep.record(r)
        rep.base = base_report(st, conn)

    run()
    stage_failed = next((CHECKS[r.check_id][0] for r in rep.ordered if r.status == FAIL), None)
    rep.skip_rest(f"skipped: {stage_failed} stage failed" if stage_failed else "skipped")
    rep.timing = {"seconds": f"{time.perf_counter() - t0:.3f}"}
    return rep


def structure_json(st: ParaSasakiStructure) -> dict:
    """Serialized (phi, xi, eta, g, alpha, lambda, mu) of a built structure."""
    g = st.system.algebra
    cd = st.center
    return jsonable({
        "name": st.system.name,
        "basis": list(st.labels),
        "m_basis": {"index_order": "[a][i] = e_i-component of the a-th basis vector of m",
                    "data": st.m_basis},
        "phi": {"index_order": "[o][a] = component o of phi(e_a)", "data": st.phi},
        "xi": {"index_order": "[a]", "data": st.xi},
        "eta": {"index_order": "[a]", "data": st.eta},
        "g": {"index_order": "[a][b]", "data": st.g},
        "alpha": st.alpha,
        "lambda": cd.lam,
        "mu": cd.mu,
        "Z": _vec(g, cd.Z),
        "A": _vec(g, cd.A),
        "C_tilde": _vec(g, st.C_tilde),
        "flavor": st.form_used,
    })


__all__ = [
    "STAGES",
    "CHECKS",
    "CHECK_IDS",
    "Report",
    "run_pipeline",
    "structure_json",
]
