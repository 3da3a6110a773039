"""Check results and helpers that turn residual tensors into verdicts."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import first_nonzero, format_scalar, to_strings

PASS = "pass"
FAIL = "fail"
NOT_RUN = "not_run"


@dataclass
class CheckResult:
    check_id: str
    status: str
    witness: Optional[dict] = None
    note: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == PASS


def passed(check_id: str, note: str | None = None) -> CheckResult:
    return CheckResult(check_id, PASS, None, note)


def failed(check_id: str, witness: dict, note: str | None = None) -> CheckResult:
    return CheckResult(check_id, FAIL, witness, note)


def not_applicable(check_id: str, note: str) -> CheckResult:
    return CheckResult(check_id, NOT_RUN, None, note)


def first_violation(residual, n_lead: int | None = None):
    """Locate the first nonzero entry of a residual tensor.

    The leading ``n_lead`` axes index basis tuples and any remaining axes hold
    output components.  Returns ``(tuple_index, residual_entry)`` or None.
    """
    residual = np.asarray(residual, dtype=object)
    bad = first_nonzero(residual)
    if bad is None:
        return None
    if n_lead is None:
        n_lead = residual.ndim
    lead = tuple(bad[:n_lead])
    return lead, residual[lead]


def tensor_check(
    check_id: str,
    residual,
    labels: Sequence[str],
    n_lead: int | None = None,
    names: Sequence[str] | None = None,
    note: str | None = None,
) -> CheckResult:
    """Pass iff the residual vanishes; otherwise name the offending basis tuple."""
    hit = first_violation(residual, n_lead)
    if hit is None:
        return passed(check_id, note)
    lead, value = hit
    names = names or [f"v{i + 1}" for i in range(len(lead))]
    witness = {
        "tuple": {name: labels[i] for name, i in zip(names, lead)},
        "residual": to_strings(value) if isinstance(value, np.ndarray) else format_scalar(value),
    }
    return failed(check_id, witness, note)


def flag_check(check_id: str, ok: bool, witness: dict | None = None, note: str | None = None) -> CheckResult:
    if ok:
        return passed(check_id, note)
    return failed(check_id, witness or {"detail": note or "condition violated"}, note)


__all__ = [
    "PASS",
    "FAIL",
    "NOT_RUN",
    "CheckResult",
    "passed",
    "failed",
    "not_applicable",
    "first_violation",
    "tensor_check",
    "flag_check",
]
