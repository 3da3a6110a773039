"""JSON input and canonical JSON output.

Matrices use the column convention throughout: entry ``[i][j]`` is the
e_i-component of the image of e_j.  Scalars are canonical rational strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .linalg import format_scalar, parse_scalar, to_strings, zeros


class InputError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True, eq=False)
class RawInstance:
    """Unvalidated input for the pipeline."""

    c: np.ndarray
    labels: tuple
    sigma: np.ndarray
    I: np.ndarray
    inner: np.ndarray
    form: Optional[np.ndarray] = None
    complex_structure: Optional[np.ndarray] = None
    blocks: Optional[tuple] = None
    name: str = ""


def raw_from_system(system) -> RawInstance:
    tag = system.complex_structure
    return RawInstance(
        c=system.algebra.c,
        labels=tuple(system.algebra.labels),
        sigma=system.sigma,
        I=system.I_on_n,
        inner=system.inner,
        form=system.form,
        complex_structure=None if tag is None else tag.endo,
        blocks=system.blocks,
        name=system.name,
    )


def _scalar(v, where: str):
    try:
        return parse_scalar(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad scalar {v!r}") from exc


def _matrix(obj, where: str, shapes) -> np.ndarray:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InputError(f"{where}: expected a list of rows")
    rows = len(obj)
    if any(len(r) != rows for r in obj):
        raise InputError(f"{where}: matrix must be square")
    if rows not in shapes:
        raise InputError(f"{where}: size {rows} not in {sorted(set(shapes))}")
    M = zeros(rows, rows)
    for i, r in enumerate(obj):
        for j, v in enumerate(r):
            M[i, j] = _scalar(v, f"{where}[{i}][{j}]")
    return M


def parse_instance(data: Any) -> RawInstance:
    """Build a :class:`RawInstance` from decoded JSON."""
    if not isinstance(data, dict):
        raise InputError("top level must be an object")
    try:
        dim = data["dim"]
    except KeyError:
        raise InputError("missing 'dim'") from None
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError("'dim' must be a positive integer")
    labels = data.get("basis", [f"e{i + 1}" for i in range(dim)])
    if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(s, str) for s in labels):
        raise InputError("'basis' must list one name per dimension")
    if len(set(labels)) != dim:
        raise InputError("basis names must be distinct")

    c = zeros(dim, dim, dim)
    seen = set()
    for n_entry, entry in enumerate(data.get("brackets", [])):
        where = f"brackets[{n_entry}]"
        if not isinstance(entry, dict) or not {"i", "j", "out"} <= entry.keys():
            raise InputError(f"{where}: needs 'i', 'j' and 'out'")
        i, j, out = entry["i"], entry["j"], entry["out"]
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < dim):
            raise InputError(f"{where}: need integers 0 <= i < j < dim")
        if (i, j) in seen:
            raise InputError(f"{where}: pair ({i}, {j}) listed twice")
        seen.add((i, j))
        if not isinstance(out, dict):
            raise InputError(f"{where}: 'out' must map component index to scalar")
        for k, v in out.items():
            try:
                k = int(k)
            except ValueError:
                raise InputError(f"{where}: bad component index {k!r}") from None
            if not 0 <= k < dim:
                raise InputError(f"{where}: component {k} out of range")
            val = _scalar(v, where)
            c[i, j, k] = val
            c[j, i, k] = -val

    sig = data.get("sigma", data.get("involution"))
    if sig is None:
        raise InputError("missing 'sigma' (the involution)")
    sigma = _matrix(sig, "sigma", (dim,))
    form = None if data.get("form") is None else _matrix(data["form"], "form", (dim,))
    cs = data.get("complex_structure")
    cs = None if cs is None else _matrix(cs, "complex_structure", (dim,))

    any_size = range(1, dim + 1)
    I_obj = data.get("para_complex", data.get("I"))
    if I_obj is None:
        raise InputError("missing 'para_complex' (the endomorphism I)")
    I = _matrix(I_obj, "para_complex", any_size)
    if "metric_on_n" in data:
        inner = _matrix(data["metric_on_n"], "metric_on_n", any_size)
    elif form is not None:
        inner = form
    else:
        raise InputError("missing 'metric_on_n' and no 'form' to restrict")
    blocks = data.get("blocks")
    if blocks is not None:
        if not (isinstance(blocks, list) and all(isinstance(b, int) for b in blocks) and sum(blocks) == dim):
            raise InputError("'blocks' must be integer sizes summing to dim")
        blocks = tuple(blocks)
    return RawInstance(c, tuple(labels), sigma, I, inner, form, cs, blocks, str(data.get("name", "")))


def instance_to_json(raw: RawInstance) -> dict:
    dim = len(raw.labels)
    brackets = []
    for i in range(dim):
        for j in range(i + 1, dim):
            out = {str(k): format_scalar(raw.c[i, j, k]) for k in range(dim) if raw.c[i, j, k] != 0}
            if out:
                brackets.append({"i": i, "j": j, "out": out})
    data = {
        "dim": dim,
        "basis": list(raw.labels),
        "brackets": brackets,
        "sigma": to_strings(raw.sigma),
        "para_complex": to_strings(raw.I),
        "metric_on_n": to_strings(raw.inner),
    }
    if raw.form is not None:
        data["form"] = to_strings(raw.form)
    if raw.complex_structure is not None:
        data["complex_structure"] = to_strings(raw.complex_structure)
    if raw.blocks:
        data["blocks"] = list(raw.blocks)
    if raw.name:
        data["name"] = raw.name
    return data


def jsonable(x):
    """Recursively convert witnesses and outputs to JSON-ready values."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_strings(x)
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    try:
        return format_scalar(x)
    except (TypeError, ValueError):
        return str(x)


def dumps(obj) -> str:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


__all__ = [
    "InputError",
    "RawInstance",
    "raw_from_system",
    "parse_instance",
    "instance_to_json",
    "jsonable",
    "dumps",
    "loads",
]
