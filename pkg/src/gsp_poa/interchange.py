"""JSON interchange for instances and bid profiles.

Top-level keys: ``n``, ``m``, ``s`` (ints), ``discounts`` (m rows of s),
``values`` (n rows of m), optional ``bids`` (n rows of m). Numbers may be JSON
integers, JSON decimals (read exactly), or strings ``"3"``, ``"0.25"``,
``"2/7"``; bids may also be ``"inf"``. Emitted numbers are always strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .mechanism import BidProfile, Instance, InstanceError, check_bids, validate_instance
from .scalar import INF, ParseError, fmt, to_scalar


class InputError(ValueError):
    """Malformed interchange document; the message names the offending field."""


def _matrix(doc: dict, key: str, rows: int, cols: int, allow_inf: bool = False) -> tuple:
    raw = doc.get(key)
    if not isinstance(raw, list) or len(raw) != rows:
        raise InputError(f"{key}: expected a list of {rows} rows")
    out = []
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"{key}[{r}]: expected a list of {cols} numbers")
        try:
            out.append(tuple(to_scalar(x, allow_inf=allow_inf, field=f"{key}[{r}][{c}]") for c, x in enumerate(row)))
        except ParseError as exc:
            raise InputError(str(exc)) from exc
    return tuple(out)


def _dim(doc: dict, key: str) -> int:
    val = doc.get(key)
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise InputError(f"{key}: expected a positive integer, got {val!r}")
    return val


def _const(token: str):
    if token == "Infinity":
        return INF
    raise InputError(f"unsupported JSON constant {token}")


def parse_document(text: str) -> tuple:
    """Return ``(instance, bids or None, document)``."""
    try:
        doc = json.loads(text, parse_float=Fraction, parse_constant=_const)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    n, m, s = _dim(doc, "n"), _dim(doc, "m"), _dim(doc, "s")
    values = _matrix(doc, "values", n, m)
    discounts = _matrix(doc, "discounts", m, s)
    try:
        inst = validate_instance(Instance(n, m, s, values, discounts))
    except InstanceError as exc:
        raise InputError(str(exc)) from exc
    bids = None
    if doc.get("bids") is not None:
        bids = BidProfile(_matrix(doc, "bids", n, m, allow_inf=True))
        check_bids(inst, bids)
    return inst, bids, doc


def load(path: str) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    inst, bids, _ = parse_document(text)
    return inst, bids


def instance_doc(inst: Instance, bids: Optional[BidProfile] = None, extra: Optional[dict] = None) -> dict:
    doc = {
        "n": inst.n,
        "m": inst.m,
        "s": inst.s,
        "discounts": [[fmt(x) for x in row] for row in inst.discounts],
        "values": [[fmt(x) for x in row] for row in inst.values],
    }
    if bids is not None:
        doc["bids"] = [[fmt(x) for x in row] for row in bids.bids]
    if extra:
        doc.update(extra)
    return doc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"
