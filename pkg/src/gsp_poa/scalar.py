"""Exact scalars: Fractions plus a single +infinity token for bids.

Finite quantities are always ``fractions.Fraction``. The only non-finite value
ever admitted is ``INF`` (``math.inf``), and only as a bid. Comparisons between
``Fraction`` and ``math.inf`` are exact in Python, so the token can flow through
sorting and ``<``/``>=`` checks without loss; multiplication must go through
:func:`scale` so that a zero discount annihilates it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

Scalar = Fraction
ExtScalar = Union[Fraction, float]  # float only ever means INF


class ParseError(ValueError):
    """A numeric literal could not be read as an exact scalar."""


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


def scale(d: Fraction, b: ExtScalar) -> ExtScalar:
    """Return ``d * b`` with ``0 * inf == 0`` and ``d * inf == inf`` for ``d > 0``."""
    if is_inf(b):
        return Fraction(0) if d == 0 else INF
    return d * b


def to_scalar(raw, *, allow_inf: bool = False, field: str = "value") -> ExtScalar:
    """Parse an int, decimal string, ``"p/q"`` string or (bids only) ``"inf"``.

    Floats are refused: they are not exact literals once decoded. JSON number
    tokens should be decoded with ``parse_float=Fraction`` upstream.
    """
    if isinstance(raw, bool):
        raise ParseError(f"{field}: booleans are not numbers")
    if isinstance(raw, Fraction):
        val = raw
    elif isinstance(raw, int):
        val = Fraction(raw)
    elif isinstance(raw, float):
        if raw == INF and allow_inf:
            return INF
        raise ParseError(f"{field}: binary floats are not exact, use a string like '1/3'")
    elif isinstance(raw, str):
        text = raw.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            if not allow_inf:
                raise ParseError(f"{field}: 'inf' is only allowed for bids")
            return INF
        try:
            val = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{field}: cannot parse {raw!r} as an exact number") from exc
    else:
        raise ParseError(f"{field}: unsupported literal {raw!r}")
    if val < 0:
        raise ParseError(f"{field}: negative value {val}")
    return val


def fmt(x: ExtScalar) -> str:
    """Lossless text form: ``"p/q"``, ``"p"`` or ``"inf"``."""
    if is_inf(x):
        return "inf"
    return str(Fraction(x))


def fmt_approx(x: ExtScalar, digits: int = 6) -> str:
    if is_inf(x):
        return "inf"
    return f"{float(x):.{digits}g}"
