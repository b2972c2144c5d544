"""Instance families: tight worst-case equilibria, the vanishing-bound family, random instances."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .mechanism import BidProfile, Instance, validate_instance
from .scalar import INF

DEFAULT_EPS = Fraction(1, 10000)


class FamilyError(ValueError):
    pass


def tight_ratio(s: int, x: Fraction) -> Fraction:
    """Limit welfare ratio of the tight family with ``s`` slots and top-slot bonus ``x``."""
    return (s - 1 + x) / ((1 + x) * (s - 1 + x) + s + x)


def smallest_s(t: Fraction) -> int:
    s = 2
    while Fraction(s - 1, 2 * s - 1) < t:
        s += 1
    return s


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def _approx_sqrt(q: Fraction, digits: int = 12) -> Fraction:
    scale = 10 ** digits
    return Fraction(math.isqrt(q.numerator * scale * scale // q.denominator), scale)


@dataclass(frozen=True)
class TightInstanceSpec:
    t: Fraction
    s: int
    x: Fraction
    eps: Fraction = DEFAULT_EPS
    exact: bool = True  # False when x is a rational stand-in for an irrational root

    @property
    def achieved_t(self) -> Fraction:
        return tight_ratio(self.s, self.x)

    @property
    def deviation(self) -> Fraction:
        return abs(self.achieved_t - self.t)


def solve_s_x(t: Fraction, s: Optional[int] = None, digits: int = 12) -> tuple:
    """Return ``(s, x, exact)`` with ``tight_ratio(s, x) == t`` when ``exact``.

    ``s`` defaults to the smallest admissible value. ``x`` is the nonnegative
    root of ``t x^2 + (t(s+1) - 1) x + t(2s-1) - (s-1) = 0``; when the
    discriminant is not a rational square, a truncated rational root is
    returned with ``exact=False``.
    """
    t = Fraction(t)
    if not (0 < t < Fraction(1, 2)):
        raise FamilyError(f"target t = {t} must lie in (0, 1/2)")
    if s is None:
        s = smallest_s(t)
    elif s < 2 or Fraction(s - 1, 2 * s - 1) < t:
        raise FamilyError(f"s = {s} needs s >= 2 and (s-1)/(2s-1) >= t")
    b = t * (s + 1) - 1
    c = t * (2 * s - 1) - (s - 1)
    disc = b * b - 4 * t * c
    root = _exact_sqrt(disc)
    if root is not None:
        return s, (-b + root) / (2 * t), True
    x = (-b + _approx_sqrt(disc, digits)) / (2 * t)
    return s, max(x, Fraction(0)), False


def tight_spec(t, eps=DEFAULT_EPS, s: Optional[int] = None) -> TightInstanceSpec:
    s, x, exact = solve_s_x(Fraction(t), s)
    return TightInstanceSpec(Fraction(t), s, x, Fraction(eps), exact)


def tight_instance(spec: TightInstanceSpec) -> tuple:
    """Build ``(instance, bids, limit ratio)`` for the tight family.

    ``s`` auctions with discounts ``(1+x, 1, ..., 1)`` and ``2s`` bidders. In
    each of the first ``s-1`` auctions, the group-one bidder owning it bids
    ``eps`` and bidder ``s-1`` (0-based) bids inf with a value of only
    ``eps``, pushing the owner to the second slot for free. In the last
    auction the first group bids ``1+eps`` with zero value, using up their ROI
    slack so the second group cannot profitably enter.
    """
    s, x, eps = spec.s, Fraction(spec.x), Fraction(spec.eps)
    if s < 2 or x < 0 or eps <= 0:
        raise FamilyError(f"invalid tight spec: s={s}, x={x}, eps={eps}")
    n, m = 2 * s, s
    discounts = tuple(tuple([1 + x] + [Fraction(1)] * (s - 1)) for _ in range(m))
    values = [[Fraction(0)] * m for _ in range(n)]
    bids: list = [[Fraction(0)] * m for _ in range(n)]
    last, spoiler = m - 1, s - 1
    values[0][0] = (1 + eps) * (1 + x)
    for i in range(1, s - 1):
        values[i][i] = 1 + eps
    for j in range(s - 1):
        values[spoiler][j] = eps
        bids[j][j] = eps
        bids[spoiler][j] = INF
    for i in range(s, n):
        values[i][last] = Fraction(1)
    for i in range(s):
        bids[i][last] = 1 + eps
    inst = validate_instance(Instance(n, m, s, tuple(map(tuple, values)), discounts))
    return inst, BidProfile(tuple(map(tuple, bids))), spec.achieved_t


def poa_zero_family(delta) -> Instance:
    """One auction, two slots with discounts ``(1, delta)``, two unit-value bidders."""
    delta = Fraction(delta)
    if not (0 < delta <= 1):
        raise FamilyError(f"delta = {delta} must lie in (0, 1]")
    return validate_instance(Instance(2, 1, 2, ((Fraction(1),), (Fraction(1),)), ((Fraction(1), delta),)))


def random_instance(
    seed: int,
    n: int,
    m: int,
    s: int,
    max_value: int = 10,
    value_denominator: int = 4,
    smoothness: Fraction = Fraction(0),
    discount_denominator: int = 12,
    zero_percent: int = 0,
) -> Instance:
    """Seeded random instance with sorted discount rows normalized to ``d[j][0] == 1``.

    ``smoothness`` in [0, 1] is a floor on every discount: 1 gives constant
    rows, 0 lets lower slots drop to 0. Values are multiples of
    ``1/value_denominator`` in ``[0, max_value]``; each is forced to 0 with
    probability ``zero_percent / 100``. Only ``random.Random`` with
    integer draws is used, so output is identical across platforms.
    """
    if n < 1 or m < 1 or s < 1:
        raise FamilyError("dimensions must be positive")
    smoothness = Fraction(smoothness)
    rng = random.Random(seed)
    rows = []
    for _ in range(m):
        raw = sorted((Fraction(rng.randint(0, discount_denominator), discount_denominator) for _ in range(s - 1)), reverse=True)
        row = [Fraction(1)] + [smoothness + (1 - smoothness) * d for d in raw]
        rows.append(tuple(row))

    def draw() -> Fraction:
        v = Fraction(rng.randint(0, max_value * value_denominator), value_denominator)
        return Fraction(0) if rng.randint(0, 99) < zero_percent else v

    values = tuple(tuple(draw() for _ in range(m)) for _ in range(n))
    return validate_instance(Instance(n, m, s, values, tuple(rows)))
