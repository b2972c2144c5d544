"""Welfare lower bounds from the per-auction (proxy value, payment) tradeoff points.

Each auction ``j`` and slot ``k`` yields a point whose x-coordinate is the
guaranteed share of ``opt_j`` recovered as proxy value and whose y-coordinate
is the share recovered as payment, when the top-value bidder would land one
slot below ``k``. The bound is where the lower-left boundary of the convex
hull of all points meets the diagonal ``x = y``. Two independent routes
compute it: a closed form over (leftmost x-axis point, other point) pairs, and
an exact 2-D hull intersected with the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .mechanism import Instance


class BoundUndefined(ValueError):
    """The closed-form bound ranges over an empty set (single-slot auctions)."""


@dataclass(frozen=True)
class ParetoPoint:
    x: Fraction
    y: Fraction
    auction: int
    slot: int  # 0-based k, i.e. the top-value bidder phantom-lands in slot k + 1

    @property
    def xy(self) -> tuple:
        return (self.x, self.y)


def _prefix(row) -> list:
    out = [Fraction(0)]
    for d in row:
        out.append(out[-1] + d)
    return out


def pareto_points(inst: Instance) -> list:
    pts = []
    for j in range(inst.m):
        pre = _prefix(inst.discounts[j])
        for k in range(inst.s):
            pts.append(ParetoPoint(inst.d(j, k + 1) / pre[k + 1], pre[k] / pre[k + 1], j, k))
    return pts


def _leftmost_top_ratio(inst: Instance) -> int:
    return min(range(inst.m), key=lambda j: (inst.d(j, 1) / inst.d(j, 0), j))


@dataclass(frozen=True)
class EnvelopeWitness:
    hull: tuple  # lower-left boundary, from the y-axis side down to the x-axis side
    endpoints: tuple  # two points (equal when the diagonal hits a vertex)
    weights: tuple  # convex weights on ``endpoints``
    t: Fraction


@dataclass(frozen=True)
class BoundReport:
    closed_form: Fraction
    simplified: Fraction
    j0: int
    argmin: Optional[tuple]  # (j*, k*) of the closed form, 0-based; None when forced to 0
    simplified_argmin: tuple
    envelope: EnvelopeWitness
    agree: bool


def closed_form_terms(inst: Instance) -> list:
    """All (value, j, k) terms of the pairwise closed form, k 0-based in 1..s-1."""
    if inst.s < 2:
        raise BoundUndefined("the closed-form bound needs s >= 2 (its minimum over slots 2..s is empty for s = 1)")
    j0 = _leftmost_top_ratio(inst)
    a1, a2 = inst.d(j0, 0), inst.d(j0, 1)
    terms = []
    for j in range(inst.m):
        pre = _prefix(inst.discounts[j])
        for k in range(1, inst.s):
            before, upto, nxt = pre[k], pre[k + 1], inst.d(j, k + 1)
            num = a2 * before
            den = a1 * before - a1 * nxt + a2 * upto
            if den == 0:
                # only when a2 == 0 and the point sits on the diagonal: 0/0
                continue
            terms.append((num / den, j, k))
    return terms


def bound_closed_form_value(inst: Instance) -> tuple:
    """(bound, j0, argmin) with argmin None when the bound collapses to 0 via a degenerate row."""
    terms = closed_form_terms(inst)
    j0 = _leftmost_top_ratio(inst)
    if inst.d(j0, 1) == 0:
        # the leftmost x-axis point is the origin, which lies on the diagonal
        return Fraction(0), j0, None
    best = min(terms, key=lambda t: (t[0], t[1], t[2]))
    return best[0], j0, (best[1], best[2])


def bound_simplified_value(inst: Instance) -> tuple:
    best = None
    for j in range(inst.m):
        pre = _prefix(inst.discounts[j])
        for k in range(inst.s):
            term = (pre[k] + inst.d(j, k + 1)) / (2 * pre[k + 1])
            if best is None or term < best[0]:
                best = (term, j, k)
    return best[0], (best[1], best[2])


def bound_simplified(inst: Instance) -> Fraction:
    return bound_simplified_value(inst)[0]


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Counter-clockwise hull (Andrew's monotone chain), collinear points dropped.

    Starts at the lexicographically smallest (x, y) vertex and walks the lower
    chain first.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def lower_left_chain(points) -> list:
    """Hull boundary from the lowest leftmost vertex to the leftmost lowest vertex."""
    hull = convex_hull(points)
    ymin = min(p[1] for p in hull)
    chain = []
    for p in hull:
        chain.append(p)
        if p[1] == ymin:
            break
    return chain


def envelope_intersection(points) -> EnvelopeWitness:
    xy = [p.xy if isinstance(p, ParetoPoint) else (Fraction(p[0]), Fraction(p[1])) for p in points]
    if not xy:
        raise ValueError("no points")
    if all(x < y for x, y in xy):
        raise ValueError("no point lies on or right of the diagonal x = y")
    chain = lower_left_chain(xy)
    # x - y strictly increases along the chain (x grows, y shrinks)
    for idx, p in enumerate(chain):
        f_p = p[0] - p[1]
        if f_p == 0:
            return EnvelopeWitness(tuple(chain), (p, p), (Fraction(1), Fraction(0)), p[0])
        if idx + 1 == len(chain):
            break
        q = chain[idx + 1]
        f_q = q[0] - q[1]
        if f_p < 0 < f_q:
            u = f_p / (f_p - f_q)
            t = (1 - u) * p[0] + u * q[0]
            return EnvelopeWitness(tuple(chain), (p, q), (1 - u, u), t)
    raise AssertionError(f"lower-left hull chain {chain} never meets the diagonal")


def bound_closed_form(inst: Instance) -> BoundReport:
    value, j0, argmin = bound_closed_form_value(inst)
    simp, simp_arg = bound_simplified_value(inst)
    env = envelope_intersection(pareto_points(inst))
    return BoundReport(value, simp, j0, argmin, simp_arg, env, env.t == value)
