"""ROI-constrained value maximizers: deviation menus, best responses, equilibrium checks.

A bidder's options in one auction (others' bids fixed) are finitely many:
which slot to take, each at a fixed payment. Choosing one option per auction
so that total payment stays within total value is a multiple-choice knapsack
with item weight ``payment - value`` and budget 0. Randomized deviations only
matter through per-auction marginals, so the mixed best response is the LP
relaxation of that knapsack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .mechanism import BidProfile, Instance, run_gsp, slot_against
from .scalar import INF, ExtScalar, is_inf, scale


@dataclass(frozen=True)
class MenuItem:
    auction: int
    slot: Optional[int]  # None means lose
    value: Fraction
    payment: ExtScalar
    witness: Optional[ExtScalar]  # bid realizing the item; None if no bid does

    @property
    def weight(self) -> Fraction:
        return self.payment - self.value

    @property
    def finite(self) -> bool:
        return not is_inf(self.payment)


def _candidate_bids(opposing) -> list:
    """One bid from every region of bid space that the opposing bids carve out."""
    finite = sorted({b for b in opposing if not is_inf(b)}, reverse=True)
    if not finite:
        return [Fraction(0)]
    cands = [finite[0] + 1]
    for idx, u in enumerate(finite):
        cands.append(u)
        if idx + 1 < len(finite):
            cands.append((u + finite[idx + 1]) / 2)
        elif u > 0:
            cands.append(Fraction(0))
    return cands


def deviation_menu(inst: Instance, j: int, i: int, bids: BidProfile) -> list:
    """Every (slot, payment) bidder ``i`` can reach in auction ``j`` against the others.

    Slots blocked by exact ties with smaller-index opponents are absent. The
    menu always ends with a "lose" item; when no bid actually loses (fewer
    opponents than slots) its witness is None. It is then dominated by the
    zero bid, which reaches a slot at payment 0.
    """
    col = bids.column(j)
    opposing = sorted((b for o, b in enumerate(col) if o != i), reverse=True)
    v = inst.v(i, j)
    by_slot: dict = {}
    lose_witness = None
    for c in _candidate_bids(opposing):
        k = slot_against(i, c, col)
        if k >= inst.s:
            if lose_witness is None:
                lose_witness = c
            continue
        if k not in by_slot:
            dk = inst.d(j, k)
            below = opposing[k] if k < len(opposing) else Fraction(0)
            by_slot[k] = MenuItem(j, k, v * dk, scale(dk, below), c)
    if opposing and is_inf(opposing[0]) and 0 not in by_slot:
        # beating an infinite bid costs d * inf
        by_slot[0] = MenuItem(j, 0, v * inst.d(j, 0), INF, None)
    items = [by_slot[k] for k in sorted(by_slot)]
    items.append(MenuItem(j, None, Fraction(0), Fraction(0), lose_witness))
    return items


def _menus(inst: Instance, i: int, bids: BidProfile) -> list:
    return [deviation_menu(inst, j, i, bids) for j in range(inst.m)]


def _undominated(items) -> list:
    """Drop infinite-payment items and items another item weakly beats on both axes."""
    finite = [it for it in items if it.finite]
    keep = []
    for a_idx, a in enumerate(finite):
        dominated = False
        for b_idx, b in enumerate(finite):
            if a_idx == b_idx:
                continue
            if b.value >= a.value and b.weight <= a.weight:
                if b.value > a.value or b.weight < a.weight or b_idx < a_idx:
                    dominated = True
                    break
        if not dominated:
            keep.append(a)
    return keep


def _realize(inst: Instance, i: int, bids: BidProfile, items) -> tuple:
    row = list(bids.bids[i])
    for it in items:
        if it.witness is None:
            raise AssertionError(f"selected item in auction {it.auction} has no realizing bid")
        row[it.auction] = it.witness
    return tuple(row)


@dataclass(frozen=True)
class PureResponse:
    bids: tuple  # bidder's full bid row
    value: Fraction
    payment: Fraction
    items: tuple


def best_response_pure(inst: Instance, i: int, bids: BidProfile, menus=None) -> PureResponse:
    """Exact best deterministic deviation by depth-first branch and bound."""
    menus = menus if menus is not None else _menus(inst, i, bids)
    pruned = [_undominated(menu) for menu in menus]
    order = sorted(range(inst.m), key=lambda j: (len(pruned[j]), j))
    # suffix bounds over the search order
    max_val_after = [Fraction(0)] * (inst.m + 1)
    min_w_after = [Fraction(0)] * (inst.m + 1)
    for pos in range(inst.m - 1, -1, -1):
        menu = pruned[order[pos]]
        max_val_after[pos] = max_val_after[pos + 1] + max(it.value for it in menu)
        min_w_after[pos] = min_w_after[pos + 1] + min(it.weight for it in menu)

    best_val: Optional[Fraction] = None
    best_pick: list = []
    chosen: list = []

    def dfs(pos: int, val: Fraction, w: Fraction) -> None:
        nonlocal best_val, best_pick
        if w + min_w_after[pos] > 0:
            return
        if best_val is not None and val + max_val_after[pos] <= best_val:
            return
        if pos == inst.m:
            best_val = val
            best_pick = list(chosen)
            return
        for it in pruned[order[pos]]:
            chosen.append(it)
            dfs(pos + 1, val + it.value, w + it.weight)
            chosen.pop()

    dfs(0, Fraction(0), Fraction(0))
    assert best_val is not None  # zero bids everywhere are always feasible
    picks = sorted(best_pick, key=lambda it: it.auction)
    pay = sum((it.payment for it in picks), Fraction(0))
    return PureResponse(_realize(inst, i, bids, picks), best_val, pay, tuple(picks))


@dataclass(frozen=True)
class MixedResponse:
    distributions: tuple  # per auction: tuple of (probability, MenuItem)
    value: Fraction
    payment: Fraction
    multiplier: Fraction  # lambda at which the selection was certified

    @property
    def fractional_auctions(self) -> list:
        return [j for j, dist in enumerate(self.distributions) if len(dist) > 1]


def _upper_hull(items) -> list:
    """LP-efficient items of one auction, from cheapest weight up to the top value."""
    pts = sorted((it for it in items if it.finite), key=lambda it: (it.weight, -it.value))
    hull: list = []
    last_w = None
    for it in pts:
        if it.weight == last_w:
            continue  # same weight, lower value
        last_w = it.weight
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (b.weight - a.weight) * (it.value - a.value) - (b.value - a.value) * (it.weight - a.weight)
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(it)
    top = max(range(len(hull)), key=lambda idx: (hull[idx].value, -idx))
    return hull[: top + 1]


def best_response_mixed(inst: Instance, i: int, bids: BidProfile, menus=None) -> MixedResponse:
    """LP relaxation of the bidder's knapsack, solved by a multiplier sweep.

    Raising the multiplier lambda from 0 only changes the per-auction argmax of
    ``value - lambda * (payment - value)`` at slopes of the upper hull of each
    menu in the (weight, value) plane. Walking those breakpoints in decreasing
    slope order and mixing across the last one to make the budget tight gives
    an optimal solution with at most one randomized auction.
    """
    menus = menus if menus is not None else _menus(inst, i, bids)
    hulls = [_upper_hull(menu) for menu in menus]
    current = [0] * inst.m
    budget = -sum((h[0].weight for h in hulls), Fraction(0))
    edges = []
    for j, h in enumerate(hulls):
        for pos in range(len(h) - 1):
            dw = h[pos + 1].weight - h[pos].weight
            dv = h[pos + 1].value - h[pos].value
            edges.append((dv / dw, j, pos, dw))
    edges.sort(key=lambda e: (-e[0], e[1], e[2]))

    dists: list = [((Fraction(1), h[0]),) for h in hulls]
    multiplier = Fraction(0)
    for eff, j, pos, dw in edges:
        if dw <= budget:
            budget -= dw
            current[j] = pos + 1
            dists[j] = ((Fraction(1), hulls[j][pos + 1]),)
            continue
        multiplier = eff
        theta = budget / dw
        if theta > 0:
            dists[j] = ((1 - theta, hulls[j][pos]), (theta, hulls[j][pos + 1]))
        break

    value = sum((p * it.value for dist in dists for p, it in dist), Fraction(0))
    payment = sum((p * it.payment for dist in dists for p, it in dist), Fraction(0))
    return MixedResponse(tuple(dists), value, payment, multiplier)


@dataclass(frozen=True)
class BidderReport:
    bidder: int
    value: Fraction
    payment: Fraction
    best_response_value: Fraction
    gap: Fraction
    roi_slack: Fraction


@dataclass(frozen=True)
class EquilibriumReport:
    bidders: tuple
    tolerance: Fraction
    verdict: bool
    failing: tuple = field(default=())


def verify_equilibrium(inst: Instance, bids: BidProfile, tol: Fraction = Fraction(0)) -> EquilibriumReport:
    """Check every bidder is ROI-feasible and no randomized deviation gains more than ``tol``."""
    out = run_gsp(inst, bids)
    reports = []
    failing = []
    for i in range(inst.n):
        val = out.bidder_value(i)
        pay = out.bidder_payment(i)
        br = best_response_mixed(inst, i, bids)
        rep = BidderReport(i, val, pay, br.value, br.value - val, val - pay)
        reports.append(rep)
        if rep.gap > tol or rep.roi_slack < 0:
            failing.append(i)
    return EquilibriumReport(tuple(reports), Fraction(tol), not failing, tuple(failing))
