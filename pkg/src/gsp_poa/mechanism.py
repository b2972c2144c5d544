"""Instances, bid profiles and the GSP allocation/payment rule.

Bidders, auctions and slots are 0-indexed throughout the code. Slot ``s``
(one past the last real slot) means "no slot"; its discount is 0.
Ties in both the bid ranking and the value ranking go to the smaller bidder
index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .scalar import INF, ExtScalar, is_inf, scale


class InstanceError(ValueError):
    """An instance or bid profile violates its invariants."""


class PaymentUndefined(ValueError):
    """Two or more +inf bids in one auction make a payment infinite."""


@dataclass(frozen=True)
class Instance:
    n: int
    m: int
    s: int
    values: tuple  # n x m, Fractions
    discounts: tuple  # m x s, Fractions

    def d(self, j: int, k: int) -> Fraction:
        """Discount of slot ``k`` in auction ``j``; 0 past the last slot."""
        if k >= self.s:
            return Fraction(0)
        return self.discounts[j][k]

    def v(self, i: int, j: int) -> Fraction:
        return self.values[i][j]


@dataclass(frozen=True)
class BidProfile:
    bids: tuple  # n x m, Fractions or INF

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.bids)

    def with_bid(self, i: int, j: int, b: ExtScalar) -> "BidProfile":
        rows = [list(r) for r in self.bids]
        rows[i][j] = b
        return BidProfile(tuple(tuple(r) for r in rows))

    def with_row(self, i: int, row: Sequence[ExtScalar]) -> "BidProfile":
        rows = list(self.bids)
        rows[i] = tuple(row)
        return BidProfile(tuple(rows))


def make_instance(values, discounts) -> Instance:
    """Build and validate an instance from nested sequences of numbers."""
    vals = tuple(tuple(Fraction(x) for x in row) for row in values)
    disc = tuple(tuple(Fraction(x) for x in row) for row in discounts)
    n = len(vals)
    m = len(disc)
    s = len(disc[0]) if disc else 0
    return validate_instance(Instance(n, m, s, vals, disc))


def make_bids(rows) -> BidProfile:
    out = []
    for row in rows:
        out.append(tuple(INF if (isinstance(b, float) and is_inf(b)) or b == "inf" else Fraction(b) for b in row))
    return BidProfile(tuple(out))


def validate_instance(raw: Instance) -> Instance:
    if raw.n < 1 or raw.m < 1 or raw.s < 1:
        raise InstanceError(f"dimension mismatch: n={raw.n}, m={raw.m}, s={raw.s} must all be >= 1")
    if len(raw.values) != raw.n:
        raise InstanceError(f"dimension mismatch: values has {len(raw.values)} rows, expected n={raw.n}")
    if len(raw.discounts) != raw.m:
        raise InstanceError(f"dimension mismatch: discounts has {len(raw.discounts)} rows, expected m={raw.m}")
    for i, row in enumerate(raw.values):
        if len(row) != raw.m:
            raise InstanceError(f"dimension mismatch: values[{i}] has {len(row)} entries, expected m={raw.m}")
        for j, x in enumerate(row):
            if not isinstance(x, Fraction) or is_inf(x):
                raise InstanceError(f"values[{i}][{j}] must be a finite exact rational")
            if x < 0:
                raise InstanceError(f"negative value: values[{i}][{j}] = {x}")
    for j, row in enumerate(raw.discounts):
        if len(row) != raw.s:
            raise InstanceError(f"dimension mismatch: discounts[{j}] has {len(row)} entries, expected s={raw.s}")
        for k, x in enumerate(row):
            if not isinstance(x, Fraction):
                raise InstanceError(f"discounts[{j}][{k}] must be a finite exact rational")
            if x < 0:
                raise InstanceError(f"negative discount: discounts[{j}][{k}] = {x}")
        if row[0] <= 0:
            raise InstanceError(f"discounts[{j}][0] must be positive, got {row[0]}")
        for k in range(raw.s - 1):
            if row[k] < row[k + 1]:
                raise InstanceError(
                    f"non-monotone discounts in auction {j}: slot {k} has {row[k]} < slot {k + 1} has {row[k + 1]}"
                )
    return raw


def check_bids(inst: Instance, bids: BidProfile) -> None:
    if len(bids.bids) != inst.n or any(len(r) != inst.m for r in bids.bids):
        raise InstanceError(f"bid matrix must be {inst.n} x {inst.m}")
    for i, row in enumerate(bids.bids):
        for j, b in enumerate(row):
            if not (is_inf(b) or isinstance(b, Fraction)):
                raise InstanceError(f"bids[{i}][{j}] must be an exact rational or inf")
            if b < 0:
                raise InstanceError(f"negative bid: bids[{i}][{j}] = {b}")


def rank_by(keys: Sequence[ExtScalar]) -> tuple:
    """Indices sorted by descending key, ties to the smaller index."""
    return tuple(sorted(range(len(keys)), key=lambda i: (-keys[i], i)))


def beats(o: int, bo: ExtScalar, i: int, b: ExtScalar) -> bool:
    """Does bidder ``o`` bidding ``bo`` rank above bidder ``i`` bidding ``b``?"""
    return bo > b or (bo == b and o < i)


def slot_against(i: int, bid: ExtScalar, column: Sequence[ExtScalar]) -> int:
    """Slot (0-based, uncapped) bidder ``i`` gets by bidding ``bid`` against the others in ``column``."""
    return sum(1 for o, bo in enumerate(column) if o != i and beats(o, bo, i, bid))


def phantom_slot(inst: Instance, bids: BidProfile, j: int, i: int) -> int:
    """Slot bidder ``i`` would win in auction ``j`` by bidding its value; ``s`` means none."""
    return min(slot_against(i, inst.v(i, j), bids.column(j)), inst.s)


@dataclass(frozen=True)
class AuctionOutcome:
    ranking: tuple  # per auction: bidder at each position
    slots: tuple  # n x m: slot index, or None when outside the s slots
    value_table: tuple  # n x m
    payment_table: tuple  # n x m

    def bidder_value(self, i: int) -> Fraction:
        return sum(self.value_table[i], Fraction(0))

    def bidder_payment(self, i: int) -> Fraction:
        return sum(self.payment_table[i], Fraction(0))


def run_gsp(inst: Instance, bids: BidProfile) -> AuctionOutcome:
    check_bids(inst, bids)
    n, m, s = inst.n, inst.m, inst.s
    vals = [[Fraction(0)] * m for _ in range(n)]
    pays = [[Fraction(0)] * m for _ in range(n)]
    slots: list = [[None] * m for _ in range(n)]
    ranking = []
    for j in range(m):
        col = bids.column(j)
        if sum(1 for b in col if is_inf(b)) > 1:
            raise PaymentUndefined(f"auction {j}: more than one bidder bids inf")
        order = rank_by(col)
        ranking.append(order)
        for k in range(min(s, n)):
            i = order[k]
            dk = inst.d(j, k)
            nxt = col[order[k + 1]] if k + 1 < n else Fraction(0)
            slots[i][j] = k
            vals[i][j] = inst.v(i, j) * dk
            pays[i][j] = scale(dk, nxt)
    return AuctionOutcome(
        tuple(ranking),
        tuple(tuple(r) for r in slots),
        tuple(tuple(r) for r in vals),
        tuple(tuple(r) for r in pays),
    )


@dataclass(frozen=True)
class OptStats:
    value_ranking: tuple  # per auction
    opt_per_auction: tuple
    opt_total: Fraction


def opt_stats(inst: Instance) -> OptStats:
    ranking = []
    per = []
    for j in range(inst.m):
        order = rank_by([inst.v(i, j) for i in range(inst.n)])
        ranking.append(order)
        per.append(sum((inst.v(order[k], j) * inst.d(j, k) for k in range(min(inst.s, inst.n))), Fraction(0)))
    return OptStats(tuple(ranking), tuple(per), sum(per, Fraction(0)))


def proxy_values(inst: Instance, bids: BidProfile) -> tuple:
    """n x m table of values each bidder would get bidding truthfully in that auction alone."""
    check_bids(inst, bids)
    for j in range(inst.m):
        if sum(1 for b in bids.column(j) if is_inf(b)) > 1:
            raise PaymentUndefined(f"auction {j}: more than one bidder bids inf")
    table = []
    for i in range(inst.n):
        row = []
        for j in range(inst.m):
            row.append(inst.v(i, j) * inst.d(j, phantom_slot(inst, bids, j, i)))
        table.append(tuple(row))
    return tuple(table)


@dataclass(frozen=True)
class WelfareSummary:
    total_value: Fraction
    total_payment: Fraction
    total_proxy_value: Fraction
    opt_total: Fraction
    ratio: Fraction


def welfare_summary(inst: Instance, bids: BidProfile, outcome: Optional[AuctionOutcome] = None) -> WelfareSummary:
    out = outcome if outcome is not None else run_gsp(inst, bids)
    opt = opt_stats(inst).opt_total
    if opt == 0:
        raise InstanceError("optimal welfare is 0; the welfare ratio is undefined")
    total_val = sum((sum(r, Fraction(0)) for r in out.value_table), Fraction(0))
    total_pay = sum((sum(r, Fraction(0)) for r in out.payment_table), Fraction(0))
    total_pval = sum((sum(r, Fraction(0)) for r in proxy_values(inst, bids)), Fraction(0))
    return WelfareSummary(total_val, total_pay, total_pval, opt, total_val / opt)
