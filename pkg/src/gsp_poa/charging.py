"""Constructive per-auction charging certificates.

For one auction and a fixed bid profile, a certificate shows that proxy values
and payments together recover ``opt_j`` along the tradeoff points of
:mod:`gsp_poa.bounds`. Bidders are relabelled by value rank. The top-value
bidder's phantom slot decides the case:

* case ``"A"``: it would take slot 0. Every rank is covered by its own proxy
  value plus payment "mass points" charged along diagonals of the
  (column, row) triangle of differenced discounts.
* case ``"B"``: it would land in slot ``k`` (0-based, ``k == s`` means no
  slot). Ranks ``0..k-1`` are covered by the top bidder's proxy value and the
  payments of slots ``0..k-2``; ranks ``k..s-1`` reuse the diagonal scheme on
  columns ``k-1`` onward.

A mass point ``(c, w)`` with ``w >= c`` carries ``d_w - d_{w+1}`` units at
price equal to the bid ranked right below slot ``c``; column ``c`` sums to the
slot-``c`` payment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .mechanism import BidProfile, Instance, check_bids, opt_stats, phantom_slot, rank_by, run_gsp

__all__ = [
    "CertificateError",
    "LedgerEntry",
    "MassPoint",
    "Charge",
    "ChargingCertificate",
    "phantom_slot",
    "build_certificate",
    "verify_certificate",
    "check_certificate",
]


class CertificateError(ValueError):
    """Malformed certificate, or an auction with ``opt_j == 0``."""


@dataclass(frozen=True)
class LedgerEntry:
    label: str
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


@dataclass(frozen=True)
class MassPoint:
    column: int
    row: int
    mass: Fraction
    price: Fraction


@dataclass(frozen=True)
class Charge:
    rank: int
    bidder: int
    value: Fraction
    points: tuple  # MassPoints

    @property
    def amount(self) -> Fraction:
        return sum((p.mass * p.price for p in self.points), Fraction(0))


@dataclass(frozen=True)
class ChargingCertificate:
    auction: int
    s: int
    case: str
    k: int  # size of the first group; 0 in case A
    alpha: Fraction
    q: tuple  # tradeoff point used by the first group; (0, 0) in case A
    r: tuple
    opt: Fraction
    total_proxy_value: Fraction
    total_payment: Fraction
    residual_from_column: int
    charges: tuple
    ledger: tuple


def build_certificate(inst: Instance, bids: BidProfile, j: int) -> ChargingCertificate:
    check_bids(inst, bids)
    opt = opt_stats(inst)
    opt_j = opt.opt_per_auction[j]
    if opt_j == 0:
        raise CertificateError(f"auction {j}: opt_j is 0, nothing to charge")
    outcome = run_gsp(inst, bids)
    s, n = inst.s, inst.n
    col = bids.column(j)
    by_value = opt.value_ranking[j]
    by_bid = rank_by(col)
    top = min(s, n)

    def d(k: int) -> Fraction:
        return inst.d(j, k)

    prices = [col[by_bid[c + 1]] if c + 1 < n else Fraction(0) for c in range(s)]
    slot_pay = [outcome.payment_table[by_bid[c]][j] if c < n else Fraction(0) for c in range(s)]
    vals = [inst.v(by_value[r], j) for r in range(top)]
    kappa = [phantom_slot(inst, bids, j, by_value[r]) for r in range(top)]
    pvals = [vals[r] * d(kappa[r]) for r in range(top)]
    contrib = [vals[r] * d(r) for r in range(top)]

    ledger: list = []
    charges: list = []
    prefix = [Fraction(0)]
    for c in range(s):
        prefix.append(prefix[-1] + d(c))

    if kappa[0] == 0:
        case, k, alpha, q = "A", 0, Fraction(0), (Fraction(0), Fraction(0))
        offset = 0
    else:
        case, k = "B", kappa[0]
        offset = k - 1
        alpha = sum(contrib[:k], Fraction(0)) / opt_j
        q = (d(k) / prefix[k], prefix[k - 1] / prefix[k])
        for c in range(k - 1):
            ledger.append(LedgerEntry(f"B: bid below slot {c} >= top value", prices[c], vals[0]))
        ledger.append(LedgerEntry(
            "B: top bidder proxy value >= alpha * q_x * opt", pvals[0], alpha * q[0] * opt_j))
        ledger.append(LedgerEntry(
            "B: first-group proxy value >= alpha * q_x * opt", sum(pvals[:k], Fraction(0)), alpha * q[0] * opt_j))
        ledger.append(LedgerEntry(
            f"B: payments of slots 0..{k - 2} >= alpha * q_y * opt",
            sum(slot_pay[: k - 1], Fraction(0)), alpha * q[1] * opt_j))

    residual = range(k, top)
    for r in residual:
        if kappa[r] <= r:
            ledger.append(LedgerEntry(f"rank {r}: proxy value >= opt share", pvals[r], contrib[r]))
            continue
        points = []
        for t in range(kappa[r] - r):
            c, w = offset + t, r + t
            points.append(MassPoint(c, w, d(w) - d(w + 1), prices[c]))
            ledger.append(LedgerEntry(f"rank {r}: price of mass point ({c},{w}) >= value", prices[c], vals[r]))
        ch = Charge(r, by_value[r], vals[r], tuple(points))
        charges.append(ch)
        ledger.append(LedgerEntry(f"rank {r}: proxy value + charge >= opt share", pvals[r] + ch.amount, contrib[r]))

    res_pval = sum((pvals[r] for r in residual), Fraction(0))
    res_pay = sum(slot_pay[offset:], Fraction(0))
    res_opt = sum((contrib[r] for r in residual), Fraction(0))
    charged = sum((ch.amount for ch in charges), Fraction(0))
    ledger.append(LedgerEntry(f"charges fit in payments of slots {offset}..{s - 1}", res_pay, charged))
    ledger.append(LedgerEntry("residual proxy value + payments >= (1 - alpha) * opt", res_pval + res_pay, res_opt))

    if res_opt == 0 or res_pval + res_pay == 0:
        r_pt = (Fraction(1), Fraction(0))
    else:
        r_pt = (res_pval / (res_pval + res_pay), res_pay / (res_pval + res_pay))
    total_pval = sum((_proxy(inst, bids, j, i) for i in range(n)), Fraction(0))
    total_pay = sum((outcome.payment_table[i][j] for i in range(n)), Fraction(0))
    if case == "A":
        ledger.append(LedgerEntry("A: proxy value + payment >= opt", total_pval + total_pay, opt_j))

    return ChargingCertificate(
        auction=j,
        s=s,
        case=case,
        k=k,
        alpha=alpha,
        q=q,
        r=r_pt,
        opt=opt_j,
        total_proxy_value=total_pval,
        total_payment=total_pay,
        residual_from_column=offset,
        charges=tuple(charges),
        ledger=tuple(ledger),
    )


def _proxy(inst: Instance, bids: BidProfile, j: int, i: int) -> Fraction:
    return inst.v(i, j) * inst.d(j, phantom_slot(inst, bids, j, i))


def check_certificate(cert: ChargingCertificate) -> list:
    """Return a list of human-readable problems; empty means the certificate verifies."""
    problems = []
    for e in cert.ledger:
        if not isinstance(e, LedgerEntry) or not isinstance(e.lhs, Fraction) or not isinstance(e.rhs, Fraction):
            raise CertificateError(f"malformed ledger entry {e!r}")
    if cert.case not in ("A", "B"):
        raise CertificateError(f"unknown case {cert.case!r}")
    if not (0 <= cert.alpha <= 1):
        problems.append(f"alpha = {cert.alpha} outside [0, 1]")
    r1, r2 = cert.r
    if r1 < 0 or r2 < 0 or r1 + r2 != 1:
        problems.append(f"r = {cert.r} not on the 1-simplex")
    if cert.case == "A" and (cert.k != 0 or cert.alpha != 0):
        problems.append("case A must have k = 0 and alpha = 0")
    if cert.case == "B" and not (1 <= cert.k <= cert.s):
        problems.append(f"case B needs 1 <= k <= s, got k = {cert.k}")
    if cert.opt <= 0:
        problems.append("opt must be positive")
    for e in cert.ledger:
        if not e.holds:
            problems.append(f"ledger: {e.label}: {e.lhs} < {e.rhs}")

    seen = set()
    for ch in cert.charges:
        for p in ch.points:
            key = (p.column, p.row)
            if key in seen:
                problems.append(f"mass point {key} charged twice")
            seen.add(key)
            if not (0 <= p.column <= p.row < cert.s):
                problems.append(f"mass point {key} outside the triangle")
            if p.column < cert.residual_from_column:
                problems.append(f"mass point {key} left of column {cert.residual_from_column}")
            if p.price < ch.value:
                problems.append(f"mass point {key} priced {p.price} below value {ch.value}")

    a, opt = cert.alpha, cert.opt
    need_x = (a * cert.q[0] + (1 - a) * r1) * opt
    need_y = (a * cert.q[1] + (1 - a) * r2) * opt
    if cert.total_proxy_value < need_x:
        problems.append(f"aggregate proxy value {cert.total_proxy_value} < {need_x}")
    if cert.total_payment < need_y:
        problems.append(f"aggregate payment {cert.total_payment} < {need_y}")
    return problems


def verify_certificate(cert: ChargingCertificate) -> bool:
    return not check_certificate(cert)
