"""Exhaustive search for pure equilibria over a bid grid.

The grid only limits which profiles are *examined*. Each candidate is checked
against exact, unrestricted (off-grid, randomized) deviations, so whatever is
reported is a genuine equilibrium of the continuous game.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .autobidder import EquilibriumReport, best_response_mixed, verify_equilibrium
from .bounds import bound_closed_form_value
from .mechanism import BidProfile, Instance, run_gsp, welfare_summary

DEFAULT_MAX_PROFILES = 6 ** 8


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    values: tuple
    max_n: int = 6
    max_m: int = 4
    max_s: int = 4
    max_profiles: int = DEFAULT_MAX_PROFILES

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise SearchError("grid is empty")
        if vals[0] < 0 or any(a >= b for a, b in zip(vals, vals[1:])):
            raise SearchError("grid values must be nonnegative and strictly ascending")


def big_bid(inst: Instance, grid_values) -> Fraction:
    """A finite stand-in for an infinite bid: above every value and grid point."""
    top = max([v for row in inst.values for v in row] + list(grid_values) + [Fraction(0)])
    return top * 2 + 1


@dataclass(frozen=True)
class FoundEquilibrium:
    bids: BidProfile
    report: EquilibriumReport
    ratio: Fraction
    total_value: Fraction
    total_payment: Fraction
    total_proxy_value: Fraction


@dataclass(frozen=True)
class SearchReport:
    equilibria: tuple
    profiles_checked: int
    min_ratio: Optional[Fraction]
    bound: Optional[Fraction]
    dominates: Optional[bool]  # None when there is nothing to compare


def profile_count(inst: Instance, grid: GridSpec) -> int:
    return len(grid.values) ** (inst.n * inst.m)


def _check_caps(inst: Instance, grid: GridSpec) -> None:
    if inst.n > grid.max_n or inst.m > grid.max_m or inst.s > grid.max_s:
        raise SearchError(
            f"instance n={inst.n}, m={inst.m}, s={inst.s} exceeds caps "
            f"n<={grid.max_n}, m<={grid.max_m}, s<={grid.max_s}"
        )
    count = profile_count(inst, grid)
    if count > grid.max_profiles:
        raise SearchError(f"{count} profiles exceed the cap of {grid.max_profiles}")


def _profile(flat, n: int, m: int) -> BidProfile:
    return BidProfile(tuple(tuple(flat[i * m:(i + 1) * m]) for i in range(n)))


def _scan(inst: Instance, grid_values: tuple, start: int, stop: int) -> list:
    """Flat indices in ``[start, stop)`` whose profiles are exact equilibria."""
    n, m = inst.n, inst.m
    cells = n * m
    cache: dict = {}
    hits = []
    product = itertools.product(grid_values, repeat=cells)
    for idx, flat in enumerate(itertools.islice(product, start, stop), start):
        bids = _profile(flat, n, m)
        out = run_gsp(inst, bids)
        vals = [out.bidder_value(i) for i in range(n)]
        if any(vals[i] < out.bidder_payment(i) for i in range(n)):
            continue
        ok = True
        for i in range(n):
            key = (i, bids.bids[:i] + bids.bids[i + 1:])
            br = cache.get(key)
            if br is None:
                br = best_response_mixed(inst, i, bids).value
                cache[key] = br
            if br > vals[i]:
                ok = False
                break
        if ok:
            hits.append(idx)
    return hits


def _chunks(total: int, parts: int) -> list:
    size = -(-total // parts)
    return [(a, min(a + size, total)) for a in range(0, total, size)]


def enumerate_equilibria(inst: Instance, grid: GridSpec, workers: int = 1) -> SearchReport:
    _check_caps(inst, grid)
    total = profile_count(inst, grid)
    if workers <= 1:
        hits = _scan(inst, grid.values, 0, total)
    else:
        spans = _chunks(total, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_scan, *zip(*[(inst, grid.values, a, b) for a, b in spans]))
            hits = [h for part in parts for h in part]  # map preserves span order

    found = []
    for idx in hits:
        flat = _unrank(idx, grid.values, inst.n * inst.m)
        bids = _profile(flat, inst.n, inst.m)
        report = verify_equilibrium(inst, bids)
        if not report.verdict:
            raise AssertionError(f"profile {idx} passed the scan but failed full verification")
        summary = welfare_summary(inst, bids)
        found.append(FoundEquilibrium(bids, report, summary.ratio, summary.total_value,
                                      summary.total_payment, summary.total_proxy_value))

    bound = bound_closed_form_value(inst)[0] if inst.s >= 2 else None
    min_ratio = min((f.ratio for f in found), default=None)
    dominates = None if (bound is None or min_ratio is None) else min_ratio >= bound
    return SearchReport(tuple(found), total, min_ratio, bound, dominates)


def _unrank(idx: int, values: tuple, cells: int) -> tuple:
    base = len(values)
    digits = []
    for _ in range(cells):
        idx, rem = divmod(idx, base)
        digits.append(values[rem])
    return tuple(reversed(digits))


def empirical_poa(inst: Instance, grid: GridSpec, workers: int = 1) -> Optional[Fraction]:
    """Worst welfare ratio among found equilibria, or None when none exist on the grid."""
    return enumerate_equilibria(inst, grid, workers).min_ratio
