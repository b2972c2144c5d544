"""Release gate: one test per acceptance criterion, each printing a PASS/FAIL line."""

import functools
import random
import time
from fractions import Fraction as F

import pytest

from gsp_poa.autobidder import best_response_mixed, best_response_pure, deviation_menu, verify_equilibrium
from gsp_poa.bounds import bound_closed_form, bound_closed_form_value, bound_simplified
from gsp_poa.charging import build_certificate, check_certificate
from gsp_poa.factory import poa_zero_family, random_instance, tight_instance, tight_spec
from gsp_poa.mechanism import make_instance, opt_stats, welfare_summary
from gsp_poa.search import GridSpec, big_bid, enumerate_equilibria

from conftest import record_criterion, seeded_case
from oracles import pairwise_grid, pure_enumeration


def timed(fn):
    start = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - start


def test_criterion_1_closed_form_reproduction():
    inst = make_instance([[1, 1, 1], [1, 1, 1]], [[1, 1, 1]] * 3)
    (closed, simple), secs = timed(lambda: (bound_closed_form_value(inst)[0], bound_simplified(inst)))
    ok = closed == F(2, 5) and simple == F(1, 3) and secs < 1
    assert record_criterion(1, ok, f"closed form {closed}, simplified {simple}, {secs:.3f}s < 1s")


def test_criterion_2_dual_route_agreement():
    def run():
        mismatches = 0
        for seed in range(1000):
            rng = random.Random(seed)
            m, s = rng.randint(1, 5), rng.randint(2, 6)
            smooth = F(rng.randint(0, 4), 4)
            inst = random_instance(seed, 2, m, s, smoothness=smooth, discount_denominator=rng.choice([4, 12, 60]))
            rep = bound_closed_form(inst)
            if rep.envelope.t != rep.closed_form:
                mismatches += 1
        return mismatches

    mismatches, secs = timed(run)
    ok = mismatches == 0 and secs < 30
    assert record_criterion(2, ok, f"{mismatches} mismatches in 1000 instances, {secs:.2f}s < 30s")


def tight_case(t, eps):
    inst, bids, limit = tight_instance(tight_spec(t, eps))
    return inst, bids, limit, verify_equilibrium(inst, bids), welfare_summary(inst, bids)


@functools.lru_cache(maxsize=None)
def criterion_3_runs():
    out = {}
    for t in (F(1, 3), F(2, 5)):
        out[t] = {eps: tight_case(t, eps) for eps in (F(1, 10**4), F(1, 10**5))}
    return out


def test_criterion_3_tight_family():
    runs, secs = timed(criterion_3_runs)
    details = []
    ok = secs < 5
    for t, by_eps in runs.items():
        coarse, fine = F(1, 10**4), F(1, 10**5)
        _, _, limit, rep, w = by_eps[coarse]
        *_, rep_fine, w_fine = by_eps[fine]
        gaps_zero = all(b.gap == 0 for b in rep.bidders + rep_fine.bidders)
        err, err_fine = abs(w.ratio - t), abs(w_fine.ratio - t)
        shrink = err / err_fine if err_fine else None
        ok = ok and limit == t and rep.verdict and rep_fine.verdict and gaps_zero
        ok = ok and err <= 10 * coarse and (shrink is None or shrink >= 9)
        shown = "exact" if shrink is None else f"{float(shrink):.2f}"
        details.append(f"t={t}: |ratio-t|={float(err):.2e}, shrink {shown}")
    assert record_criterion(3, ok, "; ".join(details) + f", {secs:.2f}s < 5s")


def test_criterion_4_certificates():
    def run():
        pairs = checked = failures = 0
        seed = 0
        while pairs < 1000:
            inst, bids = seeded_case(10_000 + seed, max_n=6, max_m=3, max_s=5)
            seed += 1
            per = opt_stats(inst).opt_per_auction
            if not any(x > 0 for x in per):
                continue
            pairs += 1
            for j in range(inst.m):
                if per[j] > 0:
                    checked += 1
                    if check_certificate(build_certificate(inst, bids, j)):
                        failures += 1
        return checked, failures

    (checked, failures), secs = timed(run)
    ok = failures == 0 and secs < 60
    assert record_criterion(4, ok, f"{failures} failures over {checked} certificates from 1000 pairs, {secs:.2f}s < 60s")


# n * m is capped at 8 so each instance has at most 5**8 profiles
TINY_SHAPES = [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (2, 3), (4, 2)]


def tiny_instance(seed):
    rng = random.Random(seed)
    n, m = TINY_SHAPES[seed % len(TINY_SHAPES)]
    discounts = [[F(1), F(rng.randint(3, 12), 12)] for _ in range(m)]
    values = [[F(rng.randint(1, 4)) if rng.random() < 0.5 else F(0) for _ in range(m)] for _ in range(n)]
    if all(v == 0 for row in values for v in row):
        values[0][0] = F(1)
    inst = make_instance(values, discounts)
    points = sorted({v for row in values for v in row if v > 0}, reverse=True)[:3]
    grid = {F(0), *points}
    pad = F(1, 2)
    while len(grid) < 4:
        grid.add(pad)
        pad += 1
    grid.add(big_bid(inst, grid))
    return inst, GridSpec(tuple(sorted(grid)))


@functools.lru_cache(maxsize=None)
def criterion_5_runs():
    return tuple(enumerate_equilibria(*tiny_instance(seed)) for seed in range(50))


@pytest.mark.slow
def test_criterion_5_dominance():
    reports, secs = timed(criterion_5_runs)
    found = sum(len(r.equilibria) for r in reports)
    violations = sum(1 for r in reports for f in r.equilibria if f.ratio < r.bound)
    with_eq = sum(1 for r in reports if r.equilibria)
    ok = violations == 0 and found > 0 and secs < 600
    detail = f"{violations} violations among {found} equilibria in {with_eq}/50 instances, {secs:.1f}s < 600s"
    assert record_criterion(5, ok, detail)


def test_criterion_6_vanishing_family():
    def run():
        return [(d, bound_closed_form_value(poa_zero_family(d))[0]) for d in (F(1), F(1, 10), F(1, 100), F(1, 1000))]

    rows, secs = timed(run)
    ok = secs < 1 and all(v == d / (1 + d + d * d) and v <= d for d, v in rows)
    assert record_criterion(6, ok, ", ".join(f"delta={d}: {v}" for d, v in rows) + f", {secs:.3f}s < 1s")


def test_criterion_7_best_response_oracles():
    def run():
        pure_bad = mixed_bad = 0
        for seed in range(200):
            inst, bids = seeded_case(20_000 + seed, max_n=4, max_m=3, max_s=3)
            i = random.Random(seed).randrange(inst.n)
            menus = [deviation_menu(inst, j, i, bids) for j in range(inst.m)]
            assert len(menus) <= 3 and all(len(menu) <= 4 for menu in menus)
            if best_response_pure(inst, i, bids, menus).value != pure_enumeration(menus):
                pure_bad += 1
            mixed = best_response_mixed(inst, i, bids, menus).value
            grid = pairwise_grid(menus, resolution=1000)
            spread = sum(max(it.value for it in menu) for menu in menus)
            if not grid <= mixed <= grid + spread / 1000:
                mixed_bad += 1
        return pure_bad, mixed_bad

    (pure_bad, mixed_bad), secs = timed(run)
    ok = pure_bad == 0 and mixed_bad == 0 and secs < 60
    assert record_criterion(7, ok, f"pure mismatches {pure_bad}, mixed mismatches {mixed_bad} over 200 menus, {secs:.2f}s < 60s")


@pytest.mark.slow
def test_criterion_8_proxy_inequalities():
    summaries = [w for by_eps in criterion_3_runs().values() for *_, w in by_eps.values()]
    summaries += [f for r in criterion_5_runs() for f in r.equilibria]
    bad = sum(1 for w in summaries if w.total_value < w.total_proxy_value or w.total_value < w.total_payment)
    ok = bad == 0 and len(summaries) > 0
    assert record_criterion(8, ok, f"{bad} violations over {len(summaries)} equilibria")
