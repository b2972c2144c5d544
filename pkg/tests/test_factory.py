from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsp_poa.autobidder import verify_equilibrium
from gsp_poa.bounds import bound_closed_form_value
from gsp_poa.factory import (
    FamilyError,
    poa_zero_family,
    random_instance,
    smallest_s,
    solve_s_x,
    tight_instance,
    tight_ratio,
    tight_spec,
)
from gsp_poa.mechanism import opt_stats, validate_instance, welfare_summary


@pytest.mark.parametrize("t,s,x", [(F(1, 3), 2, F(0)), (F(2, 5), 3, F(0)), (F(2, 7), 2, F(1))])
def test_solve_exact_roots(t, s, x):
    assert solve_s_x(t) == (s, x, True)
    assert tight_ratio(s, x) == t


def test_x_grows_as_t_shrinks():
    xs = [solve_s_x(t, s=2)[1] for t in (F(1, 4), F(1, 10), F(1, 100), F(1, 1000))]
    assert xs == sorted(xs) and xs[-1] > 900


def test_irrational_root_is_close():
    s, x, exact = solve_s_x(F(1, 4))
    assert not exact and s == 2
    assert abs(tight_ratio(s, x) - F(1, 4)) < F(1, 10**9)


def test_solve_rejects_out_of_range():
    for t in (F(0), F(1, 2), F(3, 4)):
        with pytest.raises(FamilyError):
            solve_s_x(t)
    with pytest.raises(FamilyError):
        solve_s_x(F(2, 5), s=2)


@given(st.fractions(min_value=F(1, 200), max_value=F(49, 100), max_denominator=200))
def test_smallest_s_is_minimal(t):
    s = smallest_s(t)
    assert F(s - 1, 2 * s - 1) >= t
    assert s == 2 or F(s - 2, 2 * s - 3) < t


def test_tight_one_third_shape_and_equilibrium():
    eps = F(1, 10000)
    inst, bids, limit = tight_instance(tight_spec(F(1, 3), eps))
    assert (inst.m, inst.n, inst.s) == (2, 4, 2)
    assert inst.discounts == ((1, 1), (1, 1))
    assert limit == F(1, 3)
    assert verify_equilibrium(inst, bids).verdict
    assert abs(welfare_summary(inst, bids).ratio - F(1, 3)) <= 10 * eps


def test_tight_ratio_converges_linearly():
    def err(eps):
        inst, bids, limit = tight_instance(tight_spec(F(1, 3), eps))
        return abs(welfare_summary(inst, bids).ratio - limit)

    assert err(F(1, 10**4)) >= 9 * err(F(1, 10**5))


def test_tight_two_fifths_bound():
    inst, _, _ = tight_instance(tight_spec(F(2, 5), F(1, 10000)))
    assert bound_closed_form_value(inst)[0] == F(2, 5)


@pytest.mark.parametrize("t", [F(1, 3), F(2, 5), F(2, 7), F(3, 7)])
def test_welfare_is_affine_in_eps(t):
    # numerator and denominator are (limit + c * eps); the slopes match at two eps
    spec = tight_spec(t)
    s, x = spec.s, spec.x
    slopes = []
    for eps in (F(1, 1000), F(1, 10**6)):
        inst, bids, _ = tight_instance(tight_spec(t, eps))
        w = welfare_summary(inst, bids)
        slopes.append(((w.total_value - (s - 1 + x)) / eps, (w.opt_total - ((1 + x) * (s - 1 + x) + s + x)) / eps))
    assert slopes[0] == slopes[1]


@pytest.mark.parametrize("t", [F(1, 3), F(2, 5), F(2, 7), F(3, 7), F(1, 4)])
def test_tight_ratio_at_least_own_bound(t):
    inst, bids, _ = tight_instance(tight_spec(t, F(1, 1000)))
    assert verify_equilibrium(inst, bids).verdict
    assert welfare_summary(inst, bids).ratio >= bound_closed_form_value(inst)[0]


def test_invalid_tight_spec():
    with pytest.raises(FamilyError):
        tight_instance(tight_spec(F(1, 3), F(0)))


@pytest.mark.parametrize("delta,expected", [(F(1), F(1, 3)), (F(1, 10), F(10, 111))])
def test_zero_family_examples(delta, expected):
    assert bound_closed_form_value(poa_zero_family(delta))[0] == expected


def test_zero_family_rejects_out_of_range():
    for delta in (F(0), F(3, 2)):
        with pytest.raises(FamilyError):
            poa_zero_family(delta)


def test_random_is_deterministic():
    assert random_instance(7, 4, 3, 3) == random_instance(7, 4, 3, 3)
    assert random_instance(7, 4, 3, 3) != random_instance(8, 4, 3, 3)


def test_random_full_smoothness_gives_constant_rows():
    inst = random_instance(3, 3, 4, 5, smoothness=F(1))
    assert all(len(set(row)) == 1 for row in inst.discounts)


def test_random_zero_percent():
    inst = random_instance(1, 4, 3, 2, zero_percent=100)
    assert opt_stats(inst).opt_total == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 5), st.integers(1, 6),
       st.fractions(min_value=0, max_value=1, max_denominator=8))
def test_random_always_valid(seed, n, m, s, smooth):
    inst = random_instance(seed, n, m, s, smoothness=smooth)
    assert validate_instance(inst) is inst
    assert all(row[0] == 1 and min(row) >= smooth for row in inst.discounts)
