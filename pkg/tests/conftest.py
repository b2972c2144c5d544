import random
from fractions import Fraction

from hypothesis import strategies as st

from gsp_poa.mechanism import BidProfile, Instance, validate_instance
from gsp_poa.scalar import INF

small_frac = st.builds(Fraction, st.integers(0, 8), st.integers(1, 4))


@st.composite
def discount_rows(draw, m, s):
    rows = []
    for _ in range(m):
        row = sorted(draw(st.lists(small_frac, min_size=s, max_size=s)), reverse=True)
        if row[0] == 0:
            row[0] = Fraction(1)
        rows.append(tuple(row))
    return tuple(rows)


@st.composite
def instances(draw, max_n=5, max_m=3, max_s=4, min_s=1):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    s = draw(st.integers(min_s, max_s))
    values = tuple(tuple(draw(st.lists(small_frac, min_size=m, max_size=m))) for _ in range(n))
    return validate_instance(Instance(n, m, s, values, draw(discount_rows(m, s))))


@st.composite
def bid_profiles(draw, inst, allow_inf=True):
    rows = [list(draw(st.lists(small_frac, min_size=inst.m, max_size=inst.m))) for _ in range(inst.n)]
    if allow_inf:
        for j in range(inst.m):
            if draw(st.booleans()):
                rows[draw(st.integers(0, inst.n - 1))][j] = INF
    return BidProfile(tuple(tuple(r) for r in rows))


@st.composite
def instance_and_bids(draw, allow_inf=True, **kw):
    inst = draw(instances(**kw))
    return inst, draw(bid_profiles(inst, allow_inf=allow_inf))


def seeded_case(seed, max_n=5, max_m=3, max_s=4, inf_rate=0.2):
    """Plain-``random`` counterpart of ``instance_and_bids`` for fixed-count loops."""
    rng = random.Random(seed)
    n, m, s = rng.randint(1, max_n), rng.randint(1, max_m), rng.randint(1, max_s)

    def frac():
        return Fraction(rng.randint(0, 8), rng.randint(1, 4))

    rows = []
    for _ in range(m):
        row = sorted((frac() for _ in range(s)), reverse=True)
        if row[0] == 0:
            row[0] = Fraction(1)
        rows.append(tuple(row))
    values = tuple(tuple(frac() for _ in range(m)) for _ in range(n))
    inst = validate_instance(Instance(n, m, s, values, tuple(rows)))
    bids = [[frac() for _ in range(m)] for _ in range(n)]
    for j in range(m):
        if rng.random() < inf_rate:
            bids[rng.randrange(n)][j] = INF
    return inst, BidProfile(tuple(tuple(r) for r in bids))


ACCEPTANCE_LINES: list = []


def record_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
