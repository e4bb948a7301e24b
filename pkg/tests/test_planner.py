import json
import math

import pytest

from nearcoll.combinatorics import ball_volume, log2_int, optimal_mu_exact
from nearcoll.planner import (
    METHODS,
    Method,
    cx_A,
    cx_B,
    cx_C,
    cx_D,
    cx_E,
    cx_plain,
    estimate,
    format_pretty,
    lower_bound_violations,
    render_table1,
    render_table3,
    round1,
    table1_csv,
    table3_csv,
    tables_json,
)

# published complexity table: eps -> {n: (A, B, C, D, E)}
TABLE3 = {
    1: {160: (79.5, 79.4, 76.3, 81.9, 76.3), 256: (127.5, 127.4, 124.0, 130.4, 124.0), 512: (255.5, 255.4, 251.5, 258.9, 251.5)},
    2: {160: (78.5, 78.5, 73.2, 76.5, 76.3), 256: (126.5, 126.5, 120.5, 124.0, 124.0), 512: (254.5, 254.5, 247.5, 251.5, 251.5)},
    3: {160: (77.5, 77.5, 70.3, 77.5, 73.2), 256: (125.5, 125.5, 117.3, 125.4, 120.5), 512: (253.5, 253.5, 243.8, 253.4, 247.5)},
    4: {160: (76.5, 76.4, 67.7, 74.0, 73.2), 256: (124.5, 124.4, 114.3, 121.0, 120.5), 512: (252.5, 252.4, 240.3, 248.0, 247.5)},
    5: {160: (75.5, 75.2, 65.2, 74.0, 70.3), 256: (123.5, 123.2, 111.5, 121.7, 117.3), 512: (251.5, 251.2, 237.0, 249.1, 243.8)},
    6: {160: (74.5, 74.1, 62.8, 71.5, 70.3), 256: (122.5, 122.1, 108.8, 118.5, 117.3), 512: (250.5, 250.1, 233.8, 245.0, 243.8)},
    7: {160: (73.5, 72.9, 60.6, 71.3, 67.7), 256: (121.5, 120.9, 106.2, 118.5, 114.3), 512: (249.5, 248.9, 230.7, 245.5, 240.3)},
    8: {160: (72.5, 71.7, 58.5, 69.5, 67.7), 256: (120.5, 119.7, 103.7, 116.0, 114.3), 512: (248.5, 247.7, 227.7, 242.0, 240.3)},
}


@pytest.mark.parametrize("eps", range(1, 9))
@pytest.mark.parametrize("n", [160, 256, 512])
def test_table3_golden(n, eps):
    got = tuple(float(round1(estimate(m, n, eps).log2_queries)) for m in METHODS)
    assert all(abs(g - e) <= 0.05 for g, e in zip(got, TABLE3[eps][n]))


@pytest.mark.parametrize(
    "func,n,eps,value",
    [
        (cx_plain, 160, 4, 78.0),
        (cx_plain, 256, 6, 125.0),
        (cx_plain, 40, 0, 20.0),
        (cx_A, 160, 2, 78.5),
        (cx_A, 256, 4, 124.5),
        (cx_A, 512, 6, 250.5),
        (cx_B, 160, 1, 79.4),
        (cx_B, 256, 5, 123.2),
        (cx_B, 512, 8, 247.7),
        (cx_C, 160, 2, 73.2),
        (cx_C, 256, 8, 103.7),
        (cx_C, 512, 1, 251.5),
        (cx_D, 160, 2, 76.5),
        (cx_D, 160, 3, 77.5),
        (cx_D, 160, 5, 74.0),
        (cx_E, 160, 3, 73.2),
        (cx_E, 256, 1, 124.0),
        (cx_E, 512, 7, 240.3),
    ],
)
def test_examples(func, n, eps, value):
    assert float(round1(func(n, eps).log2_queries)) == value


def test_params_recorded():
    assert cx_B(160, 1).params == {"mu": 2}
    assert cx_B(512, 8).params == {"mu": 25}
    assert cx_D(160, 6).params == {"R": 3, "ell": 5, "r": 2}


def test_odd_D_closed_form():
    # (160, 3): one code for R = 2 with two blocks of 63; failure iff both blocks give distance 2
    p2 = 63 * 62 / 4096
    assert cx_D(160, 3).log2_queries == pytest.approx(74 + math.log2(1 / (1 - p2 * p2)), abs=1e-12)


def test_float_oracle_for_exponents():
    for n in (160, 256, 512):
        for eps in range(1, 9):
            mu = optimal_mu_exact(eps).mode
            sb = sum(math.comb(mu, i) for i in range(eps + 1))
            assert cx_B(n, eps).log2_queries == pytest.approx((n + mu) / 2 - math.log2(sb), abs=1e-9)
            sc = sum(math.comb(n, i) for i in range(eps + 1))
            assert cx_C(n, eps).log2_queries == pytest.approx(n / 2 - math.log2(sc) / 2, abs=1e-9)


@pytest.mark.parametrize(
    "func,n,eps",
    [(cx_plain, 10, 10), (cx_A, 10, 5), (cx_A, 10, 0), (cx_B, 3, 2), (cx_C, 8, 8), (cx_D, 10, 0), (cx_E, 10, 5), (cx_E, 10, 0)],
)
def test_preconditions(func, n, eps):
    with pytest.raises(ValueError):
        func(n, eps)


def test_bound_E_message():
    with pytest.raises(ValueError, match="eps must satisfy eps < n/2 for bound E"):
        cx_E(10, 9)


def test_dominance_of_A_over_plain():
    for n in (64, 160, 256):
        assert cx_A(n, 1).log2_queries == cx_plain(n, 1).log2_queries
        for eps in range(2, 20):
            assert cx_A(n, eps).log2_queries < cx_plain(n, eps).log2_queries


def test_B_is_optimal_over_mu():
    for eps in range(1, 101):
        best = cx_B(1000, eps).log2_queries
        for mu in range(1, 4 * eps + 9):
            other = (1000 + mu) / 2 - log2_int(ball_volume(mu, eps))
            assert best <= other + 1e-12


def test_monotone_in_eps():
    for n in (160, 256, 512):
        for m in METHODS:
            vals = [estimate(m, n, e).log2_queries for e in range(1, 9)]
            if m is Method.D:
                # odd eps pays a repetition factor on top of the eps+1 code
                evens = vals[1::2]
                assert all(a >= b for a, b in zip(evens, evens[1:]))
                assert all(vals[i] >= vals[i + 1] for i in range(0, 8, 2))
            else:
                assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_lower_bound_ordering():
    assert lower_bound_violations([160, 256, 512], range(1, 9)) == []


def test_table1_rows():
    rows = render_table1([1, 2, 3, 4, 8, 9, 10, 98, 99, 100])
    assert [r["mu"] for r in rows] == [2, 5, 8, 11, 25, 28, 32, 332, 335, 339]
    assert [r["mu_star"] for r in rows] == [0, 4, 7, 11, 24, 28, 31, 332, 335, 339]


def test_round_half_up():
    assert str(round1(0.25)) == "0.3"
    assert str(round1(76.5)) == "76.5"
    assert str(round1(2.05)) == "2.0"  # binary 2.05 is slightly below the half


def test_csv_and_json_rendering():
    t3 = render_table3([160, 256, 512], range(1, 9))
    text = table3_csv(t3, [160, 256, 512])
    lines = text.strip().split("\n")
    assert len(lines) == 9
    assert lines[0].split(",")[:3] == ["eps", "n160_A", "n160_B"]
    for line in lines[1:]:
        cells = line.split(",")
        eps = int(cells[0])
        vals = [float(c) for c in cells[1:]]
        assert len(vals) == 15
        assert vals == [v for n in (160, 256, 512) for v in TABLE3[eps][n]]
    t1 = render_table1(range(1, 5))
    assert table1_csv(t1).splitlines()[1] == "1,2,0"
    doc = json.loads(tables_json(t1, t3, [160, 256, 512]))
    assert doc["table3"][1]["n"]["160"]["D"] == pytest.approx(76.5)
    assert "table3" not in json.loads(tables_json(t1, None))
    pretty = format_pretty(t1, None)
    assert "log2" not in pretty and pretty == format_pretty(t1, None)
