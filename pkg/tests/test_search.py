import json
import math
from fractions import Fraction

import pytest

from nearcoll.combinatorics import ball_volume
from nearcoll.hashing import decode_message, encode_message, hash_n
from nearcoll.search import (
    MaxRunsExceeded,
    SearchConfig,
    Strategy,
    bench,
    birthday_search,
    find_near_collision,
    run_once,
    verify_pair,
)


def test_config_derivations():
    assert SearchConfig(32, 4, "trunc-opt").truncated_bits == 11
    assert SearchConfig(32, 4, "trunc-opt").k == 21
    assert SearchConfig(32, 4, "trunc-2e1").truncated_bits == 9
    assert SearchConfig(32, 4, "trunc-plain").k == 28
    code = SearchConfig(32, 4, "code")
    assert code.radius == 2 and code.k == 24
    assert SearchConfig(32, 3, "code").radius == 2
    assert SearchConfig(32, 4, "trunc-2e1").success_probability == Fraction(1, 2)
    assert SearchConfig(32, 4, "trunc-opt").success_probability == Fraction(ball_volume(11, 4), 2048)
    assert SearchConfig(24, 2, "code").success_probability == 1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=32, eps=4, strategy="trunc-fixed", mu=40),
        dict(n=32, eps=4, strategy="trunc-fixed"),
        dict(n=80, eps=2, strategy="trunc-plain"),
        dict(n=12, eps=2, strategy="trunc-opt"),
        dict(n=32, eps=0, strategy="code"),
        dict(n=32, eps=2, engine="pollard"),
        dict(n=32, eps=2, seed=-1),
        dict(n=32, eps=2, max_runs=0),
        dict(n=32, eps=2, strategy="bogus"),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


def test_run_once_truncation_fixed():
    cfg = SearchConfig(24, 8, "trunc-fixed", mu=8, seed=3)
    for flavor in range(5):
        res = run_once(cfg, flavor)
        if not res.has_pair:
            continue
        assert res.m != res.m_star
        assert res.digest.value >> 8 == res.digest_star.value >> 8
        assert res.distance <= 8
        assert decode_message(res.m)[1:] == (flavor, 0)


def test_run_once_code_radius():
    cfg = SearchConfig(20, 2, "code", R=1)
    for flavor in range(5):
        res = run_once(cfg, flavor)
        if res.has_pair:
            assert verify_pair(res.m, res.m_star, 20, 2).valid


def test_engines_agree_on_pair():
    outs = [run_once(SearchConfig(28, 3, "trunc-opt", engine=e, seed=11), 4) for e in ("floyd", "brent", "nivasch")]
    assert len({(o.m, o.m_star) for o in outs}) == 1
    assert len({o.queries for o in outs}) == 1


@pytest.mark.parametrize("strategy", [s.value for s in Strategy])
def test_find_report_contents(strategy):
    cfg = SearchConfig(28, 4, strategy, mu=6 if strategy == "trunc-fixed" else None, seed=5)
    rep = find_near_collision(cfg)
    assert rep.m != rep.m_star and rep.distance <= 4
    assert verify_pair(rep.m, rep.m_star, 28, 4).distance == rep.distance
    assert rep.queries == sum(rep.queries_per_run) and rep.runs == len(rep.flavors) == len(rep.queries_per_run)
    assert rep.evaluations >= rep.queries
    assert rep.flavors == [(5 + i) % 2**32 for i in range(rep.runs)]
    assert hash_n(bytes.fromhex(rep.m), 28).hex() == rep.digest
    doc = json.loads(rep.to_json())
    for key in ("strategy", "n", "eps", "m", "m_star", "digest", "digest_star", "distance", "runs", "queries", "flavors", "seed"):
        assert key in doc
    assert doc["m"] == doc["m"].lower()


def test_determinism():
    cfg = SearchConfig(30, 3, "trunc-opt", seed=123, engine="nivasch")
    assert find_near_collision(cfg).to_json() == find_near_collision(cfg).to_json()


def test_flavor_wraps_at_32_bits():
    cfg = SearchConfig(24, 4, "trunc-2e1", seed=2**32 - 1)
    rep = find_near_collision(cfg)
    assert rep.flavors[0] == 2**32 - 1
    if rep.runs > 1:
        assert rep.flavors[1] == 0


def test_max_runs_exceeded():
    # trunc-fixed with a wide drop and tiny eps: success needs a full collision on 20 dropped bits
    cfg = SearchConfig(32, 0, "trunc-fixed", mu=20, max_runs=3)
    with pytest.raises(MaxRunsExceeded) as err:
        find_near_collision(cfg)
    assert err.value.runs == 3
    assert err.value.expected_runs == pytest.approx(2**20)
    assert "expected about" in str(err.value)


def test_default_run_limit():
    assert SearchConfig(32, 4, "trunc-2e1").run_limit == 128
    assert SearchConfig(32, 2, "code").run_limit == 64


def brute_near_pair_count(n, eps, count, seed):
    digests = [hash_n(encode_message(seed, 0, i), n).value for i in range(count)]
    for j in range(count):
        for i in range(j):
            if (digests[i] ^ digests[j]).bit_count() <= eps:
                return j + 1
    return None


@pytest.mark.parametrize("n,eps,seed", [(16, 0, 1), (20, 1, 2), (24, 3, 3), (24, 2, 9)])
def test_birthday_matches_brute_force(n, eps, seed):
    rep = birthday_search(n, eps, seed=seed)
    assert rep.queries == brute_near_pair_count(n, eps, rep.queries, seed)
    v = verify_pair(rep.m, rep.m_star, n, eps)
    assert v.valid and v.distance == rep.distance


def test_birthday_limits():
    with pytest.raises(ValueError):
        birthday_search(48, 2)
    with pytest.raises(RuntimeError):
        birthday_search(32, 0, max_messages=10)


def test_verify_pair():
    m = encode_message(1, 0)
    with pytest.raises(ValueError):
        verify_pair(m, m, 32, 3)
    target = hash_n(m, 12).value
    # find a message at distance exactly 3 by brute force at n = 12
    for i in range(1, 1 << 16):
        other = encode_message(i + 1, 7)
        d = (hash_n(other, 12).value ^ target).bit_count()
        if d == 3:
            break
    res = verify_pair(m, other, 12, 2)
    assert not res.valid and res.distance == 3
    assert verify_pair(m.hex(), other.hex(), 12, 3).valid


def test_bench_small():
    stats = bench(SearchConfig(24, 2, "trunc-2e1", seed=1), trials=1)
    assert stats.trials == 1 and stats.stddev == 0 and stats.success_rate == 1
    stats = bench(SearchConfig(24, 2, "code", seed=1), trials=20)
    assert len(set(stats.seeds)) == 20
    assert stats.expected == pytest.approx(math.sqrt(math.pi * 2**SearchConfig(24, 2, "code").k / 2))
    assert 0.5 < stats.ratio < 2
    with pytest.raises(ValueError):
        bench(SearchConfig(24, 2), trials=0)


@pytest.mark.slow
def test_bench_code_n30():
    stats = bench(SearchConfig(30, 4, "code", seed=4), trials=100)
    assert 0.75 <= stats.ratio <= 1.33
