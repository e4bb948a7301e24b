"""Memoryless eps-near-collision search and the table-based birthday baseline.

Cost accounting: ``queries`` counts distinct messages hashed along each rho
path (tail + cycle), which is the quantity random-mapping theory predicts to
be sqrt(pi K / 2) on average. ``evaluations`` counts every call to H made by
the cycle finder, including its re-walks; it is always at least ``queries``.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import statistics
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional

import numpy as np

from .combinatorics import ball_volume, optimal_mu_exact
from .covering_code import build_code, success_probability
from .cycle_finder import ENGINE_NAMES, IterationOutcome, find_cycle_hash
from .hashing import Digest, Truncation, encode_message, hash_n

__all__ = [
    "Strategy",
    "SearchConfig",
    "SearchReport",
    "RunResult",
    "VerifyResult",
    "BenchStats",
    "MaxRunsExceeded",
    "run_once",
    "find_near_collision",
    "birthday_search",
    "verify_pair",
    "bench",
    "start_state",
]

U32 = 1 << 32
U64 = 1 << 64


class Strategy(str, enum.Enum):
    TRUNC_PLAIN = "trunc-plain"
    TRUNC_2E1 = "trunc-2e1"
    TRUNC_OPT = "trunc-opt"
    TRUNC_FIXED = "trunc-fixed"
    CODE = "code"


class MaxRunsExceeded(RuntimeError):
    def __init__(self, config: "SearchConfig", runs: int, queries: int):
        self.config = config
        self.runs = runs
        self.queries = queries
        self.expected_runs = config.expected_runs
        super().__init__(
            f"no {config.eps}-near-collision after {runs} runs ({queries} queries); "
            f"expected about {self.expected_runs:.2f} runs per success"
        )


@dataclass(frozen=True)
class SearchConfig:
    n: int
    eps: int
    strategy: Strategy = Strategy.TRUNC_OPT
    mu: Optional[int] = None
    R: Optional[int] = None
    engine: str = "brent"
    seed: int = 0
    max_runs: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not 8 <= self.n <= 256:
            raise ValueError(f"n must be in [8, 256], got {self.n}")
        if not 0 <= self.eps < self.n:
            raise ValueError("need 0 <= eps < n")
        if self.engine not in ENGINE_NAMES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {ENGINE_NAMES}")
        if not 0 <= self.seed < U64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_runs is not None and self.max_runs < 1:
            raise ValueError("max_runs must be positive")
        if self.strategy is Strategy.TRUNC_FIXED and self.mu is None:
            raise ValueError("trunc-fixed needs mu")
        if self.strategy in (Strategy.TRUNC_OPT, Strategy.CODE) and self.eps < 1:
            raise ValueError(f"{self.strategy.value} needs eps >= 1")
        if self.strategy is Strategy.CODE:
            if self.R is not None and self.R < 1:
                raise ValueError("R must be positive")
        elif self.mu is not None and self.mu < 0:
            raise ValueError("mu must be nonnegative")
        k = self.k
        if not 8 <= k <= 64:
            raise ValueError(f"strategy leaves k={k} state bits; need 8 <= k <= 64")

    @property
    def truncated_bits(self) -> Optional[int]:
        s = self.strategy
        if s is Strategy.TRUNC_PLAIN:
            return self.eps
        if s is Strategy.TRUNC_2E1:
            return 2 * self.eps + 1
        if s is Strategy.TRUNC_OPT:
            return optimal_mu_exact(self.eps).mode
        if s is Strategy.TRUNC_FIXED:
            return self.mu
        return None

    @property
    def radius(self) -> Optional[int]:
        if self.strategy is not Strategy.CODE:
            return None
        return self.R if self.R is not None else (self.eps + 1) // 2

    @property
    def k(self) -> int:
        mu = self.truncated_bits
        if mu is not None:
            return self.n - mu
        try:
            return build_code(self.n, self.radius).k
        except ValueError as exc:
            raise ValueError(f"cannot build covering code: {exc}") from None

    @cached_property
    def compressor(self):
        if self.strategy is Strategy.CODE:
            return build_code(self.n, self.radius)
        return Truncation.suffix(self.n, self.truncated_bits)

    @cached_property
    def success_probability(self) -> Fraction:
        """Chance that one run's colliding pair is an eps-near-collision."""
        if self.strategy is Strategy.CODE:
            return success_probability(self.compressor, self.eps)
        mu = self.truncated_bits
        if mu <= self.eps:
            return Fraction(1)
        return Fraction(ball_volume(mu, self.eps), 1 << mu)

    @property
    def expected_runs(self) -> float:
        return float(1 / self.success_probability)

    @property
    def expected_queries(self) -> float:
        """Mean rho length sqrt(pi 2^k / 2) times the expected number of runs."""
        return math.sqrt(math.pi * 2.0**self.k / 2) * self.expected_runs

    @property
    def run_limit(self) -> int:
        if self.max_runs is not None:
            return self.max_runs
        return max(64, math.ceil(64 * self.expected_runs))

    def describe(self) -> dict:
        out = {"strategy": self.strategy.value, "k": self.k}
        if self.strategy is Strategy.CODE:
            out.update(R=self.radius, code=self.compressor.to_text())
        else:
            out["mu"] = self.truncated_bits
        return out


@dataclass(frozen=True)
class RunResult:
    flavor: int
    outcome: IterationOutcome
    m: Optional[bytes] = None
    m_star: Optional[bytes] = None
    digest: Optional[Digest] = None
    digest_star: Optional[Digest] = None

    @property
    def has_pair(self) -> bool:
        return self.m is not None

    @property
    def distance(self) -> Optional[int]:
        return None if self.digest is None else self.digest.distance(self.digest_star)

    @property
    def queries(self) -> int:
        return self.outcome.rho


@dataclass(frozen=True)
class SearchReport:
    strategy: str
    n: int
    eps: int
    engine: str
    seed: int
    m: str
    m_star: str
    digest: str
    digest_star: str
    distance: int
    runs: int
    queries: int
    queries_per_run: list = field(default_factory=list)
    evaluations: int = 0
    flavors: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    distance: int


def start_state(seed: int, flavor: int, k: int) -> int:
    """Starting point of a run, derived by hashing so runs sharing a flavor space decorrelate."""
    h = hashlib.sha256(b"nearcoll-start" + seed.to_bytes(8, "little") + flavor.to_bytes(4, "little"))
    return int.from_bytes(h.digest()[:8], "big") >> (64 - k)


def run_once(config: SearchConfig, flavor: int) -> RunResult:
    """One cycle-finding run on the flavored step function.

    A run whose start point already lies on the cycle has no colliding pair;
    the result then has ``has_pair == False`` and the caller should retry.
    """
    flavor %= U32
    x0 = start_state(config.seed, flavor, config.k)
    out = find_cycle_hash(config.compressor, config.n, flavor, x0, config.engine)
    if out.colliding_pair is None:
        return RunResult(flavor=flavor, outcome=out)
    a, b = out.colliding_pair
    m, m_star = encode_message(a, flavor), encode_message(b, flavor)
    return RunResult(
        flavor=flavor,
        outcome=out,
        m=m,
        m_star=m_star,
        digest=hash_n(m, config.n),
        digest_star=hash_n(m_star, config.n),
    )


def find_near_collision(config: SearchConfig) -> SearchReport:
    """Repeat flavored runs (flavors seed, seed+1, ...) until a pair lands within eps."""
    per_run, flavors = [], []
    evaluations = 0
    for i in range(config.run_limit):
        res = run_once(config, config.seed + i)
        per_run.append(res.queries)
        flavors.append(res.flavor)
        evaluations += res.outcome.evaluations
        if res.has_pair and res.distance <= config.eps:
            return SearchReport(
                strategy=config.strategy.value,
                n=config.n,
                eps=config.eps,
                engine=config.engine,
                seed=config.seed,
                m=res.m.hex(),
                m_star=res.m_star.hex(),
                digest=res.digest.hex(),
                digest_star=res.digest_star.hex(),
                distance=res.distance,
                runs=len(per_run),
                queries=sum(per_run),
                queries_per_run=per_run,
                evaluations=evaluations,
                flavors=flavors,
                params=config.describe(),
            )
    raise MaxRunsExceeded(config, len(per_run), sum(per_run))


def _ball_offsets(n: int, eps: int) -> np.ndarray:
    out = []
    for w in range(eps + 1):
        for pos in combinations(range(n), w):
            out.append(sum(1 << p for p in pos))
    return np.array(out, dtype=np.uint64)


def birthday_search(n: int, eps: int, seed: int = 0, max_messages: Optional[int] = None) -> SearchReport:
    """Table-based search: hash counter messages, look up every point of B_eps(H(m)) in the table."""
    if not 8 <= n <= 40:
        raise ValueError("table-based search is limited to 8 <= n <= 40")
    if not 0 <= eps < n:
        raise ValueError("need 0 <= eps < n")
    seed %= U64
    deltas = _ball_offsets(n, eps)
    table: dict[int, int] = {}
    limit = max_messages if max_messages is not None else min(U32, 1 << (n // 2 + 8))
    for i in range(limit):
        msg = encode_message(seed, 0, i)
        h = hash_n(msg, n).value
        hits = table.keys() & (np.uint64(h) ^ deltas).tolist()
        if hits:
            best = min(hits, key=lambda v: ((v ^ h).bit_count(), table[v]))
            other = encode_message(seed, 0, table[best])
            return SearchReport(
                strategy="birthday",
                n=n,
                eps=eps,
                engine="table",
                seed=seed,
                m=msg.hex(),
                m_star=other.hex(),
                digest=hash_n(msg, n).hex(),
                digest_star=hash_n(other, n).hex(),
                distance=(best ^ h).bit_count(),
                runs=1,
                queries=i + 1,
                queries_per_run=[i + 1],
                evaluations=i + 1,
                flavors=[],
                params={"table_size": len(table), "ball": len(deltas)},
            )
        table.setdefault(h, i)
    raise RuntimeError(f"no {eps}-near-collision among {limit} messages")


def verify_pair(m: bytes, m_star: bytes, n: int, eps: int) -> VerifyResult:
    if isinstance(m, str):
        m = bytes.fromhex(m)
    if isinstance(m_star, str):
        m_star = bytes.fromhex(m_star)
    if m == m_star:
        raise ValueError("a near-collision needs two distinct messages")
    d = hash_n(m, n).distance(hash_n(m_star, n))
    return VerifyResult(valid=d <= eps, distance=d)


@dataclass(frozen=True)
class BenchStats:
    trials: int
    successes: int
    mean: float
    median: float
    stddev: float
    mean_runs: float
    mean_evaluations: float
    expected: float
    ratio: float
    seeds: list

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> dict:
        d = asdict(self)
        d["success_rate"] = self.success_rate
        return d


def trial_seeds(seed: int, trials: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(trials)]


def bench(config: SearchConfig, trials: int) -> BenchStats:
    """Run independent searches with derived seeds and compare mean queries with the model."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = trial_seeds(config.seed, trials)
    queries, runs, evals = [], [], []
    for s in seeds:
        cfg = SearchConfig(**{**_fields(config), "seed": s})
        try:
            rep = find_near_collision(cfg)
        except MaxRunsExceeded:
            continue
        queries.append(rep.queries)
        runs.append(rep.runs)
        evals.append(rep.evaluations)
    expected = config.expected_queries
    mean = statistics.fmean(queries) if queries else math.nan
    return BenchStats(
        trials=trials,
        successes=len(queries),
        mean=mean,
        median=statistics.median(queries) if queries else math.nan,
        stddev=statistics.pstdev(queries) if queries else math.nan,
        mean_runs=statistics.fmean(runs) if runs else math.nan,
        mean_evaluations=statistics.fmean(evals) if evals else math.nan,
        expected=expected,
        ratio=mean / expected,
        seeds=seeds,
    )


def _fields(config: SearchConfig) -> dict:
    return {
        "n": config.n,
        "eps": config.eps,
        "strategy": config.strategy,
        "mu": config.mu,
        "R": config.R,
        "engine": config.engine,
        "seed": config.seed,
        "max_runs": config.max_runs,
    }
