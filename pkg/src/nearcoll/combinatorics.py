"""Exact arithmetic on Hamming-ball volumes and the truncation trade-off.

All integer paths use Python's arbitrary-precision ints, so nothing here is
rounded until a value is explicitly turned into a base-2 logarithm.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Ordering",
    "SeqPoint",
    "ModeResult",
    "binomial",
    "ball_volume",
    "ball_volumes",
    "log2_int",
    "seq_point",
    "ratio_compare",
    "optimal_mu_exact",
    "optimal_mu_approx",
    "asym_two_term",
]


class Ordering(enum.Enum):
    RISING = "rising"
    FALLING = "falling"


@dataclass(frozen=True)
class SeqPoint:
    eps: int
    mu: int
    s_mu: int
    log2_a: float


@dataclass(frozen=True)
class ModeResult:
    eps: int
    mode: int
    approx: int


def binomial(n: int, k: int) -> int:
    """C(n, k), zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return math.comb(n, k)


def ball_volume(n: int, r: int) -> int:
    """Number of n-bit vectors within Hamming distance r of a fixed point."""
    if n < 0 or r < 0:
        raise ValueError("ball_volume arguments must be nonnegative")
    if r >= n:
        return 1 << n
    total = 0
    term = 1
    for i in range(r + 1):
        total += term
        term = term * (n - i) // (i + 1)
    return total


def ball_volumes(eps: int, mu_max: int) -> list[int]:
    """[S_0(eps), S_1(eps), ..., S_mu_max(eps)] via S_{m+1} = 2 S_m - C(m, eps)."""
    if eps < 0 or mu_max < 0:
        raise ValueError("arguments must be nonnegative")
    out = [1]
    s = 1
    c = 1 if eps == 0 else 0  # C(m, eps) for m = 0
    for m in range(mu_max):
        s = 2 * s - c
        out.append(s)
        # C(m+1, eps) = C(m, eps) * (m+1) / (m+1-eps)
        if m + 1 == eps:
            c = 1
        elif m + 1 > eps:
            c = c * (m + 1) // (m + 1 - eps)
    return out


def log2_int(x: int) -> float:
    """log2 of a positive integer of any size, from its bit length and a 64-bit mantissa."""
    if x <= 0:
        raise ValueError("log2_int needs a positive integer")
    shift = x.bit_length() - 64
    if shift <= 0:
        return math.log2(x)
    return math.log2(x >> shift) + shift


def seq_point(eps: int, mu: int) -> SeqPoint:
    """Evaluate a_mu = 2^(-mu/2) S_mu(eps), keeping S_mu(eps) exact."""
    if eps < 1 or mu < 1:
        raise ValueError("eps and mu must be positive")
    s = ball_volume(mu, eps)
    return SeqPoint(eps=eps, mu=mu, s_mu=s, log2_a=log2_int(s) - mu / 2)


def _compare(s_next: int, s_cur: int) -> Ordering:
    # a_{mu+1}/a_mu = S_{mu+1} / (sqrt(2) S_mu); square both sides to stay in integers
    lhs = s_next * s_next
    rhs = 2 * s_cur * s_cur
    if lhs == rhs:
        raise ArithmeticError("S_{mu+1}^2 == 2 S_mu^2 is impossible; arithmetic is broken")
    return Ordering.RISING if lhs > rhs else Ordering.FALLING


def ratio_compare(eps: int, mu: int) -> Ordering:
    """Whether a_{mu+1} is above or below a_mu, decided in exact integers."""
    if eps < 1 or mu < 1:
        raise ValueError("eps and mu must be positive")
    return _compare(ball_volume(mu + 1, eps), ball_volume(mu, eps))


def optimal_mu_approx(eps: int) -> int:
    """ceil((2 + sqrt 2)(eps - 1)), computed exactly with integer square roots."""
    if eps < 1:
        raise ValueError("eps must be positive")
    d = eps - 1
    # sqrt(2) d = sqrt(2 d^2); 2 d^2 is a perfect square only for d = 0
    t = 2 * d * d
    s = math.isqrt(t)
    return 2 * d + (s if s * s == t else s + 1)


def optimal_mu_exact(eps: int) -> ModeResult:
    """Mode of a_mu over mu >= 1, found by scanning upward until the sequence falls.

    Strict log-concavity makes the first falling step the unique maximum.
    """
    if eps < 1:
        raise ValueError("eps must be positive")
    limit = math.ceil((2 + math.sqrt(2)) * eps) + 2
    mu = 1
    s_cur = ball_volume(1, eps)
    c = binomial(1, eps)
    while True:
        s_next = 2 * s_cur - c
        if _compare(s_next, s_cur) is Ordering.FALLING:
            return ModeResult(eps=eps, mode=mu, approx=optimal_mu_approx(eps))
        mu += 1
        if mu > limit:
            raise ArithmeticError(f"mode scan for eps={eps} passed the proven bound {limit}")
        s_cur = s_next
        c = binomial(mu, eps)


def asym_two_term(eps: int, mu: int) -> float:
    """log2 of the two-term expansion C(mu,eps) * ((mu-eps)/(mu-2eps) - 2eps(mu-eps)/(mu-2eps)^3)."""
    if eps < 1 or mu < 1:
        raise ValueError("eps and mu must be positive")
    if mu <= 2 * eps:
        raise ValueError("two-term approximation needs mu > 2*eps")
    gap = mu - 2 * eps
    factor = (mu - eps) / gap - 2 * eps * (mu - eps) / gap**3
    return log2_int(binomial(mu, eps)) + math.log2(factor)
