"""Direct sums of binary Hamming codes used as balanced compression maps.

Bit conventions: an n-bit word is a Python int whose most significant bit is
bit index 0. Inside a Hamming block of length L = 2^m - 1 the positions are
numbered 1..L left to right, the parity-check column of position j is the
binary expansion of j, and the parity bits sit at the power-of-two positions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "HammingBlock",
    "CoveringCodeSpec",
    "BlockDistanceDistribution",
    "build_code",
    "direct_sum",
    "hamming_decode_block",
    "code_decode",
    "code_compress",
    "code_expand",
    "decode_array",
    "compress_array",
    "expand_array",
    "block_distance_distribution",
    "fiber_distance_distribution",
    "success_probability",
    "check_balanced",
]


@dataclass(frozen=True)
class HammingBlock:
    m: int
    offset: int

    @property
    def length(self) -> int:
        return (1 << self.m) - 1


@lru_cache(maxsize=None)
def _info_positions(m: int) -> tuple[int, ...]:
    length = (1 << m) - 1
    return tuple(j for j in range(1, length + 1) if j & (j - 1))


@dataclass(frozen=True)
class CoveringCodeSpec:
    """Hamming blocks laid out left to right, followed by pass-through bits."""

    n: int
    blocks: tuple[HammingBlock, ...]
    leftover: int

    def __post_init__(self):
        pos = 0
        for b in self.blocks:
            if b.m < 2:
                raise ValueError("Hamming blocks need m >= 2")
            if b.offset != pos:
                raise ValueError("blocks must be contiguous and in increasing offset order")
            pos += b.length
        if self.leftover < 0 or pos + self.leftover != self.n:
            raise ValueError("block lengths plus leftover must equal n")

    @property
    def R(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return self.n - sum(b.m for b in self.blocks)

    @property
    def ell(self) -> int:
        return min(b.m for b in self.blocks)

    @property
    def r(self) -> int:
        return sum(1 for b in self.blocks if b.m == self.ell + 1)

    @property
    def fiber_size(self) -> int:
        return 1 << sum(b.m for b in self.blocks)

    def to_text(self) -> str:
        return f"{self.n}:{self.R}:{self.ell}:{self.r}"

    @classmethod
    def from_text(cls, text: str) -> "CoveringCodeSpec":
        try:
            n, R, ell, r = (int(t) for t in text.split(":"))
        except ValueError:
            raise ValueError(f"expected 'n:R:ell:r', got {text!r}") from None
        if not 0 <= r <= R:
            raise ValueError("need 0 <= r <= R")
        return direct_sum([ell + 1] * r + [ell] * (R - r), n=n)

    def compress(self, x: int) -> int:
        return code_compress(self, x)

    def kernel_tables(self):
        """Arrays consumed by the hashing kernels: (blocks[B,2], gather[k], gather_block[k])."""
        blocks = np.array([[b.offset, b.length] for b in self.blocks], dtype=np.int64).reshape(-1, 2)
        gather, owner = [], []
        for i, b in enumerate(self.blocks):
            for j in _info_positions(b.m):
                gather.append(b.offset + j - 1)
                owner.append(i)
        tail = self.n - self.leftover
        gather.extend(range(tail, self.n))
        owner.extend([-1] * self.leftover)
        return blocks, np.array(gather, dtype=np.int64), np.array(owner, dtype=np.int64)


def direct_sum(ms: Sequence[int], n: int | None = None, leftover: int | None = None) -> CoveringCodeSpec:
    """Lay out Hamming blocks with the given parameters, then leftover identity bits."""
    blocks = []
    pos = 0
    for m in ms:
        blocks.append(HammingBlock(m=m, offset=pos))
        pos += (1 << m) - 1
    if n is None:
        n = pos + (leftover or 0)
    return CoveringCodeSpec(n=n, blocks=tuple(blocks), leftover=n - pos)


def build_code(n: int, R: int) -> CoveringCodeSpec:
    """Direct sum of R Hamming codes with covering radius R on n bits.

    ell = floor(log2(n/R + 1)) and r = floor((n - R(2^ell - 1)) / 2^ell); the r
    blocks of parameter ell+1 come first, then R-r blocks of parameter ell.
    """
    if R < 1:
        raise ValueError("covering radius R must be >= 1")
    if n < 3 * R:
        raise ValueError(f"n={n} too small for R={R} Hamming blocks (need n >= 3R)")
    # floor(log2(n/R + 1)) == bit_length((n + R) // R) - 1, exact in integers
    ell = ((n + R) // R).bit_length() - 1
    if ell < 2:
        raise ValueError("parameters give ell < 2")
    r = (n - R * ((1 << ell) - 1)) >> ell
    spec = direct_sum([ell + 1] * r + [ell] * (R - r), n=n)
    assert spec.k == n - ell * R - r
    return spec


def _block_syndrome(v: int, length: int) -> int:
    s = 0
    while v:
        low = v & -v
        s ^= length - (low.bit_length() - 1)
        v ^= low
    return s


def hamming_decode_block(x: Sequence[int], m: int) -> tuple[int, ...]:
    """Nearest codeword of a length 2^m - 1 bit vector (syndrome decoding)."""
    length = (1 << m) - 1
    if len(x) != length:
        raise ValueError(f"expected {length} bits for m={m}, got {len(x)}")
    s = 0
    for j, bit in enumerate(x, start=1):
        if bit:
            s ^= j
    out = list(x)
    if s:
        out[s - 1] ^= 1
    return tuple(out)


def _as_int(x) -> tuple[int, Callable]:
    value = getattr(x, "value", None)
    if value is None:
        return int(x), lambda v: v
    return value, lambda v: type(x)(width=x.width, value=v)


def _decode_int(spec: CoveringCodeSpec, x: int) -> int:
    for b in spec.blocks:
        length = b.length
        shift = spec.n - b.offset - length
        s = _block_syndrome((x >> shift) & ((1 << length) - 1), length)
        if s:
            x ^= 1 << (shift + length - s)
    return x


def code_decode(spec: CoveringCodeSpec, x):
    """Per-block nearest codeword, leftover bits copied; distance to x is at most R."""
    v, wrap = _as_int(x)
    return wrap(_decode_int(spec, v))


def code_compress(spec: CoveringCodeSpec, x) -> int:
    """Information bits of the decoded word, block by block, then the leftover bits."""
    v, _ = _as_int(x)
    out = 0
    for b in spec.blocks:
        length = b.length
        shift = spec.n - b.offset - length
        blk = (v >> shift) & ((1 << length) - 1)
        s = _block_syndrome(blk, length)
        if s:
            blk ^= 1 << (length - s)
        for j in _info_positions(b.m):
            out = (out << 1) | ((blk >> (length - j)) & 1)
    if spec.leftover:
        out = (out << spec.leftover) | (v & ((1 << spec.leftover) - 1))
    return out


def code_expand(spec: CoveringCodeSpec, s: int) -> int:
    """The codeword (with leftover bits) whose compression is s."""
    if s < 0 or s >> spec.k:
        raise ValueError(f"state does not fit in k={spec.k} bits")
    out = 0
    pos = spec.k
    for b in spec.blocks:
        info = _info_positions(b.m)
        pos -= len(info)
        bits = (s >> pos) & ((1 << len(info)) - 1)
        length = b.length
        blk = 0
        syn = 0
        for idx, j in enumerate(info):
            if (bits >> (len(info) - 1 - idx)) & 1:
                blk |= 1 << (length - j)
                syn ^= j
        t = 0
        while syn >> t:
            if (syn >> t) & 1:
                blk |= 1 << (length - (1 << t))
            t += 1
        out = (out << length) | blk
    if spec.leftover:
        out = (out << spec.leftover) | (s & ((1 << spec.leftover) - 1))
    return out


# vectorized forms for exhaustive sweeps (n <= 64)

def _check_width(spec: CoveringCodeSpec):
    if spec.n > 64:
        raise ValueError("array forms need n <= 64")


def _block_bits(xs: np.ndarray, spec: CoveringCodeSpec, b: HammingBlock):
    shift = spec.n - b.offset - b.length
    return [((xs >> np.uint64(shift + b.length - j)) & np.uint64(1)) for j in range(1, b.length + 1)]


def _syndromes(bits) -> np.ndarray:
    s = np.zeros(bits[0].shape, dtype=np.uint64)
    for j, bit in enumerate(bits, start=1):
        s ^= bit * np.uint64(j)
    return s


def decode_array(spec: CoveringCodeSpec, xs) -> np.ndarray:
    _check_width(spec)
    xs = np.asarray(xs, dtype=np.uint64)
    out = xs.copy()
    for b in spec.blocks:
        s = _syndromes(_block_bits(xs, spec, b))
        shift = spec.n - b.offset - b.length
        nz = s != 0
        flip = np.zeros_like(xs)
        flip[nz] = np.uint64(1) << (np.uint64(shift + b.length) - s[nz])
        out ^= flip
    return out


def compress_array(spec: CoveringCodeSpec, xs) -> np.ndarray:
    _check_width(spec)
    xs = np.asarray(xs, dtype=np.uint64)
    dec = decode_array(spec, xs)
    out = np.zeros_like(xs)
    for b in spec.blocks:
        shift = spec.n - b.offset - b.length
        for j in _info_positions(b.m):
            out = (out << np.uint64(1)) | ((dec >> np.uint64(shift + b.length - j)) & np.uint64(1))
    if spec.leftover:
        mask = np.uint64((1 << spec.leftover) - 1)
        out = (out << np.uint64(spec.leftover)) | (dec & mask)
    return out


def expand_array(spec: CoveringCodeSpec, ss) -> np.ndarray:
    _check_width(spec)
    ss = np.asarray(ss, dtype=np.uint64)
    out = np.zeros_like(ss)
    pos = spec.k
    for b in spec.blocks:
        info = _info_positions(b.m)
        pos -= len(info)
        blk = np.zeros_like(ss)
        syn = np.zeros_like(ss)
        for idx, j in enumerate(info):
            bit = (ss >> np.uint64(pos + len(info) - 1 - idx)) & np.uint64(1)
            blk |= bit << np.uint64(b.length - j)
            syn ^= bit * np.uint64(j)
        for t in range(b.m):
            blk |= ((syn >> np.uint64(t)) & np.uint64(1)) << np.uint64(b.length - (1 << t))
        out = (out << np.uint64(b.length)) | blk
    if spec.leftover:
        mask = np.uint64((1 << spec.leftover) - 1)
        out = (out << np.uint64(spec.leftover)) | (ss & mask)
    return out


@dataclass(frozen=True)
class BlockDistanceDistribution:
    """Law of d(x, y) for x, y independent and uniform on one radius-1 decoding ball."""

    m: int
    probs: dict

    def __getitem__(self, d: int) -> Fraction:
        return self.probs.get(d, Fraction(0))


def block_distance_distribution(m: int) -> BlockDistanceDistribution:
    if m < 2:
        raise ValueError("m must be >= 2")
    length = (1 << m) - 1
    pairs = Fraction(1, 1 << (2 * m))
    return BlockDistanceDistribution(
        m=m,
        probs={0: Fraction(1, 1 << m), 1: 2 * length * pairs, 2: length * (length - 1) * pairs},
    )


def fiber_distance_distribution(spec: CoveringCodeSpec) -> dict[int, Fraction]:
    """Distance law of two independent uniform points of one decoding fiber.

    Blocks are independent, so the per-block laws convolve; leftover bits are
    fixed inside a fiber and contribute nothing.
    """
    dist = {0: Fraction(1)}
    for b in spec.blocks:
        law = block_distance_distribution(b.m).probs
        nxt: dict[int, Fraction] = {}
        for d0, p0 in dist.items():
            for d1, p1 in law.items():
                nxt[d0 + d1] = nxt.get(d0 + d1, Fraction(0)) + p0 * p1
        dist = nxt
    return dist


def success_probability(spec: CoveringCodeSpec, eps: int) -> Fraction:
    """Chance that a collision of the compressed map is an eps-near-collision (identical pairs count)."""
    return sum((p for d, p in fiber_distance_distribution(spec).items() if d <= eps), Fraction(0))


def check_balanced(g, n: int | None = None, codomain: int | Iterable | None = None):
    """Exhaustive balancedness test of a map on Z_2^n.

    ``g`` is either the table of images of 0..2^n-1 or a callable (then ``n``
    is required). ``codomain`` is the size of the target set, or the set
    itself; unattained targets then count as empty fibers. Without it only the
    attained outputs are considered. Returns ``(balanced, histogram)`` where
    the histogram maps fiber size to the number of outputs with that size.
    """
    if callable(g):
        if n is None:
            raise ValueError("n is required when g is a callable")
        if n > 24:
            raise ValueError("exhaustive check limited to n <= 24")
        images = [g(x) for x in range(1 << n)]
    else:
        images = list(np.asarray(g).tolist())
        size = len(images)
        if size & (size - 1):
            raise ValueError("image table length must be a power of two")
    fibers = Counter(images)
    hist = Counter(fibers.values())
    if codomain is None:
        targets = len(fibers)
    else:
        if isinstance(codomain, int):
            targets = codomain
        else:
            target_set = set(codomain)
            if not set(fibers) <= target_set:
                raise ValueError("g has images outside the codomain")
            targets = len(target_set)
        missing = targets - len(fibers)
        if missing < 0:
            raise ValueError("codomain smaller than the set of attained outputs")
        if missing:
            hist[0] += missing
    total = len(images)
    balanced = total % targets == 0 and set(hist) == {total // targets}
    return balanced, dict(sorted(hist.items()))

