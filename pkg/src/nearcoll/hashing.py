"""Truncated SHA-256 as the n-bit hash, plus the state-to-message embedding."""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .covering_code import CoveringCodeSpec

__all__ = [
    "Digest",
    "Truncation",
    "CompressorSpec",
    "encode_message",
    "decode_message",
    "hash_n",
    "step_function",
    "MESSAGE_BYTES",
]

MESSAGE_BYTES = 16
_MSG = struct.Struct("<QII")


@dataclass(frozen=True)
class Digest:
    """An n-bit value; bit i is bit 7 - (i mod 8) of byte i // 8."""

    width: int
    value: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("digest width must be positive")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value does not fit in {self.width} bits")

    def bit(self, i: int) -> int:
        return (self.value >> (self.width - 1 - i)) & 1

    def to_bytes(self) -> bytes:
        nbytes = (self.width + 7) // 8
        return (self.value << (8 * nbytes - self.width)).to_bytes(nbytes, "big")

    @classmethod
    def from_bytes(cls, data: bytes, width: int) -> "Digest":
        if width > 8 * len(data):
            raise ValueError("not enough bytes for the requested width")
        return cls(width=width, value=int.from_bytes(data, "big") >> (8 * len(data) - width))

    def hex(self) -> str:
        return self.to_bytes().hex()

    def distance(self, other: "Digest") -> int:
        if self.width != other.width:
            raise ValueError("Hamming distance needs equal widths")
        return (self.value ^ other.value).bit_count()

    def __str__(self):
        return self.hex()


@dataclass(frozen=True)
class Truncation:
    """Drop a fixed set of bit positions from an n-bit word (the remaining bits keep their order)."""

    n: int
    dropped: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.dropped)) != len(self.dropped) or any(not 0 <= p < self.n for p in self.dropped):
            raise ValueError("dropped positions must be distinct indices below n")
        object.__setattr__(self, "dropped", tuple(sorted(self.dropped)))

    @classmethod
    def suffix(cls, n: int, mu: int) -> "Truncation":
        if not 0 <= mu < n:
            raise ValueError("need 0 <= mu < n")
        return cls(n=n, dropped=tuple(range(n - mu, n)))

    @property
    def mu(self) -> int:
        return len(self.dropped)

    @property
    def k(self) -> int:
        return self.n - self.mu

    @property
    def kept(self) -> tuple[int, ...]:
        drop = set(self.dropped)
        return tuple(i for i in range(self.n) if i not in drop)

    def compress(self, x) -> int:
        x = getattr(x, "value", x)
        if self.dropped == tuple(range(self.k, self.n)):
            return x >> self.mu
        out = 0
        for p in self.kept:
            out = (out << 1) | ((x >> (self.n - 1 - p)) & 1)
        return out

    def kernel_tables(self):
        kept = np.array(self.kept, dtype=np.int64)
        return np.zeros((0, 2), dtype=np.int64), kept, np.full(len(kept), -1, dtype=np.int64)


CompressorSpec = Union[Truncation, CoveringCodeSpec]


def encode_message(state: int, flavor: int, counter: int = 0) -> bytes:
    """16 bytes: state as 64-bit little-endian, then flavor and counter as 32-bit little-endian."""
    return _MSG.pack(state, flavor, counter)


def decode_message(msg: bytes) -> tuple[int, int, int]:
    if len(msg) != MESSAGE_BYTES:
        raise ValueError(f"messages are {MESSAGE_BYTES} bytes, got {len(msg)}")
    return _MSG.unpack(msg)


def hash_n(msg: bytes, n: int) -> Digest:
    """First n bits of SHA-256(msg), most significant bit first."""
    if not 8 <= n <= 256:
        raise ValueError(f"n must be in [8, 256], got {n}")
    d = hashlib.sha256(msg).digest()
    return Digest(width=n, value=int.from_bytes(d, "big") >> (256 - n))


def step_function(compressor: CompressorSpec, n: int, flavor: int) -> Callable[[int], int]:
    """s -> compress(H(encode(s, flavor, 0))) as a plain Python callable."""
    if compressor.n != n:
        raise ValueError("compressor width differs from n")
    if compressor.k > 64:
        raise ValueError("iteration states are limited to 64 bits")
    tail = struct.pack("<II", flavor, 0)
    shift = 256 - n
    compress = compressor.compress
    sha256 = hashlib.sha256

    def f(s: int) -> int:
        d = sha256(s.to_bytes(8, "little") + tail).digest()
        return compress(int.from_bytes(d, "big") >> shift)

    return f
