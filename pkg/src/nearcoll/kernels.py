"""Hot loops: iterated hashing step, cycle-finding engines, fiber diameters.

Every function here is compiled by numba unless ``NEARCOLL_BACKEND=numpy``.
Engines take ``(step, params, x0)`` where ``step(params, x)`` is itself a
kernel, so one engine body serves table lookups and the hash step alike.
"""

import hashlib

import numpy as np

from ._accel import HAS_NUMBA, njit

_K = np.array([
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1, 0x923F82A4, 0xAB1C5ED5,
    0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3, 0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174,
    0xE49B69C1, 0xEFBE4786, 0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147, 0x06CA6351, 0x14292967,
    0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13, 0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85,
    0xA2BFE8A1, 0xA81A664B, 0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A, 0x5B9CCA4F, 0x682E6FF3,
    0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208, 0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
], dtype=np.int64)

_H0 = np.array([
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A, 0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
], dtype=np.int64)

_M32 = 0xFFFFFFFF


@njit
def _rotr(x, r):
    return ((x >> r) | (x << (32 - r))) & _M32


@njit
def _bswap32(x):
    return ((x & 0xFF) << 24) | ((x & 0xFF00) << 8) | ((x >> 8) & 0xFF00) | ((x >> 24) & 0xFF)


@njit
def sha256_16(state, flavor, counter, w, out):
    """SHA-256 of encode(state, flavor, counter) into ``out`` (8 words).

    ``w`` is a 64-word int64 scratch buffer. All arithmetic is int64 masked to
    32 bits, which is exact in both numba and Python.
    """
    lo = np.int64(state & np.uint64(_M32))
    hi = np.int64(state >> np.uint64(32))
    w[0] = _bswap32(lo)
    w[1] = _bswap32(hi)
    w[2] = _bswap32(flavor)
    w[3] = _bswap32(counter)
    w[4] = 0x80000000
    for t in range(5, 15):
        w[t] = 0
    w[15] = 128
    for t in range(16, 64):
        x15 = w[t - 15]
        x2 = w[t - 2]
        s0 = _rotr(x15, 7) ^ _rotr(x15, 18) ^ (x15 >> 3)
        s1 = _rotr(x2, 17) ^ _rotr(x2, 19) ^ (x2 >> 10)
        w[t] = (w[t - 16] + s0 + w[t - 7] + s1) & _M32
    a = _H0[0]
    b = _H0[1]
    c = _H0[2]
    d = _H0[3]
    e = _H0[4]
    f = _H0[5]
    g = _H0[6]
    h = _H0[7]
    for t in range(64):
        s1 = _rotr(e, 6) ^ _rotr(e, 11) ^ _rotr(e, 25)
        ch = (e & f) ^ ((~e) & g & _M32)
        t1 = (h + s1 + ch + _K[t] + w[t]) & _M32
        s0 = _rotr(a, 2) ^ _rotr(a, 13) ^ _rotr(a, 22)
        maj = (a & b) ^ (a & c) ^ (b & c)
        t2 = (s0 + maj) & _M32
        h = g
        g = f
        f = e
        e = (d + t1) & _M32
        d = c
        c = b
        b = a
        a = (t1 + t2) & _M32
    out[0] = (_H0[0] + a) & _M32
    out[1] = (_H0[1] + b) & _M32
    out[2] = (_H0[2] + c) & _M32
    out[3] = (_H0[3] + d) & _M32
    out[4] = (_H0[4] + e) & _M32
    out[5] = (_H0[5] + f) & _M32
    out[6] = (_H0[6] + g) & _M32
    out[7] = (_H0[7] + h) & _M32


@njit
def _digest_bit(words, p):
    return (words[p >> 5] >> (31 - (p & 31))) & 1


@njit
def compress_words(words, blocks, gather, owner, flips):
    """Apply a compressor (truncation or Hamming direct sum) to a 256-bit digest.

    Bit positions index the digest MSB-first, so truncating SHA-256 to n bits
    needs no extra work: the compressor tables only reference positions < n.
    """
    for i in range(blocks.shape[0]):
        off = blocks[i, 0]
        length = blocks[i, 1]
        s = 0
        for j in range(1, length + 1):
            if _digest_bit(words, off + j - 1):
                s ^= j
        flips[i] = off + s - 1 if s else -1
    out = np.uint64(0)
    for idx in range(gather.shape[0]):
        p = gather[idx]
        bit = _digest_bit(words, p)
        o = owner[idx]
        if o >= 0 and flips[o] == p:
            bit ^= 1
        out = (out << np.uint64(1)) | np.uint64(bit)
    return out


@njit
def hash_step_jit(params, x):
    flavor, blocks, gather, owner, flips, w, words = params
    sha256_16(x, flavor, 0, w, words)
    return compress_words(words, blocks, gather, owner, flips)


def hash_step_py(params, x):
    tail, shift, compress = params
    d = hashlib.sha256(int(x).to_bytes(8, "little") + tail).digest()
    return compress(int.from_bytes(d, "big") >> shift)


hash_step = hash_step_jit if HAS_NUMBA else hash_step_py


def hash_step_params(compressor, n, flavor):
    """Parameter tuple for ``hash_step`` on the active backend."""
    if HAS_NUMBA:
        blocks, gather, owner = compressor.kernel_tables()
        return (
            np.int64(flavor),
            blocks,
            gather,
            owner,
            np.zeros(max(1, blocks.shape[0]), dtype=np.int64),
            np.zeros(64, dtype=np.int64),
            np.zeros(8, dtype=np.int64),
        )
    return (int(flavor).to_bytes(4, "little") + b"\0\0\0\0", 256 - n, compressor.compress)


def as_state(x):
    return np.uint64(x) if HAS_NUMBA else int(x)


@njit
def table_step(params, x):
    return params[0][x]


def call_step(params, x):
    """Step for arbitrary Python callables; pairs with the uncompiled engines."""
    return params(x)


@njit
def floyd_kernel(step, params, x0):
    """Tortoise and hare. Returns (tail, cycle, a, b, evaluations)."""
    tort = step(params, x0)
    hare = step(params, tort)
    evals = 2
    while tort != hare:
        tort = step(params, tort)
        hare = step(params, step(params, hare))
        evals += 3
    # hare sits at x_nu with nu a multiple of the cycle length
    tort = x0
    a = x0
    b = x0
    tail = 0
    while tort != hare:
        a = tort
        b = hare
        tort = step(params, tort)
        hare = step(params, hare)
        evals += 2
        tail += 1
    cycle = 1
    hare = step(params, tort)
    evals += 1
    while tort != hare:
        hare = step(params, hare)
        evals += 1
        cycle += 1
    return tail, cycle, a, b, evals


@njit
def brent_kernel(step, params, x0):
    """Brent's power-of-two search. Returns (tail, cycle, a, b, evaluations)."""
    power = 1
    cycle = 1
    tort = x0
    tort_pos = 0
    prev = x0
    prev_pos = -1
    hare = step(params, x0)
    evals = 1
    while tort != hare:
        if power == cycle:
            prev = tort
            prev_pos = tort_pos
            tort = hare
            tort_pos += power
            power *= 2
            cycle = 0
        hare = step(params, hare)
        evals += 1
        cycle += 1
    # the previous checkpoint lies strictly inside the tail when its round
    # was long enough to have caught the cycle but did not
    if prev_pos >= 0 and cycle <= power // 2:
        start = prev
        tail = prev_pos
    else:
        start = x0
        tail = 0
    # walk x_j and x_{j+cycle} together until they meet at the cycle entry
    hare = start
    for _ in range(cycle):
        hare = step(params, hare)
    evals += cycle
    tort = start
    a = start
    b = start
    while tort != hare:
        a = tort
        b = hare
        tort = step(params, tort)
        hare = step(params, hare)
        evals += 2
        tail += 1
    return tail, cycle, a, b, evals


@njit
def nivasch_kernel(step, params, x0):
    """Nivasch's stack of running minima. Returns (tail, cycle, a, b, evaluations)."""
    cap = 64
    vals = np.empty(cap, dtype=np.uint64)
    times = np.empty(cap, dtype=np.int64)
    top = 0
    x = x0
    i = 0
    evals = 0
    cycle = 0
    while True:
        while top > 0 and vals[top - 1] > x:
            top -= 1
        if top > 0 and vals[top - 1] == x:
            cycle = i - times[top - 1]
            break
        if top == cap:
            cap *= 2
            nv = np.empty(cap, dtype=np.uint64)
            nt = np.empty(cap, dtype=np.int64)
            nv[:top] = vals[:top]
            nt[:top] = times[:top]
            vals = nv
            times = nt
        vals[top] = x
        times[top] = i
        top += 1
        x = step(params, x)
        evals += 1
        i += 1
    start = x0
    tail = 0
    hare = start
    for _ in range(cycle):
        hare = step(params, hare)
    evals += cycle
    tort = start
    a = start
    b = start
    while tort != hare:
        a = tort
        b = hare
        tort = step(params, tort)
        hare = step(params, hare)
        evals += 2
        tail += 1
    return tail, cycle, a, b, evals


ENGINES = {"floyd": floyd_kernel, "brent": brent_kernel, "nivasch": nivasch_kernel}


@njit
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit
def _group_diameters_jit(values, starts):
    out = np.zeros(starts.shape[0] - 1, dtype=np.int64)
    for g in range(starts.shape[0] - 1):
        best = 0
        for i in range(starts[g], starts[g + 1]):
            vi = values[i]
            for j in range(i + 1, starts[g + 1]):
                d = np.int64(_popcount64(vi ^ values[j]))
                if d > best:
                    best = d
        out[g] = best
    return out


def _group_diameters_np(values, starts):
    out = np.zeros(len(starts) - 1, dtype=np.int64)
    for g in range(len(starts) - 1):
        grp = values[starts[g]:starts[g + 1]]
        if len(grp) > 1:
            out[g] = np.bitwise_count(grp[:, None] ^ grp[None, :]).max()
    return out


def group_diameters(values, starts):
    """Largest pairwise Hamming distance inside each group ``values[starts[g]:starts[g+1]]``."""
    values = np.ascontiguousarray(values, dtype=np.uint64)
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    if HAS_NUMBA:
        return _group_diameters_jit(values, starts)
    return _group_diameters_np(values, starts)
