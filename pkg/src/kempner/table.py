"""Dense S tables: a segmented range kernel and a checksummed cache format.

The range kernel divides every j in a segment by the primes p <= sqrt(hi),
accumulating the exponent of each and the matching prime-power value of S;
whatever remains of j after the sweep is itself prime and is its own
candidate.  Memory stays at O(segment_size + pi(sqrt(hi))).

Cache files are little-endian:

    magic "SKT1" | version u32 | lo u64 | hi u64 | convention u8
    | (hi - lo + 1) values u64 | FNV-1a 64 checksum u64

where the checksum covers every preceding byte and the convention byte is
0 for FORMULA_CONSISTENT, 1 for PAPER_LITERAL.  Readers reject bad magic,
bad length, unknown versions and checksum mismatches.
"""

from __future__ import annotations

import operator
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .core import U64_MAX, Convention, _as_u64, s_prime_power

__all__ = [
    "DEFAULT_SEGMENT_SIZE",
    "CacheFormatError",
    "STable",
    "fnv1a64",
    "s_range",
]

DEFAULT_SEGMENT_SIZE = 1 << 20  # 8 MiB of u64 per segment: cache friendly, tunable

_MAGIC = b"SKT1"
_VERSION = 1
_HEADER = struct.Struct("<4sIQQB")
_CHECKSUM = struct.Struct("<Q")
_CONV_CODE = {Convention.FORMULA_CONSISTENT: 0, Convention.PAPER_LITERAL: 1}
_CONV_FROM_CODE = {code: conv for conv, code in _CONV_CODE.items()}

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & U64_MAX
    return h


class CacheFormatError(ValueError):
    """An S-table cache blob failed structural or checksum validation."""


@dataclass
class STable:
    """Contiguous cache of S(j) for j in [lo, hi] under a fixed convention."""

    lo: int
    hi: int
    conv: Convention
    values: np.ndarray  # uint64, values[j - lo] = S(j)

    def __post_init__(self) -> None:
        self.lo = _as_u64(self.lo, "lo", minimum=1)
        self.hi = _as_u64(self.hi, "hi", minimum=self.lo)
        self.values = np.ascontiguousarray(self.values, dtype=np.uint64)
        if self.values.shape != (self.hi - self.lo + 1,):
            raise ValueError(
                f"values length {self.values.shape[0]} != range size {self.hi - self.lo + 1}"
            )

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def at(self, j: int) -> int:
        """S(j) addressed by value j, not by array index."""
        if not self.lo <= j <= self.hi:
            raise IndexError(f"{j} outside table range [{self.lo}, {self.hi}]")
        return int(self.values[j - self.lo])

    def to_bytes(self) -> bytes:
        """Serialize to the checksummed cache format (deterministic bytes)."""
        payload = _HEADER.pack(_MAGIC, _VERSION, self.lo, self.hi, _CONV_CODE[self.conv])
        payload += self.values.astype("<u8", copy=False).tobytes()
        return payload + _CHECKSUM.pack(fnv1a64(payload))

    @classmethod
    def from_bytes(cls, blob: bytes) -> "STable":
        """Parse and validate a cache blob; raises CacheFormatError on any defect."""
        if len(blob) < _HEADER.size + _CHECKSUM.size:
            raise CacheFormatError(f"blob too short ({len(blob)} bytes)")
        magic, version, lo, hi, conv_code = _HEADER.unpack_from(blob, 0)
        if magic != _MAGIC:
            raise CacheFormatError(f"bad magic {magic!r}")
        if version != _VERSION:
            raise CacheFormatError(f"unsupported version {version}")
        if conv_code not in _CONV_FROM_CODE:
            raise CacheFormatError(f"unknown convention byte {conv_code}")
        if lo < 1 or hi < lo:
            raise CacheFormatError(f"bad range [{lo}, {hi}]")
        count = hi - lo + 1
        expected = _HEADER.size + 8 * count + _CHECKSUM.size
        if len(blob) != expected:
            raise CacheFormatError(f"length {len(blob)} != expected {expected}")
        (stored,) = _CHECKSUM.unpack_from(blob, len(blob) - _CHECKSUM.size)
        if fnv1a64(blob[: -_CHECKSUM.size]) != stored:
            raise CacheFormatError("checksum mismatch")
        values = np.frombuffer(
            blob, dtype="<u8", count=count, offset=_HEADER.size
        ).astype(np.uint64)
        return cls(lo, hi, _CONV_FROM_CODE[conv_code], values)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "STable":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def _small_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (base primes for the range kernel)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


_LUT_CACHE: dict[int, np.ndarray] = {}


def _prime_power_lut(p: int, max_exp: int) -> np.ndarray:
    """lut[e] = S(p^e) for e in [1, max_exp] (lut[0] unused).

    Worst case under concurrent segment workers is a duplicated build of
    the same deterministic array, which is benign.
    """
    lut = _LUT_CACHE.get(p)
    if lut is None or lut.shape[0] <= max_exp:
        lut = np.array(
            [0] + [s_prime_power(p, e) for e in range(1, max_exp + 1)],
            dtype=np.uint64,
        )
        _LUT_CACHE[p] = lut
    return lut


def _fill_segment(dest: np.ndarray, a: int, b: int, base: np.ndarray) -> None:
    """Compute S(j) for j in [a, b] into dest (dest aliases the output array)."""
    residual = np.arange(a, b + 1, dtype=np.uint64)
    dest[:] = 0
    n = b - a + 1
    for p in base:
        p = int(p)
        if p * p > b:
            break
        off = (-a) % p
        if off >= n:
            continue
        chunk = residual[off::p]
        chunk //= p
        exp = np.ones(chunk.shape[0], dtype=np.int64)
        live = np.flatnonzero(chunk % p == 0)
        while live.size:
            chunk[live] //= p
            exp[live] += 1
            live = live[chunk[live] % p == 0]
        lut = _prime_power_lut(p, int(exp.max()))
        best = dest[off::p]
        np.maximum(best, lut[exp], out=best)
    # Any cofactor still > 1 is a prime q > sqrt(b) appearing once: S-candidate q.
    np.maximum(dest, residual, where=residual > 1, out=dest)


def s_range(
    lo: int,
    hi: int,
    conv: Convention = Convention.PAPER_LITERAL,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> STable:
    """Compute S(j) for every j in [lo, hi] by segmented sieving.

    Disjoint segments may be handed to worker threads; the result is
    bit-identical to the sequential one regardless of thread count, because
    each segment writes a disjoint slice and contains no data-dependent
    ordering.
    """
    lo = _as_u64(lo, "lo", minimum=1)
    hi = _as_u64(hi, "hi", minimum=lo)
    segment_size = operator.index(segment_size)
    if segment_size < 1:
        raise ValueError(f"segment_size must be >= 1 (got {segment_size})")
    threads = max(1, int(threads))
    out = np.empty(hi - lo + 1, dtype=np.uint64)
    base = _small_primes(isqrt(hi))
    spans = [(a, min(a + segment_size - 1, hi)) for a in range(lo, hi + 1, segment_size)]
    if threads == 1 or len(spans) == 1:
        for a, b in spans:
            _fill_segment(out[a - lo : b - lo + 1], a, b, base)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(
                pool.map(
                    lambda span: _fill_segment(
                        out[span[0] - lo : span[1] - lo + 1], span[0], span[1], base
                    ),
                    spans,
                )
            )
    if lo == 1:
        out[0] = conv.s_of_one
    return STable(lo, hi, conv, out)


def default_cache_dir() -> str:
    """Directory for S-table caches: $SKT_CACHE_DIR if set, else the cwd."""
    return os.environ.get("SKT_CACHE_DIR", ".")
