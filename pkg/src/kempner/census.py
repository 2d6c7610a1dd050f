"""Exact prime-pair and prime counts driven by fixed points of S.

For j >= 2 we have S(j) <= j with equality exactly when j is prime or
j = 4, so the summand

    floor( S(j) * S(j+2n) / (j * (j+2n)) )

is 1 precisely when both coordinates are fixed points and 0 otherwise.
Summing it over j counts the pairs (p, p + 2n) with larger member <= x,
with one spurious hit at (2, 4) in the twin case; the twin count subtracts
that hit once it has actually entered the summation range (x >= 4).

The j = 1 term is the delicate one.  Under the classical S(1) = 1 the term
floor(S(1) S(1+2n) / (1 + 2n)) is 1 whenever 1 + 2n is prime, wrongly
counting (1, 1+2n).  Default evaluation therefore either starts at j = 2
(PAPER_LITERAL convention) or zeroes S(1) (FORMULA_CONSISTENT convention);
both yield identical, sieve-exact counts.  The uncorrected sum-from-1
behavior stays reachable through ``literal=True`` so the off-by-one can be
demonstrated and reported rather than silently hidden.

Counting consumes S values segment by segment through two staggered
windows (j and j + 2n), so memory is O(segment_size + 2n) rather than
O(x).  All arithmetic is exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

import numpy as np

from .core import Convention, _as_u64
from .oracle import oracle_pair_count, oracle_pi
from .table import DEFAULT_SEGMENT_SIZE, s_range

__all__ = [
    "CountReport",
    "PairCountQuery",
    "count_pairs",
    "count_primes",
    "count_twin",
    "pair_count_sweep",
    "pair_term",
    "pair_term_fast",
    "prime_count_sweep",
    "trace_terms",
    "twin_count_sweep",
]


@dataclass(frozen=True)
class PairCountQuery:
    """One counting run: pairs (p, p + 2*half_gap) with the larger member <= x."""

    x: int
    half_gap: int = 1
    conv: Convention = Convention.FORMULA_CONSISTENT

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _as_u64(self.x, "x"))
        object.__setattr__(self, "half_gap", _as_u64(self.half_gap, "half_gap", minimum=1))

    @property
    def gap(self) -> int:
        return 2 * self.half_gap


@dataclass
class CountReport:
    """Outcome of a counting run.

    ``oracle_count`` is filled only in verification mode; a mismatch does
    not raise, it is flagged through :attr:`matches` so failed runs still
    emit a report.
    """

    formula_count: int
    oracle_count: int | None = None
    correction_applied: int = 0
    terms_evaluated: int = 0
    elapsed: float = 0.0

    @property
    def matches(self) -> bool | None:
        if self.oracle_count is None:
            return None
        return self.formula_count == self.oracle_count


def pair_term(j: int, half_gap: int, s_j: int, s_j2n: int) -> int:
    """The literal summand floor(S(j) S(j+2n) / (j (j+2n))).

    Evaluated with exact (unbounded) integer arithmetic, so products past
    64 bits never truncate.  For genuine S values the result is in {0, 1}.
    """
    j = _as_u64(j, "j", minimum=1)
    half_gap = _as_u64(half_gap, "half_gap", minimum=1)
    s_j = _as_u64(s_j, "s_j")
    s_j2n = _as_u64(s_j2n, "s_j2n")
    return (s_j * s_j2n) // (j * (j + 2 * half_gap))


def pair_term_fast(j: int, half_gap: int, s_j: int, s_j2n: int) -> int:
    """Fixed-point shortcut for :func:`pair_term`.

    Because S(k) <= k (with S(1) in {0, 1}), the floored ratio is 1 exactly
    when s_j = j and s_j2n = j + 2n.  Agrees with the literal division on
    every genuine S input; the equivalence is property-tested.
    """
    j = _as_u64(j, "j", minimum=1)
    half_gap = _as_u64(half_gap, "half_gap", minimum=1)
    return 1 if (s_j == j and s_j2n == j + 2 * half_gap) else 0


def _fixed_point_pair_sum(
    x: int,
    half_gap: int,
    conv: Convention,
    literal: bool,
    segment_size: int,
    threads: int,
) -> tuple[int, int]:
    """Sum of pair terms for j from the convention's start up to x - 2n.

    Returns (total, terms_evaluated).  Uses the fixed-point equality form
    of the summand on streamed s_range segments.
    """
    gap = 2 * half_gap
    start = 1 if literal else conv.sum_start
    table_conv = Convention.PAPER_LITERAL if literal else conv
    top = x - gap
    if top < start:
        return 0, 0
    total = 0
    a = start
    while a <= top:
        b = min(a + segment_size - 1, top)
        window = s_range(a, b + gap, table_conv, segment_size=segment_size, threads=threads)
        fixed = window.values == np.arange(a, b + gap + 1, dtype=np.uint64)
        total += int(np.count_nonzero(fixed[: b - a + 1] & fixed[gap:]))
        a = b + 1
    return total, top - start + 1


def count_twin(
    x: int,
    conv: Convention = Convention.FORMULA_CONSISTENT,
    *,
    verify: bool = False,
    literal: bool = False,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> CountReport:
    """Exact number of twin prime pairs (p, p + 2) with p + 2 <= x.

    The summation runs to x - 2, i.e. the larger member is <= x.  One -1
    correction removes the spurious (2, 4) hit, applied exactly when that
    term is inside the range (x >= 4).  With ``literal=True`` the sum runs
    from j = 1 with S(1) = 1, which overcounts by the documented j = 1
    anomaly; counts then exceed the sieve by 1 for every x >= 3.
    """
    started = perf_counter()
    x = _as_u64(x, "x")
    total, terms = _fixed_point_pair_sum(x, 1, conv, literal, segment_size, threads)
    correction = -1 if x >= 4 else 0
    oracle = oracle_pair_count(x, 1) if verify else None
    return CountReport(
        formula_count=total + correction,
        oracle_count=oracle,
        correction_applied=correction,
        terms_evaluated=terms,
        elapsed=perf_counter() - started,
    )


def count_pairs(
    query: PairCountQuery,
    *,
    verify: bool = False,
    literal: bool = False,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> CountReport:
    """Exact number of prime pairs (p, p + 2n) with p + 2n <= x.

    For half_gap >= 2 no correction term is needed: among j >= 2 the only
    fixed-point pair that is not a prime pair is (2, 4), which requires
    gap 2.  half_gap = 1 delegates to :func:`count_twin`.  With
    ``literal=True`` the j = 1 term is included under S(1) = 1 and
    overcounts by one whenever 2n + 1 is prime; that mode exists to be
    reported, not corrected.
    """
    if query.half_gap == 1:
        return count_twin(
            query.x,
            query.conv,
            verify=verify,
            literal=literal,
            segment_size=segment_size,
            threads=threads,
        )
    started = perf_counter()
    total, terms = _fixed_point_pair_sum(
        query.x, query.half_gap, query.conv, literal, segment_size, threads
    )
    oracle = oracle_pair_count(query.x, query.half_gap) if verify else None
    return CountReport(
        formula_count=total,
        oracle_count=oracle,
        correction_applied=0,
        terms_evaluated=terms,
        elapsed=perf_counter() - started,
    )


def count_primes(
    x: int,
    conv: Convention = Convention.FORMULA_CONSISTENT,
    *,
    verify: bool = False,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> CountReport:
    """pi(x) as the sum of floor(S(j)/j) for j in [2, x], minus 1 once x >= 4.

    For j >= 2 the summand is the fixed-point indicator, which hits every
    prime plus the lone composite fixed point j = 4; the -1 removes that
    hit as soon as it is in range.  The convention never affects the result
    since the sum starts at j = 2.
    """
    started = perf_counter()
    x = _as_u64(x, "x")
    total = 0
    a = 2
    while a <= x:
        b = min(a + segment_size - 1, x)
        window = s_range(a, b, conv, segment_size=segment_size, threads=threads)
        fixed = window.values == np.arange(a, b + 1, dtype=np.uint64)
        total += int(np.count_nonzero(fixed))
        a = b + 1
    correction = -1 if x >= 4 else 0
    oracle = oracle_pi(x) if verify else None
    return CountReport(
        formula_count=total + correction,
        oracle_count=oracle,
        correction_applied=correction,
        terms_evaluated=max(0, x - 1),
        elapsed=perf_counter() - started,
    )


def trace_terms(
    query: PairCountQuery, window: tuple[int, int]
) -> list[tuple[int, int, int, int]]:
    """Term-by-term view of the pair summation over a window of j.

    Returns rows (j, S(j), S(j + 2n), term) with the term computed by the
    literal floored division, so convention anomalies (notably j = 1 under
    S(1) = 1) are visible rather than masked.
    """
    lo, hi = window
    lo = _as_u64(lo, "window lo", minimum=1)
    hi = _as_u64(hi, "window hi")
    if hi < lo:
        raise ValueError(f"inverted window ({lo}, {hi})")
    if hi > query.x - query.gap:
        raise ValueError(
            f"window must lie within [1, {query.x - query.gap}] for x={query.x}, "
            f"gap={query.gap}"
        )
    table = s_range(lo, hi + query.gap, query.conv)
    rows = []
    for j in range(lo, hi + 1):
        s_j = table.at(j)
        s_j2n = table.at(j + query.gap)
        rows.append((j, s_j, s_j2n, pair_term(j, query.half_gap, s_j, s_j2n)))
    return rows


def _fixed_point_flags(max_x: int, conv: Convention) -> np.ndarray:
    """Boolean S(j) = j for j in [1, max_x] (index j - 1)."""
    table = s_range(1, max_x, conv)
    return table.values == np.arange(1, max_x + 1, dtype=np.uint64)


def twin_count_sweep(
    max_x: int, conv: Convention = Convention.FORMULA_CONSISTENT, literal: bool = False
) -> np.ndarray:
    """count_twin(x) for every x in [0, max_x] in one pass.

    Computes the S table once and reuses prefix sums of the term array;
    equivalent to calling :func:`count_twin` at each x (property-tested).
    """
    return pair_count_sweep(max_x, 1, conv, literal)


def pair_count_sweep(
    max_x: int,
    half_gap: int,
    conv: Convention = Convention.FORMULA_CONSISTENT,
    literal: bool = False,
) -> np.ndarray:
    """count_pairs(x, n) for every x in [0, max_x] via shared prefix sums."""
    max_x = _as_u64(max_x, "max_x")
    half_gap = _as_u64(half_gap, "half_gap", minimum=1)
    gap = 2 * half_gap
    xs = np.arange(max_x + 1, dtype=np.int64)
    if max_x < gap + 1:
        # No j fits the summation range and the (2, 4) correction needs x >= 4.
        return np.zeros(max_x + 1, dtype=np.int64)
    correction = (
        (xs >= 4).astype(np.int64) if half_gap == 1 else np.zeros(max_x + 1, np.int64)
    )
    start = 1 if literal else conv.sum_start
    flags = _fixed_point_flags(max_x, Convention.PAPER_LITERAL if literal else conv)
    terms = (flags[:-gap] & flags[gap:]).astype(np.int64)  # index i: j = i + 1
    if start > 1:
        terms[: start - 1] = 0
    prefix = np.concatenate(([0], np.cumsum(terms)))  # prefix[k] = sum over j <= k
    return prefix[np.clip(xs - gap, 0, None)] - correction


def prime_count_sweep(
    max_x: int, conv: Convention = Convention.FORMULA_CONSISTENT
) -> np.ndarray:
    """count_primes(x) for every x in [0, max_x] via one prefix sum."""
    max_x = _as_u64(max_x, "max_x")
    xs = np.arange(max_x + 1, dtype=np.int64)
    correction = (xs >= 4).astype(np.int64)
    if max_x < 2:
        return np.zeros(max_x + 1, dtype=np.int64)
    indicator = _fixed_point_flags(max_x, conv).astype(np.int64)
    indicator[0] = 0  # the sum starts at j = 2 under every convention
    prefix = np.concatenate(([0], np.cumsum(indicator)))
    return prefix[xs] - correction
