"""Bit-exact strategy interpreter and differential verification sweeps.

`eval_strategy` mimics the lowered machine code one input at a time in
plain Python integers, asserting the intermediate-range guarantees as
it goes.  `verify` compares a strategy against true floor division over
an exhaustive, contiguous, or seeded-sample domain; full-width sweeps
run as numpy chunks fanned out over a thread pool, and the merged
report is independent of worker count and scheduling.
"""

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidDivisorError,
    InvalidDomainError,
    OutOfRangeError,
    UnsupportedVariantError,
)
from .lowering import (
    CompareSelect,
    GmThreeShift,
    Identity,
    MulShift,
    NaiveWideShift,
    Shift,
    Strategy,
    WideMulHi,
    lower,
)
from .magic import Width, W32, max_residue

__all__ = [
    "oracle_div",
    "eval_strategy",
    "Domain",
    "Counterexample",
    "VerifyReport",
    "verify",
]

_CHUNK = 1 << 20


def oracle_div(x: int, d: int) -> int:
    """floor(x / d) via the host's general division."""
    if d <= 0:
        raise InvalidDivisorError(f"divisor must be positive, got {d}")
    if x < 0:
        raise OutOfRangeError(f"dividend must be unsigned, got {x}")
    return x // d


def eval_strategy(s: Strategy, x: int) -> int:
    """Value the lowered code computes for input x.

    Uses only operations expressible in 2w-bit unsigned arithmetic,
    plus the single 2w x 2w -> high-2w multiply of the wide variant.
    The gm path asserts its no-overflow lemma (y <= x and the recombined
    sum staying below 2^w); a failure there is a lowering bug.
    """
    w = s.width.w
    if not 0 <= x <= s.width.max_dividend:
        raise OutOfRangeError(f"x={x} outside [0, 2^{w}-1]")
    if isinstance(s, Identity):
        return x
    if isinstance(s, Shift):
        return x >> s.k
    if isinstance(s, CompareSelect):
        return 0 if x < s.d else 1
    if isinstance(s, MulShift):
        return (x * s.c) >> s.a
    if isinstance(s, GmThreeShift):
        y = (x * s.c_lo) >> w
        assert y <= x, f"gm bound violated: y={y} > x={x} for d={s.d}"
        t = ((x - y) >> 1) + y
        assert t < 1 << w, f"gm intermediate overflowed {w} bits at x={x}, d={s.d}"
        return t >> s.s
    if isinstance(s, WideMulHi):
        return (x * s.k) >> (2 * w)
    if isinstance(s, NaiveWideShift):
        return (x * s.c) >> s.a
    raise TypeError(f"not a Strategy: {s!r}")


def _eval_batch(s: Strategy, xs: np.ndarray) -> np.ndarray:
    """Vectorized eval_strategy over a uint64 array of inputs.

    Every product is arranged to fit in 64 bits: for w = 32 the wide
    constant k and the naive w+1-bit multiplier are split into 32-bit
    halves, shifting the partial products exactly as the hardware's
    double-register result would be.
    """
    w = s.width.w
    u = np.uint64
    if isinstance(s, Identity):
        return xs.copy()
    if isinstance(s, Shift):
        return xs >> u(s.k)
    if isinstance(s, CompareSelect):
        return (xs >= u(s.d)).astype(np.uint64)
    if isinstance(s, MulShift):
        return (xs * u(s.c)) >> u(s.a)  # x < 2^w, c < 2^w: product fits u64
    if isinstance(s, GmThreeShift):
        y = (xs * u(s.c_lo)) >> u(w)
        assert (y <= xs).all(), f"gm bound violated in batch for d={s.d}"
        t = ((xs - y) >> u(1)) + y
        assert (t < u(1 << w)).all(), f"gm intermediate overflowed in batch for d={s.d}"
        return t >> u(s.s)
    if isinstance(s, WideMulHi):
        if 3 * w <= 64:
            return (xs * u(s.k)) >> u(2 * w)
        k_hi, k_lo = s.k >> 32, s.k & 0xFFFFFFFF
        hi32 = (xs * u(k_lo)) >> u(32)
        return (xs * u(k_hi) + hi32) >> u(32)
    if isinstance(s, NaiveWideShift):
        if 2 * w + 1 <= 64:
            return (xs * u(s.c)) >> u(s.a)
        # c = 2^32 + c_lo and a >= 33, so (x*c) >> 32 = x + (x*c_lo >> 32) < 2^33
        c_lo = s.c & 0xFFFFFFFF
        return (xs + ((xs * u(c_lo)) >> u(32))) >> u(s.a - 32)
    raise TypeError(f"not a Strategy: {s!r}")


@dataclass(frozen=True)
class Domain:
    """Verification domain: exhaustive, inclusive range, or seeded sample."""

    kind: str
    lo: int = 0
    hi: int = 0
    n: int = 0
    seed: int = 0

    @classmethod
    def exhaustive(cls) -> "Domain":
        return cls(kind="exhaustive")

    @classmethod
    def span(cls, lo: int, hi: int) -> "Domain":
        if lo > hi:
            raise InvalidDomainError(f"empty range [{lo}, {hi}]")
        return cls(kind="range", lo=lo, hi=hi)

    @classmethod
    def sample(cls, n: int, seed: int = 0) -> "Domain":
        if n <= 0:
            raise InvalidDomainError(f"sample count must be positive, got {n}")
        return cls(kind="sample", n=n, seed=seed)

    def describe(self) -> str:
        if self.kind == "exhaustive":
            return "exhaustive"
        if self.kind == "range":
            return f"range[{self.lo},{self.hi}]"
        return f"sample n={self.n} seed={self.seed}"


class Counterexample(NamedTuple):
    x: int
    got: int
    expected: int


@dataclass(frozen=True)
class VerifyReport:
    d: int
    width: Width
    variant: str
    domain: str
    tested: int
    mismatches: int
    first: Counterexample | None

    def __post_init__(self):
        assert (self.mismatches == 0) == (self.first is None)


def _boundary_inputs(d: int, width: Width) -> list[int]:
    """Edge inputs always folded into sampled verification."""
    m = width.max_dividend
    m_d = max_residue(d, width)
    cands = [0, 1, d - 1, d, d + 1, m_d - 1, m_d, m_d + 1, m - 1, m]
    return sorted({x for x in cands if 0 <= x <= m})


def _check_chunk(s: Strategy, lo: int, n: int, base: np.ndarray) -> tuple[int, tuple | None]:
    xs = base[:n] + np.uint64(lo)
    got = _eval_batch(s, xs)
    expected = xs // np.uint64(s.d)
    bad = got != expected
    count = int(bad.sum())
    if count == 0:
        return 0, None
    i = int(bad.argmax())
    return count, (int(xs[i]), int(got[i]), int(expected[i]))


def _check_array(s: Strategy, xs: np.ndarray) -> tuple[int, tuple | None]:
    got = _eval_batch(s, xs)
    expected = xs // np.uint64(s.d)
    bad = got != expected
    count = int(bad.sum())
    if count == 0:
        return 0, None
    idx = np.nonzero(bad)[0]
    i = idx[int(xs[idx].argmin())]  # smallest failing x, independent of order
    return count, (int(xs[i]), int(got[i]), int(expected[i]))


def _sweep_range(s: Strategy, lo: int, hi: int, jobs: int) -> tuple[int, tuple | None]:
    """Partition [lo, hi] into chunks, fan out, and merge deterministically."""
    total = hi - lo + 1
    starts = range(lo, hi + 1, _CHUNK)
    if jobs <= 1 or total <= _CHUNK:
        base = np.arange(min(_CHUNK, total), dtype=np.uint64)
        results = [_check_chunk(s, st, min(_CHUNK, hi - st + 1), base) for st in starts]
    else:
        bases = [np.arange(_CHUNK, dtype=np.uint64) for _ in range(jobs)]
        slot = {}

        def run(idx_start):
            idx, st = idx_start
            return _check_chunk(s, st, min(_CHUNK, hi - st + 1), bases[idx % jobs])

        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(run, enumerate(starts)))
    mismatches = sum(c for c, _ in results)
    first = min((f for _, f in results if f is not None), default=None)
    return mismatches, first


def verify(
    d: int,
    width: Width = W32,
    variant: str = "auto",
    domain: Domain = Domain.exhaustive(),
    jobs: int | None = None,
) -> VerifyReport:
    """Differentially test one strategy against floor division.

    Sampled domains always include the boundary set around 0, d, M_d
    and M, and are deterministic for a fixed (n, seed).
    """
    if variant == "all":
        raise UnsupportedVariantError("verify() checks one variant; iterate lower(d, 'all')")
    s = lower(d, width, variant)[0]
    jobs = jobs if jobs is not None else (os.cpu_count() or 1)
    m = width.max_dividend
    if domain.kind == "exhaustive":
        tested = m + 1
        mismatches, first = _sweep_range(s, 0, m, jobs)
    elif domain.kind == "range":
        if not 0 <= domain.lo <= domain.hi <= m:
            raise InvalidDomainError(f"range [{domain.lo}, {domain.hi}] outside [0, {m}]")
        tested = domain.hi - domain.lo + 1
        mismatches, first = _sweep_range(s, domain.lo, domain.hi, jobs)
    elif domain.kind == "sample":
        rng = random.Random(domain.seed)
        picks = _boundary_inputs(d, width)
        picks.extend(rng.randrange(0, m + 1) for _ in range(domain.n))
        xs = np.array(picks, dtype=np.uint64)
        tested = len(picks)
        mismatches, first = _check_array(s, xs)
    else:
        raise InvalidDomainError(f"unknown domain kind {domain.kind!r}")
    return VerifyReport(
        d=d,
        width=width,
        variant=s.name,
        domain=domain.describe(),
        tested=tested,
        mismatches=mismatches,
        first=Counterexample(*first) if first else None,
    )
