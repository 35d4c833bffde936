"""Native benchmark harness for the 33-bit-multiplier lowerings.

Each (divisor, variant) pair is compiled to a specialized native loop
with numba: the strategy constants are baked into the jitted kernel, so
the measured time reflects the lowering's instruction sequence rather
than interpreter overhead.  The loop is exactly

    acc = 0
    for x in range(n):           # x cast to u64 each iteration
        acc += quotient(x)       # wrapping 64-bit accumulation
    return acc                   # checksum, modulo 2^64

timed as a whole with a monotonic clock, repeated `repeat` times after
one untimed warm-up call (which also triggers JIT compilation), and
summarized as mean and sample standard deviation.  All variants of a
divisor must produce the same checksum, and that checksum must match
the closed form for sum(floor(x/d)); timing is reported only after
those gates pass.

LLVM's auto-vectorizer is disabled for these kernels: it can replace
the scalar three-shift sequence with a SIMD algorithm that no longer
corresponds to the lowering being measured, while the 128-bit multiply
of the wide variant has no vector form at all.
"""

import statistics
import time
from dataclasses import dataclass

from .errors import ChecksumMismatchError, InvalidDomainError
from .lowering import GmThreeShift, NaiveWideShift, Strategy, WideMulHi, lower
from .magic import W32

__all__ = ["BENCH_VARIANTS", "BenchResult", "checksum_closed_form", "run_bench"]

BENCH_VARIANTS = ("gm", "wide", "naive")

_UMULH = None  # built lazily; importing numba is slow


def checksum_closed_form(n: int, d: int) -> int:
    """sum(floor(x/d) for x in range(n)) mod 2^64, without the loop."""
    q, r = divmod(n, d)
    return (d * q * (q - 1) // 2 + r * q) % (1 << 64)


def _build_umulh():
    """numba intrinsic: high 64 bits of the full u64 x u64 product.

    LLVM lowers the zext-mul-shift idiom to the target's single
    high-half multiply (mul on x86-64, umulh on AArch64).
    """
    from llvmlite import ir
    from numba import types
    from numba.extending import intrinsic

    @intrinsic
    def umulh(typingctx, a, b):
        if not (a == types.uint64 and b == types.uint64):
            return None
        sig = types.uint64(types.uint64, types.uint64)

        def codegen(context, builder, signature, args):
            i128 = ir.IntType(128)
            p = builder.mul(builder.zext(args[0], i128), builder.zext(args[1], i128))
            return builder.trunc(builder.lshr(p, ir.Constant(i128, 64)), ir.IntType(64))

        return sig, codegen

    return umulh


def _make_kernel(s: Strategy):
    """Compile the summation loop for one strategy into native code."""
    import numba
    from numba import njit, types
    import numpy as np

    # Measure the scalar lowering, not the autovectorizer (see module doc).
    numba.config.LOOP_VECTORIZE = False
    numba.config.SLP_VECTORIZE = False

    global _UMULH
    if _UMULH is None:
        _UMULH = _build_umulh()
    umulh = _UMULH
    u64 = np.uint64
    sig = types.uint64(types.uint64)

    if isinstance(s, GmThreeShift):
        c_lo, sh, w = u64(s.c_lo), u64(s.s), u64(s.width.w)
        one = u64(1)

        @njit(sig, nogil=True)
        def kern(n):
            acc = u64(0)
            for x in range(n):
                xu = u64(x)
                y = (xu * c_lo) >> w
                acc += (((xu - y) >> one) + y) >> sh
            return acc

        return kern
    if isinstance(s, WideMulHi):
        k = u64(s.k)

        @njit(sig, nogil=True)
        def kern(n):
            acc = u64(0)
            for x in range(n):
                acc += umulh(u64(x), k)
            return acc

        return kern
    if isinstance(s, NaiveWideShift):
        c, sh, inv = u64(s.c), u64(s.a), u64(64 - s.a)

        @njit(sig, nogil=True)
        def kern(n):
            acc = u64(0)
            for x in range(n):
                xu = u64(x)
                hi = umulh(xu, c)
                lo = xu * c
                acc += (hi << inv) | (lo >> sh)
            return acc

        return kern
    raise InvalidDomainError(f"no benchmark kernel for variant {s.name!r}")


@dataclass(frozen=True)
class BenchResult:
    divisors: tuple[int, ...]
    n: int
    repeat: int
    variants: tuple[str, ...]
    means: dict[tuple[int, str], float]
    stdevs: dict[tuple[int, str], float]
    checksums: dict[tuple[int, str], int]

    def time_ratio(self, d: int, variant: str, baseline: str = "gm") -> float:
        return self.means[(d, variant)] / self.means[(d, baseline)]

    def speedup(self, d: int, variant: str, baseline: str = "gm") -> float:
        """How many times faster than the three-shift baseline."""
        return self.means[(d, baseline)] / self.means[(d, variant)]


def run_bench(
    divisors: tuple[int, ...] = (7, 19, 107),
    n: int = 1 << 27,
    repeat: int = 10,
    variants: tuple[str, ...] = ("gm", "wide"),
) -> BenchResult:
    """Time the requested lowerings over x in [0, n) for each divisor.

    Divisors must be in the w+1-bit multiplier case at width 32 (the
    only case with competing variants); the defaults 7, 19 and 107 are.
    """
    if n < 1:
        raise InvalidDomainError("iteration count must be at least 1 (empty measurement)")
    if repeat < 1:
        raise InvalidDomainError("repeat count must be at least 1")
    if not divisors:
        raise InvalidDomainError("no divisors given")
    for v in variants:
        if v not in BENCH_VARIANTS:
            raise InvalidDomainError(
                f"unknown bench variant {v!r}; expected subset of {BENCH_VARIANTS}"
            )
    if not variants:
        raise InvalidDomainError("no variants given")

    means: dict[tuple[int, str], float] = {}
    stdevs: dict[tuple[int, str], float] = {}
    checksums: dict[tuple[int, str], int] = {}
    for d in divisors:
        strategies = {v: lower(d, W32, v)[0] for v in variants}
        expected = checksum_closed_form(n, d)
        for v, s in strategies.items():
            kern = _make_kernel(s)
            kern(min(n, 1 << 14))  # warm-up: JIT compile, touch the loop
            times = []
            cs = None
            for _ in range(repeat):
                t0 = time.perf_counter()
                cs = int(kern(n))
                times.append(time.perf_counter() - t0)
            if cs != expected:
                raise ChecksumMismatchError(
                    f"d={d} variant={v}: checksum {cs:#x} != expected {expected:#x}"
                )
            checksums[(d, v)] = cs
            means[(d, v)] = statistics.fmean(times)
            stdevs[(d, v)] = statistics.stdev(times) if len(times) > 1 else 0.0
        distinct = {checksums[(d, v)] for v in variants}
        if len(distinct) != 1:
            raise ChecksumMismatchError(f"d={d}: variants disagree: {distinct}")
    return BenchResult(
        divisors=tuple(divisors),
        n=n,
        repeat=repeat,
        variants=tuple(variants),
        means=means,
        stdevs=stdevs,
        checksums=checksums,
    )
