"""How often does the magic multiplier need w+1 bits?

Counts divisor classes over [2, 2^(w-1) - 1], the range where the
multiply lowerings apply.  Powers of two are reported as their own
class; the fits/needs-w+1 split is quoted over the non-power-of-two
population, with both denominators stated so either reading of
"nontrivial divisors" can be compared.  At width 32 roughly 77% of
multipliers fit in 32 bits and 23% need 33.
"""

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDomainError
from .lowering import DivCase, classify
from .magic import Width, W32

__all__ = ["CLASS_NAMES", "CensusReport", "run_census"]

CLASS_NAMES = ("power_of_two", "c_fits_w_bits", "c_needs_w_plus_1_bits")

_FULL_BLOCK = 1 << 22


@dataclass(frozen=True)
class CensusReport:
    width: Width
    domain: str
    counts: dict[str, int]

    def __post_init__(self):
        assert set(self.counts) == set(CLASS_NAMES)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def non_pow2_total(self) -> int:
        return self.total - self.counts["power_of_two"]

    def fraction(self, name: str) -> float:
        """Multiplier classes over the non-power-of-two population;
        the power-of-two class over the whole domain."""
        denom = self.total if name == "power_of_two" else self.non_pow2_total
        return self.counts[name] / denom if denom else 0.0

    def machine_lines(self) -> list[str]:
        return [
            f"class={name} count={self.counts[name]} fraction={self.fraction(name):.6f}"
            for name in CLASS_NAMES
        ]

    def text(self) -> str:
        lines = [
            f"width={self.width.w} domain={self.domain}",
            f"divisors counted: {self.total} "
            f"(non-power-of-two denominator: {self.non_pow2_total})",
        ]
        for name in CLASS_NAMES:
            denom = "of total" if name == "power_of_two" else "of non-pow2"
            lines.append(
                f"  {name:<24} {self.counts[name]:>12}  {self.fraction(name):8.6f} {denom}"
            )
        return "\n".join(lines)


def _classify_block(ds: np.ndarray, w: int) -> tuple[int, int, int]:
    """Vectorized classification of a block of divisors in [2, 2^(w-1) - 1].

    Mirrors classify()/compute_magic exactly (tests hold them equal):
    within this divisor range no shift below w can satisfy the bound and
    the bound is monotone in a, so scanning a upward from w and latching
    the first success yields the minimal shift.  All quantities fit u64
    for w <= 32: a <= 2w - 1 <= 63 and e * M_d < d * 2^w < 2^63.
    """
    u = np.uint64
    pow2 = (ds & (ds - u(1))) == 0
    rest = ds[~pow2]
    m_plus_1 = u(1) << u(w)
    m_d = (m_plus_1 - u(1)) - (m_plus_1 % rest)
    fits = 0
    unresolved = rest
    m_d_u = m_d
    for a in range(w, 2 * w):
        big_a = u(1) << u(a)
        e = (unresolved - big_a % unresolved) % unresolved
        done = e * m_d_u < big_a
        if done.any():
            dd = unresolved[done]
            c = (big_a + dd - u(1)) // dd
            fits += int((c < (u(1) << u(w))).sum())
            keep = ~done
            unresolved = unresolved[keep]
            m_d_u = m_d_u[keep]
        if unresolved.size == 0:
            break
    assert unresolved.size == 0, "census block left divisors unresolved"
    n_pow2 = int(pow2.sum())
    n_rest = int(rest.size)
    return n_pow2, fits, n_rest - fits


def _full_counts(width: Width, jobs: int) -> dict[str, int]:
    w = width.w
    hi = (1 << (w - 1)) - 1  # inclusive
    starts = list(range(2, hi + 1, _FULL_BLOCK))

    def run(lo):
        block = np.arange(lo, min(lo + _FULL_BLOCK, hi + 1), dtype=np.uint64)
        return _classify_block(block, w)

    if jobs <= 1 or len(starts) == 1:
        parts = [run(lo) for lo in starts]
    else:
        with ThreadPoolExecutor(jobs) as ex:
            parts = list(ex.map(run, starts))
    pow2 = sum(p[0] for p in parts)
    fits = sum(p[1] for p in parts)
    needs = sum(p[2] for p in parts)
    return dict(zip(CLASS_NAMES, (pow2, fits, needs)))


def run_census(
    width: Width = W32,
    *,
    full: bool = False,
    n: int | None = None,
    seed: int = 1,
    jobs: int | None = None,
) -> CensusReport:
    """Census over the multiply-range divisors, full or sampled.

    The sampled mode draws n divisors uniformly (with replacement) from
    [2, 2^(w-1) - 1] with a seeded generator and classifies each through
    lowering.classify; results are deterministic for a fixed (n, seed).
    The full mode enumerates every divisor; at w = 32 that is 2^31 - 2
    of them, handled by the block classifier above in minutes.
    """
    if full == (n is not None):
        raise InvalidDomainError("choose exactly one of full=True or a sample size n")
    lo, hi = 2, (1 << (width.w - 1)) - 1
    if hi < lo:
        raise InvalidDomainError(f"empty divisor domain [{lo}, {hi}]")
    jobs = jobs if jobs is not None else (os.cpu_count() or 1)
    if full:
        if width.w > 16:
            counts = _full_counts(width, jobs)
        else:
            counts = dict.fromkeys(CLASS_NAMES, 0)
            for d in range(lo, hi + 1):
                counts[_class_of(d, width)] += 1
        domain = f"full [{lo},{hi}]"
    else:
        if n <= 0:
            raise InvalidDomainError(f"sample count must be positive, got {n}")
        rng = random.Random(seed)
        counts = dict.fromkeys(CLASS_NAMES, 0)
        for _ in range(n):
            counts[_class_of(rng.randrange(lo, hi + 1), width)] += 1
        domain = f"sampled n={n} seed={seed}"
    return CensusReport(width=width, domain=domain, counts=counts)


def _class_of(d: int, width: Width) -> str:
    case = classify(d, width)
    if case is DivCase.POWER_OF_TWO:
        return "power_of_two"
    if case is DivCase.MUL_W_BIT:
        return "c_fits_w_bits"
    assert case is DivCase.MUL_W_PLUS_1_BIT
    return "c_needs_w_plus_1_bits"
