"""Magic constants for unsigned division by an invariant divisor.

For a divisor d and dividend domain [0, M] with M = 2^w - 1, a pair
(c, a) is a *magic constant* when

    floor(x / d) == floor(x * c / 2^a)   for every x in [0, M].

Writing A = 2^a, c = ceil(A / d) and e = c*d - A, the pair is valid
exactly when e * M_d < A, where M_d is the largest dividend whose
remainder mod d equals d - 1 (the worst case for the rounding error).
This module searches for the unique minimal shift a; the resulting
multiplier c never needs more than w + 1 bits.

All arithmetic runs on Python integers, which are unbounded, so the
2w+2-bit working width the inequalities require is always available.
"""

from dataclasses import dataclass

from .errors import InvalidDivisorError, OutOfRangeError

__all__ = [
    "Width",
    "W8",
    "W16",
    "W32",
    "MagicResult",
    "max_residue",
    "compute_magic",
    "theorem_holds",
]


@dataclass(frozen=True)
class Width:
    """Bit width of the dividend domain. Tested widths are 8, 16 and 32."""

    w: int

    def __post_init__(self):
        if not 8 <= self.w <= 32:
            raise OutOfRangeError(f"width must be in [8, 32], got {self.w}")

    @property
    def max_dividend(self) -> int:
        """M = 2^w - 1, the largest dividend."""
        return (1 << self.w) - 1

    @property
    def half_max(self) -> int:
        """floor(M / 2); divisors above it have quotient 0 or 1."""
        return self.max_dividend >> 1


W8 = Width(8)
W16 = Width(16)
W32 = Width(32)


@dataclass(frozen=True)
class MagicResult:
    """Minimal-shift magic pair for one divisor.

    c = ceil(2^a / d), e = c*d - 2^a, and e * m_d < 2^a holds while the
    same inequality with a - 1 does not. c_bits <= w + 1 always.
    """

    d: int
    width: Width
    c: int
    a: int
    e: int
    m_d: int
    c_bits: int


def _check_divisor_range(d: int, width: Width) -> None:
    if d <= 0:
        raise InvalidDivisorError(f"divisor must be positive, got {d}")
    if d > width.max_dividend:
        raise OutOfRangeError(
            f"divisor {d} exceeds the {width.w}-bit maximum {width.max_dividend}"
        )


def max_residue(d: int, width: Width = W32) -> int:
    """Largest x <= M with x mod d == d - 1.

    Equals floor((M+1)/d)*d - 1: one below the largest multiple of d
    that still fits in M + 1.
    """
    _check_divisor_range(d, width)
    m = width.max_dividend
    return (m + 1) // d * d - 1


def compute_magic(d: int, width: Width = W32) -> MagicResult:
    """Minimal-shift magic pair (c, a) for a non-power-of-two divisor.

    Scans a upward from ceil(log2 d) and returns the first a whose
    c = ceil(2^a / d) satisfies e * M_d < 2^a.  No smaller a can work:
    for 2^a < d the error term already exceeds the bound, and once the
    inequality holds it keeps holding for larger a (doubling a at most
    doubles e).  Termination is guaranteed at a <= w + ceil(log2 d).

    d = 1 and powers of two are rejected; they are lowered without a
    multiplier and would only add degenerate branches here.
    """
    _check_divisor_range(d, width)
    if d == 1 or d & (d - 1) == 0:
        raise InvalidDivisorError(
            f"divisor {d} is trivial (1 or a power of two); no magic pair needed"
        )
    m_d = max_residue(d, width)
    ceil_log2_d = (d - 1).bit_length()
    a_bound = width.w + ceil_log2_d
    a = ceil_log2_d
    while True:
        assert a <= a_bound, f"magic search for d={d} escaped its {a_bound} bound"
        big_a = 1 << a
        c = -(-big_a // d)
        e = c * d - big_a
        if e * m_d < big_a:
            c_bits = c.bit_length()
            assert c_bits <= width.w + 1, f"multiplier for d={d} needs {c_bits} bits"
            return MagicResult(d=d, width=width, c=c, a=a, e=e, m_d=m_d, c_bits=c_bits)
        a += 1


def theorem_holds(d: int, c: int, a: int, width: Width = W32) -> bool:
    """Whether (c, a) is a valid magic pair for d over [0, M].

    Evaluates both conditions in exact integer arithmetic, cross
    multiplied so no rationals appear:

        c * d >= 2^a            (c/A is at least 1/d)
        (c*d - 2^a) * M_d < 2^a (error small enough for the worst case)
    """
    _check_divisor_range(d, width)
    if c < 1 or a < 0:
        raise OutOfRangeError(f"need c >= 1 and a >= 0, got c={c}, a={a}")
    m_d = max_residue(d, width)
    big_a = 1 << a
    return c * d >= big_a and (c * d - big_a) * m_d < big_a
