"""Lowering of a constant divisor into executable strategy variants.

Divisors fall into five cases: 1 (identity), powers of two (shift),
divisors above floor(M/2) (compare-select, quotient is 0 or 1), and the
multiply cases split by whether the minimal magic multiplier fits in w
bits or needs w + 1.  The w+1-bit case has three interchangeable
lowerings:

  gm     three-shift sequence keeping every intermediate within w bits
  wide   one 2w x 2w high-half multiply by k = c * 2^(2w-a)
  naive  full double-width product followed by an a-bit shift

`auto` picks the wide high-multiply for the w+1-bit case; the naive
variant exists so the cost model can show why it loses on targets where
the double-width shift is as expensive as the multiply itself.
"""

import enum
from dataclasses import dataclass, field

from .errors import UnsupportedVariantError
from .magic import MagicResult, Width, W32, compute_magic, _check_divisor_range

__all__ = [
    "DivCase",
    "Strategy",
    "Identity",
    "Shift",
    "CompareSelect",
    "MulShift",
    "GmThreeShift",
    "WideMulHi",
    "NaiveWideShift",
    "VARIANT_REQUESTS",
    "classify",
    "lower",
    "AbstractInstr",
    "InstrSeq",
    "MNEMONICS",
    "FREE_MNEMONICS",
    "to_instr_seq",
]


class DivCase(enum.Enum):
    IDENTITY = "identity"
    POWER_OF_TWO = "power_of_two"
    LARGE_DIVISOR = "large_divisor"
    MUL_W_BIT = "mul_w_bit"
    MUL_W_PLUS_1_BIT = "mul_w_plus_1_bit"

    def token(self, width: Width) -> str:
        """Short label used in CLI output, e.g. mul33 for the w+1 case at w=32."""
        return {
            DivCase.IDENTITY: "identity",
            DivCase.POWER_OF_TWO: "pow2",
            DivCase.LARGE_DIVISOR: "large",
            DivCase.MUL_W_BIT: f"mul{width.w}",
            DivCase.MUL_W_PLUS_1_BIT: f"mul{width.w + 1}",
        }[self]


def classify(d: int, width: Width = W32) -> DivCase:
    """Assign d to exactly one lowering case.

    Powers of two are checked before the large-divisor threshold, so
    d = 2^(w-1) gets the cheaper shift lowering.
    """
    _check_divisor_range(d, width)
    if d == 1:
        return DivCase.IDENTITY
    if d & (d - 1) == 0:
        return DivCase.POWER_OF_TWO
    if d > width.half_max:
        return DivCase.LARGE_DIVISOR
    if compute_magic(d, width).c_bits <= width.w:
        return DivCase.MUL_W_BIT
    return DivCase.MUL_W_PLUS_1_BIT


@dataclass(frozen=True)
class Identity:
    """d = 1: the quotient is x itself."""

    d: int
    width: Width
    name = "identity"


@dataclass(frozen=True)
class Shift:
    """d = 2^k: logical right shift by k."""

    d: int
    width: Width
    k: int
    name = "shift"

    def __post_init__(self):
        assert self.d == 1 << self.k


@dataclass(frozen=True)
class CompareSelect:
    """d > floor(M/2): quotient is select(x < d, 0, 1)."""

    d: int
    width: Width
    name = "cmpsel"


@dataclass(frozen=True)
class MulShift:
    """Multiplier fits w bits: quotient is (x*c) >> a in 2w-bit arithmetic."""

    d: int
    width: Width
    c: int
    a: int
    name = "mulshift"

    def __post_init__(self):
        w = self.width.w
        assert 1 <= self.c < 1 << w
        assert w <= self.a < 2 * w


@dataclass(frozen=True)
class GmThreeShift:
    """w+1-bit multiplier lowered so intermediates stay within w bits.

    With c = 2^w + c_lo and y = (x*c_lo) >> w, the full shift
    (x*c) >> a becomes (((x - y) >> 1) + y) >> s where s = a - (w+1).
    y <= x guarantees the inner sum never exceeds w bits.
    """

    d: int
    width: Width
    c_lo: int
    s: int
    a: int
    name = "gm"

    def __post_init__(self):
        w = self.width.w
        assert 1 <= self.c_lo < 1 << w
        assert self.s == self.a - (w + 1) >= 0


@dataclass(frozen=True)
class WideMulHi:
    """w+1-bit multiplier folded into one 2w x 2w high-half multiply.

    (x*c) >> a == (x * (c * 2^(2w-a))) >> 2w, and on a 2w-bit machine
    the right shift by 2w is just taking the product's high register.
    """

    d: int
    width: Width
    k: int
    a: int
    name = "wide"

    def __post_init__(self):
        w = self.width.w
        assert w + 1 <= self.a <= 2 * w - 1
        assert 0 < self.k < 1 << (2 * w)


@dataclass(frozen=True)
class NaiveWideShift:
    """w+1-bit multiplier applied as a double-width product and a-bit shift.

    The product occupies 2w+1 bits, so the shift is a double-width
    (funnel) shift on real hardware.
    """

    d: int
    width: Width
    c: int
    a: int
    name = "naive"

    def __post_init__(self):
        w = self.width.w
        assert 1 << w <= self.c < 1 << (w + 1)
        assert self.a >= w + 1


Strategy = (
    Identity | Shift | CompareSelect | MulShift | GmThreeShift | WideMulHi | NaiveWideShift
)

VARIANT_REQUESTS = ("auto", "gm", "wide", "naive", "all")


def _gm(m: MagicResult) -> GmThreeShift:
    w = m.width.w
    return GmThreeShift(d=m.d, width=m.width, c_lo=m.c - (1 << w), s=m.a - (w + 1), a=m.a)


def _wide(m: MagicResult) -> WideMulHi:
    w = m.width.w
    return WideMulHi(d=m.d, width=m.width, k=m.c << (2 * w - m.a), a=m.a)


def _naive(m: MagicResult) -> NaiveWideShift:
    return NaiveWideShift(d=m.d, width=m.width, c=m.c, a=m.a)


def lower(d: int, width: Width = W32, variant: str = "auto") -> list[Strategy]:
    """Produce the strategy (or strategies, for `all`) for a divisor.

    gm/wide/naive may only be requested for the w+1-bit multiplier
    case; other cases have a single canonical lowering.
    """
    if variant not in VARIANT_REQUESTS:
        raise UnsupportedVariantError(
            f"unknown variant {variant!r}; expected one of {', '.join(VARIANT_REQUESTS)}"
        )
    case = classify(d, width)
    if case is DivCase.IDENTITY:
        built = [Identity(d=d, width=width)]
    elif case is DivCase.POWER_OF_TWO:
        built = [Shift(d=d, width=width, k=d.bit_length() - 1)]
    elif case is DivCase.LARGE_DIVISOR:
        built = [CompareSelect(d=d, width=width)]
    elif case is DivCase.MUL_W_BIT:
        m = compute_magic(d, width)
        built = [MulShift(d=d, width=width, c=m.c, a=m.a)]
    else:
        m = compute_magic(d, width)
        if variant == "gm":
            return [_gm(m)]
        if variant == "wide":
            return [_wide(m)]
        if variant == "naive":
            return [_naive(m)]
        if variant == "all":
            return [_gm(m), _wide(m), _naive(m)]
        return [_wide(m)]  # auto: one in-loop multiply beats the three-shift chain
    if variant in ("gm", "wide", "naive"):
        raise UnsupportedVariantError(
            f"variant {variant!r} applies only to the {width.w + 1}-bit multiplier "
            f"case; d={d} is {case.value}"
        )
    return built


# --- abstract instruction sequences -------------------------------------

MNEMONICS = frozenset(
    ["load_imm", "mul_wide", "mul_hi", "shr", "shrd", "sub", "add", "cmp_select", "take_hi"]
)
# Never costed: immediates are hoisted out of the loop and high-half
# extraction of a two-register product is a register name, not an instruction.
FREE_MNEMONICS = frozenset(["load_imm", "take_hi"])


@dataclass(frozen=True)
class AbstractInstr:
    """One machine-level operation with its dependencies inside the sequence.

    `deps` are indices of earlier instructions whose results feed this
    one; the loop input x and hoisted immediates are implicit sources.
    `operand` carries the immediate value or shift amount, if any.
    """

    mnemonic: str
    operand: int | None = None
    in_loop: bool = True
    deps: tuple[int, ...] = field(default=())

    def __post_init__(self):
        assert self.mnemonic in MNEMONICS, f"unknown mnemonic {self.mnemonic!r}"


InstrSeq = list[AbstractInstr]


def to_instr_seq(s: Strategy) -> InstrSeq:
    """Abstract instruction sequence for a strategy.

    The gm sequence extracts the high half of its w x w -> 2w product
    with an explicit shr(w): that product lives in a single 2w-bit
    register, so the extraction is a real shift, unlike the two-register
    product of mul_hi.  The naive double-width shift is modeled as one
    shrd-class instruction.
    """
    load = lambda imm: AbstractInstr("load_imm", operand=imm, in_loop=False)
    if isinstance(s, Identity):
        return []
    if isinstance(s, Shift):
        return [AbstractInstr("shr", operand=s.k)]
    if isinstance(s, CompareSelect):
        return [load(s.d), AbstractInstr("cmp_select", deps=(0,))]
    if isinstance(s, MulShift):
        return [
            load(s.c),
            AbstractInstr("mul_wide", deps=(0,)),
            AbstractInstr("shr", operand=s.a, deps=(1,)),
        ]
    if isinstance(s, GmThreeShift):
        seq = [
            load(s.c_lo),
            AbstractInstr("mul_wide", deps=(0,)),
            AbstractInstr("shr", operand=s.width.w, deps=(1,)),  # y
            AbstractInstr("sub", deps=(2,)),                     # x - y
            AbstractInstr("shr", operand=1, deps=(3,)),
            AbstractInstr("add", deps=(4, 2)),                   # + y
        ]
        if s.s > 0:
            seq.append(AbstractInstr("shr", operand=s.s, deps=(5,)))
        return seq
    if isinstance(s, WideMulHi):
        return [load(s.k), AbstractInstr("mul_hi", deps=(0,))]
    if isinstance(s, NaiveWideShift):
        return [
            load(s.c),
            AbstractInstr("mul_hi", deps=(0,)),
            AbstractInstr("shrd", operand=s.a, deps=(1,)),
        ]
    raise TypeError(f"not a Strategy: {s!r}")
