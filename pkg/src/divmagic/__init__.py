"""Magic-constant lowerings for unsigned division by compile-time constants.

Computes minimal multiply-and-shift constants, lowers divisors to
strategy variants (including the single wide high-half multiply for the
w+1-bit multiplier case), and verifies, costs, emits and benchmarks the
results.
"""

from .census import CensusReport, run_census
from .costmodel import SKYLAKE_X, CostEstimate, CostTable, estimate, load_cost_table, parse_cost_table
from .emitter import EmitTarget, emit
from .errors import (
    ChecksumMismatchError,
    DivMagicError,
    DuplicateEntryError,
    InvalidDivisorError,
    InvalidDomainError,
    OutOfRangeError,
    TableFormatError,
    UnknownMnemonicError,
    UnsupportedVariantError,
    UnsupportedWidthError,
)
from .evaluator import Counterexample, Domain, VerifyReport, eval_strategy, oracle_div, verify
from .lowering import (
    AbstractInstr,
    CompareSelect,
    DivCase,
    GmThreeShift,
    Identity,
    InstrSeq,
    MulShift,
    NaiveWideShift,
    Shift,
    Strategy,
    WideMulHi,
    classify,
    lower,
    to_instr_seq,
)
from .magic import W8, W16, W32, MagicResult, Width, compute_magic, max_residue, theorem_holds

__version__ = "0.1.0"
