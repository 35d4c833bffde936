"""Exception types shared across the package."""


class DivMagicError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDivisorError(DivMagicError, ValueError):
    """Divisor outside the operation's contract (0, 1, or a power of two)."""


class OutOfRangeError(DivMagicError, ValueError):
    """A value does not fit the dividend domain of the requested width."""


class UnsupportedVariantError(DivMagicError, ValueError):
    """Requested lowering variant does not apply to this divisor's case."""


class UnsupportedWidthError(DivMagicError, ValueError):
    """Emission target cannot express the requested bit width."""


class UnknownMnemonicError(DivMagicError, KeyError):
    """Cost table has no entry for a mnemonic used by the sequence."""


class TableFormatError(DivMagicError, ValueError):
    """Cost table text is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEntryError(TableFormatError):
    """Cost table defines the same mnemonic twice."""


class InvalidDomainError(DivMagicError, ValueError):
    """Empty or malformed verification/census domain."""


class ChecksumMismatchError(DivMagicError, RuntimeError):
    """Benchmark variants disagreed on the quotient checksum."""
