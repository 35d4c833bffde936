"""Latency/throughput estimates for abstract instruction sequences.

The model is a dependency-chain sum, not a pipeline simulator: chain
latency is the longest latency path through the sequence's dependency
DAG, and throughput cost is the sum of reciprocal throughputs of the
in-loop instructions.  It is an estimate of steady-state loop cost, not
a prediction.  Hoisted immediates and high-half register extraction are
free (see FREE_MNEMONICS).

Cost tables load from a simple text format, one entry per line:

    <mnemonic> <latency> <reciprocal_throughput>

`#` starts a comment.  The alias `imul` populates both multiply
mnemonics (mul_wide and mul_hi); `shrd` is the double-width shift.
"""

from dataclasses import dataclass

from .errors import DuplicateEntryError, TableFormatError, UnknownMnemonicError
from .lowering import FREE_MNEMONICS, InstrSeq

__all__ = [
    "CostTable",
    "CostEstimate",
    "SKYLAKE_X",
    "estimate",
    "parse_cost_table",
    "load_cost_table",
]

_COSTED_MNEMONICS = ("add", "sub", "shr", "mul_wide", "mul_hi", "shrd", "cmp_select")
_ALIASES = {"imul": ("mul_wide", "mul_hi"), "shrd": ("shrd",)}


@dataclass(frozen=True)
class CostTable:
    """Per-mnemonic (latency, reciprocal throughput) in cycles."""

    name: str
    entries: dict[str, tuple[float, float]]

    def __post_init__(self):
        for mnem, (lat, tput) in self.entries.items():
            assert mnem in _COSTED_MNEMONICS, mnem
            assert lat >= 1 and tput > 0, f"{mnem}: latency >= 1 and throughput > 0 required"

    def cost(self, mnemonic: str) -> tuple[float, float]:
        if mnemonic in FREE_MNEMONICS:
            return (0.0, 0.0)
        try:
            return self.entries[mnemonic]
        except KeyError:
            raise UnknownMnemonicError(
                f"cost table {self.name!r} has no entry for {mnemonic!r}"
            ) from None


# Latency/throughput of the loop-relevant instructions on Skylake-X
# class hardware.  cmp_select is modeled as a cmp+cmov pair; it is not
# one of the four published rows but is needed to cost the
# large-divisor lowering.
SKYLAKE_X = CostTable(
    name="skylake-x",
    entries={
        "add": (1, 0.25),
        "sub": (1, 0.25),
        "shr": (1, 0.5),
        "mul_wide": (3, 1),
        "mul_hi": (3, 1),
        "shrd": (3, 1),
        "cmp_select": (2, 0.5),
    },
)


@dataclass(frozen=True)
class CostEstimate:
    latency: float
    throughput_cost: float
    in_loop_count: int

    def __post_init__(self):
        assert self.latency >= 0 and self.throughput_cost >= 0 and self.in_loop_count >= 0


def estimate(seq: InstrSeq, table: CostTable = SKYLAKE_X) -> CostEstimate:
    """Chain latency, throughput cost and in-loop count of a sequence.

    Latency of instruction i is its own latency plus the maximum over
    its dependencies; out-of-loop producers (hoisted immediates) are
    ready at cycle 0.  Free mnemonics contribute nothing and are not
    counted as in-loop instructions.
    """
    finish: list[float] = []
    latency = 0.0
    tput = 0.0
    count = 0
    for instr in seq:
        if not instr.in_loop:
            finish.append(0.0)
            continue
        lat, rt = table.cost(instr.mnemonic)
        start = max((finish[j] for j in instr.deps), default=0.0)
        finish.append(start + lat)
        latency = max(latency, finish[-1])
        tput += rt
        if instr.mnemonic not in FREE_MNEMONICS:
            count += 1
    return CostEstimate(latency=latency, throughput_cost=tput, in_loop_count=count)


def parse_cost_table(text: str, name: str = "custom") -> CostTable:
    """Parse the line format described in the module docstring."""
    entries: dict[str, tuple[float, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise TableFormatError(
                f"expected '<mnemonic> <latency> <throughput>', got {raw.strip()!r}", lineno
            )
        key, lat_s, tput_s = fields
        targets = _ALIASES.get(key, (key,))
        if not all(t in _COSTED_MNEMONICS for t in targets):
            raise TableFormatError(f"unknown mnemonic {key!r}", lineno)
        try:
            lat, tput = float(lat_s), float(tput_s)
        except ValueError:
            raise TableFormatError(f"non-numeric cost in {raw.strip()!r}", lineno) from None
        if lat < 1 or tput <= 0:
            raise TableFormatError(
                f"latency must be >= 1 and throughput > 0, got {lat} {tput}", lineno
            )
        for t in targets:
            if t in entries:
                raise DuplicateEntryError(f"duplicate entry for {t!r}", lineno)
            entries[t] = (lat, tput)
    if not entries:
        raise TableFormatError("cost table has no entries")
    return CostTable(name=name, entries=entries)


def load_cost_table(path: str) -> CostTable:
    with open(path, "r", encoding="ascii") as fh:
        return parse_cost_table(fh.read(), name=path)
