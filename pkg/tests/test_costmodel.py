import pytest

from divmagic import (
    AbstractInstr,
    CostTable,
    DuplicateEntryError,
    SKYLAKE_X,
    TableFormatError,
    UnknownMnemonicError,
    W8,
    W32,
    estimate,
    lower,
    parse_cost_table,
    to_instr_seq,
)
from divmagic.costmodel import load_cost_table


def test_builtin_table_matches_published_rows():
    assert SKYLAKE_X.entries["add"] == (1, 0.25)
    assert SKYLAKE_X.entries["sub"] == (1, 0.25)
    assert SKYLAKE_X.entries["shr"] == (1, 0.5)
    assert SKYLAKE_X.entries["mul_wide"] == (3, 1)
    assert SKYLAKE_X.entries["mul_hi"] == (3, 1)
    assert SKYLAKE_X.entries["shrd"] == (3, 1)


def test_estimate_wide_d7():
    (s,) = lower(7, W32, "wide")
    est = estimate(to_instr_seq(s))
    assert est.latency == 3
    assert est.in_loop_count == 1
    assert est.throughput_cost == 1


def test_estimate_gm_d7():
    # mul(3) + high-half shr(1) + sub(1) + shr(1) + add(1) + shr(1)
    (s,) = lower(7, W32, "gm")
    est = estimate(to_instr_seq(s))
    assert est.latency == 8
    assert est.in_loop_count == 6
    assert est.throughput_cost == 3.0  # 1 + 0.5 + 0.25 + 0.5 + 0.25 + 0.5


def test_estimate_naive_d7():
    (s,) = lower(7, W32, "naive")
    est = estimate(to_instr_seq(s))
    assert est.latency == 6  # mul(3) + shrd(3)
    assert est.in_loop_count == 2


def test_estimate_empty_sequence():
    est = estimate([])
    assert est.latency == 0
    assert est.throughput_cost == 0
    assert est.in_loop_count == 0


def test_estimate_other_variants():
    assert estimate(to_instr_seq(lower(8, W32)[0])).latency == 1
    assert estimate(to_instr_seq(lower(3, W32)[0])).latency == 4
    assert estimate(to_instr_seq(lower(0x80000001, W32)[0])).latency == 2


def test_ordering_wide_beats_gm_and_naive():
    # the double-width shift costs as much as the multiply itself, so
    # one high-half multiply beats both alternatives
    divisors_w32 = (7, 19, 107)
    for d in divisors_w32:
        gm, wide, naive = (estimate(to_instr_seq(s)) for s in lower(d, W32, "all"))
        assert wide.latency == 3
        assert 7 <= gm.latency <= 8
        assert wide.latency < gm.latency
        assert wide.latency < naive.latency


def test_ordering_holds_for_every_w8_33bit_divisor():
    for d in range(3, 128):
        strategies = lower(d, W8, "all")
        if len(strategies) != 3:
            continue
        gm, wide, naive = (estimate(to_instr_seq(s)) for s in strategies)
        assert wide.latency == 3 < gm.latency
        assert wide.latency < naive.latency


def test_monotonicity_appending_never_decreases_cost():
    (s,) = lower(7, W32, "gm")
    seq = to_instr_seq(s)
    base = estimate(seq)
    for mnem in ("add", "sub", "shr", "mul_wide", "mul_hi", "shrd", "cmp_select"):
        extended = seq + [AbstractInstr(mnem, deps=(len(seq) - 1,))]
        est = estimate(extended)
        assert est.latency >= base.latency
        assert est.throughput_cost >= base.throughput_cost
        assert est.in_loop_count == base.in_loop_count + 1


def test_free_mnemonics_cost_nothing():
    seq = [
        AbstractInstr("load_imm", operand=42, in_loop=False),
        AbstractInstr("take_hi", deps=(0,)),
    ]
    est = estimate(seq, parse_cost_table("shr 1 0.5"))
    assert est.latency == 0
    assert est.throughput_cost == 0
    assert est.in_loop_count == 0


def test_parse_single_entry():
    table = parse_cost_table("shr 1 0.5")
    assert table.entries == {"shr": (1.0, 0.5)}


def test_parse_imul_alias_populates_both_multiplies():
    table = parse_cost_table("imul 3 1")
    assert table.entries["mul_wide"] == (3.0, 1.0)
    assert table.entries["mul_hi"] == (3.0, 1.0)


def test_parse_comments_and_blanks():
    text = """
# per-mnemonic latencies
add 1 0.25   # fused
sub 1 0.25

shr 1 0.5
imul 3 1
shrd 3 1
"""
    table = parse_cost_table(text)
    assert len(table.entries) == 6


def test_parse_errors_carry_line_numbers():
    with pytest.raises(TableFormatError) as err:
        parse_cost_table("add 1 0.25\nshr 1\n")
    assert err.value.line == 2
    with pytest.raises(TableFormatError) as err:
        parse_cost_table("bogus 1 1")
    assert err.value.line == 1
    with pytest.raises(TableFormatError):
        parse_cost_table("add one 0.25")
    with pytest.raises(TableFormatError):
        parse_cost_table("add 0 0.25")  # latency must be >= 1
    with pytest.raises(TableFormatError):
        parse_cost_table("add 1 0")  # throughput must be > 0


def test_parse_rejects_duplicates_including_alias_overlap():
    with pytest.raises(DuplicateEntryError):
        parse_cost_table("add 1 0.25\nadd 2 0.5")
    with pytest.raises(DuplicateEntryError) as err:
        parse_cost_table("mul_hi 4 2\nimul 3 1")
    assert err.value.line == 2


def test_parse_empty_is_an_error():
    with pytest.raises(TableFormatError):
        parse_cost_table("")
    with pytest.raises(TableFormatError):
        parse_cost_table("# only comments\n")


def test_load_cost_table_from_file(tmp_path):
    path = tmp_path / "slow_mul.costs"
    path.write_text("add 1 0.25\nsub 1 0.25\nshr 1 0.5\nimul 5 2\nshrd 3 1\n")
    table = load_cost_table(str(path))
    assert table.entries["mul_hi"] == (5.0, 2.0)
    (s,) = lower(7, W32, "wide")
    assert estimate(to_instr_seq(s), table).latency == 5


def test_estimate_missing_mnemonic_names_it():
    table = parse_cost_table("add 1 0.25")
    (s,) = lower(7, W32, "wide")
    with pytest.raises(UnknownMnemonicError, match="mul_hi"):
        estimate(to_instr_seq(s), table)


def test_table_validation():
    with pytest.raises(AssertionError):
        CostTable(name="bad", entries={"shr": (0.5, 0.5)})
    with pytest.raises(AssertionError):
        CostTable(name="bad", entries={"load_imm": (1, 1)})
