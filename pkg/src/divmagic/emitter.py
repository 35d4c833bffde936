"""C and assembly text for lowered division strategies.

Output is deterministic text meant to be read, assembled, or compiled
by the user; nothing here drives a toolchain.  The assembly targets are
the 64-bit ISAs computing the 32-bit division: x86-64 in Intel syntax
(destination first, SysV ABI) and AArch64.  Every file is labeled as
authored from this package's abstract lowering sequences rather than
transcribed from a compiler.
"""

import enum
import re

from .errors import UnsupportedWidthError
from .lowering import (
    CompareSelect,
    GmThreeShift,
    Identity,
    MulShift,
    NaiveWideShift,
    Shift,
    Strategy,
    WideMulHi,
)

__all__ = ["EmitTarget", "emit"]

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_AUTHORED = "Authored from the package's abstract lowering sequences, not transcribed from any compiler's output."


class EmitTarget(enum.Enum):
    C_SOURCE = "c"
    X86_64 = "x86-64"
    AARCH64 = "aarch64"

    @classmethod
    def from_token(cls, token: str) -> "EmitTarget":
        for t in cls:
            if t.value == token:
                return t
        raise ValueError(f"unknown target {token!r}; expected c, x86-64 or aarch64")


def _describe(s: Strategy) -> str:
    return {
        "identity": "quotient is the dividend itself",
        "shift": "power of two, a logical right shift",
        "cmpsel": "divisor above half the dividend range, quotient is 0 or 1",
        "mulshift": "multiply by the magic constant and shift the double-width product",
        "gm": "three-shift lowering of the w+1-bit multiplier",
        "wide": "single wide high-half multiply by the shifted magic constant",
        "naive": "double-width product followed by a full-width shift",
    }[s.name]


def emit(s: Strategy, target: EmitTarget, name: str) -> str:
    """Readable, deterministic source text for one strategy.

    c emits a free-standing `uN name(uN x)` for widths 8/16/32; the
    assembly targets require width 32.
    """
    if not _IDENT.match(name):
        raise ValueError(f"symbol name {name!r} is not a valid identifier")
    if target is EmitTarget.C_SOURCE:
        if s.width.w not in (8, 16, 32):
            raise UnsupportedWidthError(
                f"C emission needs an exact-width type; width {s.width.w} has none"
            )
        return _emit_c(s, name)
    if s.width.w != 32:
        raise UnsupportedWidthError(
            f"{target.value} emission is fixed at width 32, got {s.width.w}"
        )
    if target is EmitTarget.X86_64:
        return _emit_x86(s, name)
    return _emit_a64(s, name)


# --- C ---------------------------------------------------------------


def _emit_c(s: Strategy, name: str) -> str:
    w = s.width.w
    ut = f"uint{w}_t"
    u2t = f"uint{2 * w}_t"
    body: list[str] = []
    if isinstance(s, Identity):
        body = ["    return x;"]
    elif isinstance(s, Shift):
        body = [f"    return x >> {s.k};"]
    elif isinstance(s, CompareSelect):
        body = [f"    return x < ({ut})0x{s.d:x}u ? ({ut})0u : ({ut})1u;"]
    elif isinstance(s, MulShift):
        body = [f"    return ({ut})((({u2t})x * ({u2t})0x{s.c:x}u) >> {s.a});"]
    elif isinstance(s, GmThreeShift):
        body = [
            f"    {ut} y = ({ut})((({u2t})x * ({u2t})0x{s.c_lo:x}u) >> {w});",
            f"    {ut} t = ({ut})(((x - y) >> 1) + y); /* y <= x keeps this below 2^{w} */",
        ]
        body.append(f"    return t >> {s.s};" if s.s > 0 else "    return t;")
    elif isinstance(s, WideMulHi):
        if 3 * w <= 64:
            pt = "uint32_t" if 3 * w <= 32 else "uint64_t"
            body = [f"    return ({ut})((({pt})x * ({pt})0x{s.k:x}u) >> {2 * w});"]
        else:
            k_hi, k_lo = s.k >> 32, s.k & 0xFFFFFFFF
            body = [
                f"    /* high 64 bits of x * 0x{s.k:x}, by 32-bit halves of the constant */",
                "    uint64_t xw = x;",
                f"    uint64_t mid = (xw * (uint64_t)0x{k_lo:x}u) >> 32;",
                f"    return ({ut})((xw * (uint64_t)0x{k_hi:x}u + mid) >> 32);",
            ]
    elif isinstance(s, NaiveWideShift):
        if 2 * w + 1 <= 64:
            pt = "uint32_t" if 2 * w + 1 <= 32 else "uint64_t"
            body = [f"    return ({ut})((({pt})x * ({pt})0x{s.c:x}u) >> {s.a});"]
        else:
            body = [
                "    /* needs the compiler's 128-bit integer extension */",
                f"    return ({ut})(((unsigned __int128)x * 0x{s.c:x}ULL) >> {s.a});",
            ]
    else:
        raise TypeError(f"not a Strategy: {s!r}")
    head = [
        f"/* {name}: unsigned {w}-bit division by {s.d} ({_describe(s)}).",
        f" * {_AUTHORED}",
        " */",
        "#include <stdint.h>",
        "",
        f"{ut} {name}({ut} x) {{",
    ]
    return "\n".join(head + body + ["}", ""])


# --- x86-64 ----------------------------------------------------------


def _x86_lines(s: Strategy) -> list[str]:
    if isinstance(s, Identity):
        return ["mov     eax, edi"]
    if isinstance(s, Shift):
        return ["mov     eax, edi", f"shr     eax, {s.k}"]
    if isinstance(s, CompareSelect):
        return ["xor     eax, eax", f"cmp     edi, 0x{s.d:x}", "setae   al"]
    if isinstance(s, MulShift):
        return [
            "mov     eax, edi",
            f"mov     ecx, 0x{s.c:x}",
            "imul    rax, rcx",
            f"shr     rax, {s.a}",
        ]
    if isinstance(s, GmThreeShift):
        lines = [
            "mov     eax, edi",
            f"mov     ecx, 0x{s.c_lo:x}",
            "imul    rcx, rax",
            "shr     rcx, 32",
            "sub     eax, ecx",
            "shr     eax, 1",
            "add     eax, ecx",
        ]
        if s.s > 0:
            lines.append(f"shr     eax, {s.s}")
        return lines
    if isinstance(s, WideMulHi):
        return [
            "mov     eax, edi",
            f"movabs  rcx, 0x{s.k:x}",
            "mul     rcx",
            "mov     eax, edx",
        ]
    if isinstance(s, NaiveWideShift):
        return [
            "mov     eax, edi",
            f"movabs  rcx, 0x{s.c:x}",
            "mul     rcx",
            f"shrd    rax, rdx, {s.a}",
        ]
    raise TypeError(f"not a Strategy: {s!r}")


def _emit_x86(s: Strategy, name: str) -> str:
    out = [
        f"# {name}: unsigned 32-bit division by {s.d} ({_describe(s)}).",
        "# x86-64, Intel syntax, SysV ABI: x in edi, result in eax.",
        f"# {_AUTHORED}",
        "        .intel_syntax noprefix",
        "        .text",
        f"        .globl  {name}",
        f"{name}:",
    ]
    out += [f"        {line}" for line in _x86_lines(s)]
    out += ["        ret", ""]
    return "\n".join(out)


# --- AArch64 ---------------------------------------------------------


def _a64_materialize(reg: str, value: int) -> list[str]:
    """movz/movk sequence loading a constant, lowest halfword first."""
    halves = [(value >> sh) & 0xFFFF for sh in (0, 16, 32, 48)]
    if reg.startswith("w"):
        halves = halves[:2]
    lines = []
    for i, h in enumerate(halves):
        if h == 0 and not (value == 0 and i == 0):
            continue
        op = "movk" if lines else "movz"
        suffix = f", lsl #{16 * i}" if i else ""
        lines.append(f"{op}    {reg}, #0x{h:x}{suffix}")
    return lines


def _a64_lines(s: Strategy) -> list[str]:
    if isinstance(s, Identity):
        return ["// quotient is x itself; w0 already holds it"]
    if isinstance(s, Shift):
        return [f"lsr     w0, w0, #{s.k}"]
    if isinstance(s, CompareSelect):
        return _a64_materialize("w8", s.d) + [
            "cmp     w0, w8",
            "cset    w0, hs",
        ]
    if isinstance(s, MulShift):
        return _a64_materialize("w8", s.c) + [
            "umull   x8, w0, w8",
            f"lsr     x0, x8, #{s.a}",
        ]
    if isinstance(s, GmThreeShift):
        lines = _a64_materialize("w8", s.c_lo) + [
            "umull   x8, w0, w8",
            "lsr     x8, x8, #32",
            "sub     w9, w0, w8",
            "lsr     w9, w9, #1",
            "add     w8, w9, w8",
        ]
        lines.append(f"lsr     w0, w8, #{s.s}" if s.s > 0 else "mov     w0, w8")
        return lines
    if isinstance(s, WideMulHi):
        return (
            ["mov     w9, w0"]
            + _a64_materialize("x8", s.k)
            + ["umulh   x0, x9, x8"]
        )
    if isinstance(s, NaiveWideShift):
        return (
            ["mov     w9, w0"]
            + _a64_materialize("x8", s.c)
            + [
                "mul     x10, x9, x8",
                "umulh   x11, x9, x8",
                f"extr    x0, x11, x10, #{s.a}",
            ]
        )
    raise TypeError(f"not a Strategy: {s!r}")


def _emit_a64(s: Strategy, name: str) -> str:
    out = [
        f"// {name}: unsigned 32-bit division by {s.d} ({_describe(s)}).",
        "// AArch64, AAPCS64: x in w0, result in w0.",
        f"// {_AUTHORED}",
        "        .text",
        f"        .globl  {name}",
        f"{name}:",
    ]
    out += [f"        {line}" for line in _a64_lines(s)]
    out += ["        ret", ""]
    return "\n".join(out)
