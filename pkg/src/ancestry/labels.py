"""Bit-string labels and the CSV label-file format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import LabelError


class Label(NamedTuple):
    """A bit string stored as an integer plus an explicit length, so leading
    zeros survive."""

    value: int
    length: int

    def bits(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def hex(self) -> str:
        return format(self.value, "x")

    @classmethod
    def from_bits(cls, s: str) -> "Label":
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_hex(cls, h: str, length: int) -> "Label":
        value = int(h, 16)
        if length < 0 or value.bit_length() > length:
            raise LabelError(f"value 0x{h} does not fit in {length} bits")
        return cls(value, length)


class BitWriter:
    __slots__ = ("value", "length")

    def __init__(self):
        self.value = 0
        self.length = 0

    def put(self, x: int, width: int) -> "BitWriter":
        if x < 0 or x.bit_length() > width:
            raise LabelError(f"{x} does not fit in {width} bits")
        self.value = (self.value << width) | x
        self.length += width
        return self

    def label(self) -> Label:
        return Label(self.value, self.length)


class BitReader:
    """Reads fixed-width fields from the most significant end."""

    __slots__ = ("value", "left")

    def __init__(self, label: Label):
        self.value = label.value
        self.left = label.length

    def take(self, width: int) -> int:
        if width > self.left:
            raise LabelError("label too short")
        self.left -= width
        return (self.value >> self.left) & ((1 << width) - 1)

    def rest(self) -> Label:
        return Label(self.value & ((1 << self.left) - 1), self.left)


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


@dataclass(frozen=True)
class Context:
    """What a decoder needs besides the two labels.

    ``scheme`` is one of bounded, parenthood, optimal, knr, rand.  ``mode``
    applies to bounded/parenthood.  Fields not used by a scheme stay None.
    """

    scheme: str
    mode: str | None = None
    n: int | None = None
    d: int | None = None
    seed: int | None = None

    def header(self) -> str:
        if self.scheme in ("bounded", "parenthood"):
            parts = [self.scheme, self.mode]
            if self.mode != "universal":
                parts.append(str(self.n))
            if self.mode == "fixed_nd":
                parts.append(str(self.d))
            return "# " + ",".join(parts)
        if self.scheme == "optimal":
            return f"# optimal,{self.n}"
        if self.scheme == "rand":
            return f"# rand,{self.seed}"
        return f"# {self.scheme}"

    @classmethod
    def parse(cls, line: str) -> "Context":
        s = line.strip()
        if not s.startswith("#"):
            raise LabelError("label file must start with a '# scheme,...' context line")
        parts = [p.strip() for p in s[1:].split(",")]
        scheme = parts[0]
        try:
            if scheme in ("bounded", "parenthood"):
                mode = parts[1]
                if mode == "fixed_nd":
                    return cls(scheme, mode, int(parts[2]), int(parts[3]))
                if mode == "fixed_n":
                    return cls(scheme, mode, int(parts[2]))
                if mode == "universal":
                    return cls(scheme, mode)
                raise LabelError(f"unknown mode {mode!r}")
            if scheme == "optimal":
                return cls(scheme, n=int(parts[1]))
            if scheme == "rand":
                return cls(scheme, seed=int(parts[1]))
            if scheme == "knr":
                return cls(scheme)
        except (IndexError, ValueError):
            raise LabelError(f"malformed context line {s!r}") from None
        raise LabelError(f"unknown scheme {scheme!r}")


def write_label_file(context: Context, labels: list[Label]) -> str:
    lines = [context.header(), "node,bits_hex,bit_len"]
    for v in range(1, len(labels)):
        lab = labels[v]
        lines.append(f"{v},{lab.hex()},{lab.length}")
    return "\n".join(lines) + "\n"


def read_label_file(text: str) -> tuple[Context, dict[int, Label]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise LabelError("label file needs a context line and a header")
    ctx = Context.parse(lines[0])
    if lines[1].strip() != "node,bits_hex,bit_len":
        raise LabelError("second line must be 'node,bits_hex,bit_len'")
    out = {}
    for i, ln in enumerate(lines[2:], start=3):
        try:
            node, hx, length = (p.strip() for p in ln.split(","))
            out[int(node)] = Label.from_hex(hx, int(length))
        except ValueError as e:
            raise LabelError(f"row {i}: {e}") from None
    return ctx, out
