"""Binary sequences, trial sets and their on-disk formats.

Three file formats are supported:

``ascii01``
    UTF-8 text, one trial per ``\\n``-terminated line of ``0``/``1`` characters.
``packed-lsb-first``
    Repeated records of an 8-byte little-endian bit count followed by
    ``ceil(count / 8)`` bytes; bit 0 of byte 0 is the first bit.
``hex``
    One trial per line, each hex digit expanding to 4 bits MSB-first.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

FORMATS = ("ascii01", "packed-lsb-first", "hex")


class BitFormatError(ValueError):
    """Raised when a file or string cannot be decoded into bits."""


class BitSequence:
    """Immutable ordered sequence of bits backed by a read-only uint8 array."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray | str = ()):
        if isinstance(bits, BitSequence):
            arr = bits._bits
        elif isinstance(bits, str):
            arr = _decode_ascii(bits)
        else:
            if not isinstance(bits, (np.ndarray, list, tuple)):
                bits = list(bits)
            arr = np.asarray(bits, dtype=np.int64).reshape(-1) if len(bits) == 0 else np.asarray(bits)
            if arr.ndim != 1:
                raise ValueError(f"bits must be one-dimensional, got shape {arr.shape}")
            if arr.size and (arr.min() < 0 or arr.max() > 1):
                raise ValueError("bits must contain only 0 and 1")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def from_string(cls, text: str) -> "BitSequence":
        return cls(_decode_ascii(text))

    @classmethod
    def from_hex(cls, text: str) -> "BitSequence":
        return cls(_decode_hex(text))

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the bits."""
        return self._bits

    @property
    def n(self) -> int:
        return int(self._bits.size)

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitSequence(self._bits[idx])
        return int(self._bits[idx])

    def __iter__(self):
        return iter(self._bits.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __add__(self, other: "BitSequence") -> "BitSequence":
        return combine([self, other])

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        s = self.to_string()
        if len(s) > 40:
            s = s[:37] + "..."
        return f"BitSequence('{s}', n={self.n})"

    def to_string(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def to_hex(self) -> str:
        if self.n % 4:
            raise BitFormatError(f"hex encoding needs a multiple of 4 bits, got {self.n}")
        nibbles = self._bits.reshape(-1, 4) @ np.array([8, 4, 2, 1], dtype=np.uint8)
        return "".join("0123456789ABCDEF"[v] for v in nibbles.tolist())

    def complement(self) -> "BitSequence":
        return BitSequence(1 - self._bits)

    def count_ones(self) -> int:
        return int(np.count_nonzero(self._bits))


@dataclass(frozen=True)
class TrialSet:
    """Trials from one source, in chronological order, plus their concatenation."""

    trials: tuple[BitSequence, ...]
    source_label: str = ""
    qrng_label: str = ""
    combined: BitSequence = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        trials = tuple(t if isinstance(t, BitSequence) else BitSequence(t) for t in self.trials)
        object.__setattr__(self, "trials", trials)
        object.__setattr__(self, "combined", combine(trials))

    def __len__(self) -> int:
        return len(self.trials)

    @property
    def trial_length(self) -> int | None:
        """Common trial length, or None when lengths are mixed or there are no trials."""
        lengths = {t.n for t in self.trials}
        return lengths.pop() if len(lengths) == 1 else None

    def as_array(self) -> np.ndarray:
        """Stack equal-length trials into an (n_trials, n_bits) uint8 array."""
        if self.trial_length is None:
            raise ValueError("trials have mixed lengths")
        return np.stack([t.bits for t in self.trials])


class Partition(NamedTuple):
    blocks: list[BitSequence]
    remainder: int


def combine(trials: Sequence[BitSequence]) -> BitSequence:
    """Concatenate trials in list order."""
    if not trials:
        return BitSequence(np.zeros(0, dtype=np.uint8))
    return BitSequence(np.concatenate([np.asarray(t.bits) for t in trials]))


def partition(seq: BitSequence, block_len: int) -> Partition:
    """Split into ``len(seq) // block_len`` full blocks; the tail is dropped.

    The number of discarded trailing bits is returned as ``remainder``.
    """
    if block_len < 1:
        raise ValueError(f"block_len must be >= 1, got {block_len}")
    k = seq.n // block_len
    body = seq.bits[: k * block_len].reshape(k, block_len)
    return Partition([BitSequence(row) for row in body], seq.n - k * block_len)


def _decode_ascii(text: str) -> np.ndarray:
    raw = np.frombuffer(text.encode("utf-8"), dtype=np.uint8)
    bad = np.flatnonzero((raw != ord("0")) & (raw != ord("1")))
    if bad.size:
        # locate by character, not byte, so multibyte symbols report the right column
        pos = next(k for k, ch in enumerate(text) if ch not in "01")
        raise BitFormatError(f"malformed symbol {text[pos]!r} at position {pos}")
    return raw - ord("0")


_HEX_VALUES = {c: i for i, c in enumerate("0123456789abcdef")}


def _decode_hex(text: str) -> np.ndarray:
    out = np.empty(4 * len(text), dtype=np.uint8)
    for pos, ch in enumerate(text):
        v = _HEX_VALUES.get(ch.lower())
        if v is None:
            raise BitFormatError(f"malformed hex digit {ch!r} at position {pos}")
        out[4 * pos : 4 * pos + 4] = ((v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1)
    return out


def _text_records(data: bytes, path) -> list[str]:
    text = data.decode("utf-8")
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def load_trials(path, format: str = "ascii01", source_label: str = "", qrng_label: str = "") -> TrialSet:
    """Read a trial file; one BitSequence per line or packed record."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    with open(path, "rb") as fh:
        data = fh.read()
    if not data:
        raise BitFormatError(f"{path}: empty file")
    trials: list[BitSequence] = []
    if format == "packed-lsb-first":
        pos = 0
        while pos < len(data):
            if pos + 8 > len(data):
                raise BitFormatError(f"{path}: truncated record header at byte {pos}")
            (nbits,) = struct.unpack_from("<Q", data, pos)
            pos += 8
            nbytes = (nbits + 7) // 8
            if pos + nbytes > len(data):
                raise BitFormatError(
                    f"{path}: truncated record {len(trials)}: need {nbytes} bytes, have {len(data) - pos}"
                )
            chunk = np.frombuffer(data, dtype=np.uint8, count=nbytes, offset=pos)
            trials.append(BitSequence(np.unpackbits(chunk, bitorder="little")[:nbits]))
            pos += nbytes
    else:
        decode = _decode_ascii if format == "ascii01" else _decode_hex
        for lineno, line in enumerate(_text_records(data, path), start=1):
            try:
                trials.append(BitSequence(decode(line)))
            except BitFormatError as exc:
                raise BitFormatError(f"{path}:{lineno}: {exc}") from None
    if not source_label:
        source_label = os.path.splitext(os.path.basename(str(path)))[0]
    return TrialSet(tuple(trials), source_label=source_label, qrng_label=qrng_label)


def save_trials(tset: TrialSet | Sequence[BitSequence], path, format: str = "ascii01") -> None:
    trials = tset.trials if isinstance(tset, TrialSet) else tuple(tset)
    if format == "ascii01":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for t in trials:
                fh.write(t.to_string())
                fh.write("\n")
    elif format == "hex":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for t in trials:
                fh.write(t.to_hex())
                fh.write("\n")
    elif format == "packed-lsb-first":
        with open(path, "wb") as fh:
            for t in trials:
                fh.write(struct.pack("<Q", t.n))
                fh.write(np.packbits(t.bits, bitorder="little").tobytes())
    else:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
