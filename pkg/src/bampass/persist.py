"""Checksummed line-oriented text documents for stores and trained models.

A document is a magic line, fixed-order field lines, and a trailing
"checksum <crc32>" line covering every byte before it. ASCII decimal,
single-space separators, "\\n" terminators; nothing locale dependent.
"""

from __future__ import annotations

import os
import tempfile
import zlib
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1


class StoreFormatError(ValueError):
    """Document is structurally invalid (truncated, bad field, wrong magic)."""


class StoreVersionError(StoreFormatError):
    """Document declares a format_version newer than this code supports."""


class StoreChecksumError(StoreFormatError):
    """Document content does not match its CRC32 line."""


def render_document(magic: str, lines: list[str]) -> str:
    body = "\n".join([magic, *lines]) + "\n"
    crc = zlib.crc32(body.encode("utf-8"))
    return body + f"checksum {crc}\n"


def parse_document(text: str, magic: str) -> list[str]:
    """Verify magic and checksum; return the field lines between them."""
    if not text.endswith("\n"):
        raise StoreFormatError("document is truncated (missing final newline)")
    lines = text.split("\n")[:-1]
    if len(lines) < 2:
        raise StoreFormatError("document too short")
    last = lines[-1]
    if not last.startswith("checksum "):
        raise StoreFormatError("missing checksum line")
    try:
        declared = int(last.split(" ", 1)[1])
    except (IndexError, ValueError) as exc:
        raise StoreFormatError(f"bad checksum line {last!r}") from exc
    body = "\n".join(lines[:-1]) + "\n"
    actual = zlib.crc32(body.encode("utf-8"))
    if actual != declared:
        raise StoreChecksumError(f"checksum mismatch: declared {declared}, computed {actual}")
    if lines[0] != magic:
        raise StoreFormatError(f"expected magic {magic!r}, found {lines[0]!r}")
    return lines[1:-1]


class LineCursor:
    """Sequential reader over document lines with uniform error reporting."""

    def __init__(self, lines: list[str]):
        self._lines = lines
        self._pos = 0

    def next_line(self, what: str) -> str:
        if self._pos >= len(self._lines):
            raise StoreFormatError(f"document ended before {what}")
        line = self._lines[self._pos]
        self._pos += 1
        return line

    def expect_ints(self, key: str, count: int) -> list[int]:
        line = self.next_line(f"'{key}' line")
        parts = line.split(" ")
        if parts[0] != key or len(parts) != count + 1:
            raise StoreFormatError(f"expected '{key}' with {count} value(s), found {line!r}")
        try:
            return [int(p) for p in parts[1:]]
        except ValueError as exc:
            raise StoreFormatError(f"non-integer value in {line!r}") from exc

    def expect_literal(self, literal: str) -> None:
        line = self.next_line(f"{literal!r} line")
        if line != literal:
            raise StoreFormatError(f"expected {literal!r}, found {line!r}")

    def done(self) -> None:
        if self._pos != len(self._lines):
            raise StoreFormatError(f"unexpected trailing content: {self._lines[self._pos]!r}")


def check_version(version: int) -> None:
    if version < 1:
        raise StoreFormatError(f"invalid format_version {version}")
    if version > FORMAT_VERSION:
        raise StoreVersionError(
            f"format_version {version} is newer than supported version {FORMAT_VERSION}"
        )


def matrix_lines(weights: np.ndarray) -> list[str]:
    """Row-major signed decimal rows, one matrix row per line."""
    return [" ".join(str(int(x)) for x in row) for row in weights]


def parse_matrix(cursor: LineCursor, m: int, n: int) -> np.ndarray:
    rows = []
    for i in range(m):
        line = cursor.next_line(f"weight row {i}")
        parts = line.split(" ")
        if len(parts) != n:
            raise StoreFormatError(f"weight row {i} has {len(parts)} cells, expected {n}")
        try:
            rows.append([int(p) for p in parts])
        except ValueError as exc:
            raise StoreFormatError(f"non-integer weight in row {i}: {line!r}") from exc
    return np.array(rows, dtype=np.int64)


MODEL_MAGIC = "bampass-model"


def dumps_model(mem) -> str:
    """Serialize a trained memory; matrix block identical to the store format."""
    lines = [
        f"format_version {FORMAT_VERSION}",
        f"dimensions {mem.m} {mem.n}",
        f"scale {mem.scale}",
        f"pair_count {mem.pair_count}",
        "weights",
        *matrix_lines(mem.weights),
    ]
    return render_document(MODEL_MAGIC, lines)


def loads_model(text: str):
    from .bam import BamMemory

    cursor = LineCursor(parse_document(text, MODEL_MAGIC))
    (version,) = cursor.expect_ints("format_version", 1)
    check_version(version)
    m, n = cursor.expect_ints("dimensions", 2)
    (scale,) = cursor.expect_ints("scale", 1)
    (pair_count,) = cursor.expect_ints("pair_count", 1)
    cursor.expect_literal("weights")
    weights = parse_matrix(cursor, m, n)
    cursor.done()
    try:
        return BamMemory(weights, pair_count=pair_count, scale=scale)
    except ValueError as exc:
        raise StoreFormatError(f"inconsistent model contents: {exc}") from exc


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write-temp-then-rename so readers never observe a partial file."""
    target = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def read_text(path: str | Path) -> str:
    with open(path, "r", newline="") as fh:
        return fh.read()
