"""Plain-text formats: tensors, censuses and homset legends.

Tensor format::

    n
    <block 1: n lines of n 1-based integers>
    <blank line>
    <block 2>
    ...

Block ``i`` line ``j`` entry ``k`` is ``[i, j, k]``.  Order 0 is the single
line ``0``.  Readers ignore ``#`` comment lines and surrounding whitespace.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .algebra import TribracketTable


class FormatError(ValueError):
    """Malformed input text; the message names the offending line."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        where = ""
        if source is not None:
            where += f"{source}"
        if line is not None:
            where += f":{line}"
        self.source = source
        self.line = line
        super().__init__(f"{where}: {message}" if where else message)


def format_tensor(T: TribracketTable) -> str:
    n = T.order
    if n == 0:
        return "0\n"
    blocks = []
    for i in range(n):
        blocks.append("\n".join(" ".join(str(v + 1) for v in row) for row in T.entries[i]))
    return f"{n}\n" + "\n\n".join(blocks) + "\n"


def _content_lines(text: str, first_line: int = 1) -> list[tuple[int, str]]:
    out = []
    for k, raw in enumerate(text.splitlines(), start=first_line):
        line = raw.strip()
        if line.startswith("#"):
            continue
        out.append((k, line))
    return out


def parse_tensor(text: str, source: str | None = None, name: str | None = None,
                 first_line: int = 1) -> TribracketTable:
    lines = [(k, s) for k, s in _content_lines(text, first_line) if s]
    if not lines:
        raise FormatError("empty tensor text", source)
    k0, head = lines[0]
    if not head.isdigit():
        raise FormatError(f"expected the order on the first line, got {head!r}", source, k0)
    n = int(head)
    rows = lines[1:]
    if len(rows) != n * n:
        raise FormatError(f"expected {n * n} rows for order {n}, found {len(rows)}", source, k0)
    entries = np.zeros((n, n, n), dtype=np.intp)
    for idx, (k, s) in enumerate(rows):
        parts = s.split()
        if len(parts) != n or not all(p.isdigit() for p in parts):
            raise FormatError(f"expected {n} positive integers, got {s!r}", source, k)
        vals = [int(p) for p in parts]
        if any(not 1 <= v <= n for v in vals):
            raise FormatError(f"entry out of range 1..{n} in {s!r}", source, k)
        entries[idx // n, idx % n] = np.array(vals) - 1
    return TribracketTable(entries, name=name)


def read_tensor(path: str | Path) -> TribracketTable:
    path = Path(path)
    return parse_tensor(path.read_text(), source=str(path), name=path.stem)


# --- census ----------------------------------------------------------------

def format_census(order: int, tables: Sequence[TribracketTable], filter_name: str,
                  count_label: str = "classes") -> str:
    header = f"order={order} {count_label}={len(tables)} filter={filter_name}\n"
    return header + "---\n".join(format_tensor(T) for T in tables)


def parse_census(text: str, source: str | None = None) -> tuple[dict, list[TribracketTable]]:
    lines = text.splitlines()
    first = next((k for k, s in enumerate(lines) if s.strip() and not s.lstrip().startswith("#")), None)
    if first is None:
        raise FormatError("empty census", source)
    header = {}
    for item in lines[first].split():
        key, sep, value = item.partition("=")
        if not sep:
            raise FormatError(f"bad census header item {item!r}", source, first + 1)
        header[key] = value
    chunks, start = [], first + 1
    for k in range(first + 1, len(lines) + 1):
        if k == len(lines) or lines[k].strip() == "---":
            chunks.append((start, "\n".join(lines[start:k])))
            start = k + 1
    tables = [parse_tensor(chunk, source, first_line=s + 1) for s, chunk in chunks if chunk.strip()]
    expected = header.get("classes", header.get("tables"))
    if expected is not None and int(expected) != len(tables):
        raise FormatError(f"header announces {expected} tensors, found {len(tables)}", source, first + 1)
    return header, tables


def read_census(path: str | Path) -> tuple[dict, list[TribracketTable]]:
    path = Path(path)
    return parse_census(path.read_text(), source=str(path))


# --- homsets -----------------------------------------------------------------

def format_legend(legend: Sequence[Sequence[int]]) -> str:
    lines = []
    for i, image in enumerate(legend, start=1):
        lines.append(f"{i}: {' '.join(str(v + 1) for v in image)}".rstrip())
    return "".join(line + "\n" for line in lines)


def format_homset(table: TribracketTable, legend: Sequence[Sequence[int]]) -> str:
    return format_tensor(table) + "\n" + format_legend(legend)


# --- bundled data --------------------------------------------------------------

NAMED_LABELS = ("T0^1", "T1^1", "T2^1", "T2^2", "T3^1", "T3^2", "T3^3",
                "T3^4", "T3^5", "T3^6", "T3^7")


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("tribrackets").joinpath("data", *parts)))


def label_to_filename(label: str) -> str:
    return label.lower().replace("^", "-") + ".tensor"


def bundled_tensor(label: str) -> TribracketTable:
    """Load one of the bundled named tensors by label, e.g. ``"T3^1"``."""
    path = data_path("tensors", label_to_filename(label))
    if not path.exists():
        raise KeyError(f"no bundled tensor named {label!r}")
    T = parse_tensor(path.read_text(), source=str(path))
    T.name = label
    return T


def named_classes() -> list[TribracketTable]:
    """The eleven classes heading the homset product table, in printed order."""
    return [bundled_tensor(label) for label in NAMED_LABELS]
