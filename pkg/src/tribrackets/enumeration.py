"""Exhaustive enumeration and classification of small tribrackets.

The search fills cells layer by layer (first index), row-major within a
layer.  Three families of bitmasks keep every line of the cube free of
repeats, and every axiom (ii) instance is checked as soon as two of its
three outer values are known.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import TribracketTable, is_entropic
from .morphisms import (DEFAULT_CANONICAL_BOUND, are_isomorphic, canonical_form,
                        element_signatures, homset_tribracket)

log = logging.getLogger(__name__)

FILTERS = ("all", "entropic")
LONG_RUNNING_ORDER = 5


class SearchState:
    """Partially filled cube plus the bookkeeping needed to extend it."""

    def __init__(self, n: int):
        self.n = n
        self.cells = [-1] * n ** 3
        self.filled = 0
        # used values per line: left slot varying, middle varying, right varying
        self.used_left = [0] * (n * n)
        self.used_middle = [0] * (n * n)
        self.used_right = [0] * (n * n)
        # right_inv[(x*n + y)*n + v] = z with [x,y,z] = v; middle_inv likewise for y
        self.right_inv = [-1] * n ** 3
        self.middle_inv = [-1] * n ** 3

    def candidates(self, x: int, y: int, z: int) -> int:
        n = self.n
        used = self.used_left[y * n + z] | self.used_middle[x * n + z] | self.used_right[x * n + y]
        return ~used & ((1 << n) - 1)

    def assign(self, x: int, y: int, z: int, v: int) -> None:
        n = self.n
        self.cells[(x * n + y) * n + z] = v
        bit = 1 << v
        self.used_left[y * n + z] |= bit
        self.used_middle[x * n + z] |= bit
        self.used_right[x * n + y] |= bit
        self.right_inv[(x * n + y) * n + v] = z
        self.middle_inv[(x * n + z) * n + v] = y
        self.filled += 1

    def unassign(self, x: int, y: int, z: int) -> None:
        n = self.n
        idx = (x * n + y) * n + z
        v = self.cells[idx]
        self.cells[idx] = -1
        bit = ~(1 << v)
        self.used_left[y * n + z] &= bit
        self.used_middle[x * n + z] &= bit
        self.used_right[x * n + y] &= bit
        self.right_inv[(x * n + y) * n + v] = -1
        self.middle_inv[(x * n + z) * n + v] = -1
        self.filled -= 1

    def _instance_ok(self, x: int, y: int, z: int, w: int) -> bool:
        n = self.n
        T = self.cells
        p = T[(x * n + y) * n + z]
        q = T[(x * n + y) * n + w]
        r = T[(x * n + z) * n + w]
        if p < 0 or q < 0 or r < 0:
            return True
        a = T[(y * n + p) * n + q]
        b = T[(z * n + p) * n + r]
        c = T[(w * n + q) * n + r]
        if a >= 0:
            if (b >= 0 and a != b) or (c >= 0 and a != c):
                return False
        return not (b >= 0 and c >= 0 and b != c)

    def consistent_after(self, i: int, j: int, k: int) -> bool:
        """Check every axiom (ii) instance in which cell ``(i, j, k)`` takes part."""
        n = self.n
        ok = self._instance_ok
        rinv, minv = self.right_inv, self.middle_inv
        for t in range(n):
            if not (ok(i, j, k, t) and ok(i, j, t, k) and ok(i, t, j, k)):
                return False
        for x in range(n):
            base_r = (x * n + i) * n
            base_m = (x * n + i) * n
            # cell is [y, p, q] with y = i
            z, w = rinv[base_r + j], rinv[base_r + k]
            if z >= 0 and w >= 0 and not ok(x, i, z, w):
                return False
            # cell is [z, p, r] with z = i
            y, w = minv[base_m + j], rinv[base_r + k]
            if y >= 0 and w >= 0 and not ok(x, y, i, w):
                return False
            # cell is [w, q, r] with w = i
            y, z = minv[base_m + j], minv[base_m + k]
            if y >= 0 and z >= 0 and not ok(x, y, z, i):
                return False
        return True

    def to_table(self) -> TribracketTable:
        n = self.n
        return TribracketTable(np.array(self.cells, dtype=np.intp).reshape(n, n, n))


def _cell_coords(n: int) -> list[tuple[int, int, int]]:
    return [(x, y, z) for x in range(n) for y in range(n) for z in range(n)]


def _extend(state: SearchState, coords, start: int, stop: int, out: list) -> None:
    """Depth-first completion of cells ``start..stop-1``; appends the cell lists reached."""
    if start == stop:
        out.append(tuple(state.cells))
        return
    x, y, z = coords[start]
    mask = state.candidates(x, y, z)
    while mask:
        low = mask & -mask
        v = low.bit_length() - 1
        mask ^= low
        state.assign(x, y, z, v)
        if state.consistent_after(x, y, z):
            _extend(state, coords, start + 1, stop, out)
        state.unassign(x, y, z)


def _replay(n: int, prefix: Sequence[int]) -> SearchState:
    state = SearchState(n)
    for (x, y, z), v in zip(_cell_coords(n), prefix):
        state.assign(x, y, z, v)
    return state


def _complete_prefix(args) -> list[tuple[int, ...]]:
    n, prefix = args
    coords = _cell_coords(n)
    out: list = []
    _extend(_replay(n, prefix), coords, len(prefix), n ** 3, out)
    return out


def _split_depth(n: int, jobs: int) -> int:
    # about a layer's first row gives ample independent subtrees for small job counts
    return min(n ** 3, max(1, n + (jobs > 8)))


def _raw_cells(n: int, jobs: int = 1) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    coords = _cell_coords(n)
    if jobs <= 1:
        out: list = []
        _extend(SearchState(n), coords, 0, n ** 3, out)
        return out
    depth = _split_depth(n, jobs)
    prefixes: list = []
    _extend(SearchState(n), coords, 0, depth, prefixes)
    prefixes = [p[:depth] for p in prefixes]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_complete_prefix, [(n, p) for p in prefixes]))
    # prefixes are produced in DFS order, so concatenation matches the sequential order
    return [cells for part in parts for cells in part]


def enumerate_tribrackets(n: int, filter: str = "all", jobs: int = 1) -> Iterator[TribracketTable]:
    """Yield every tribracket table of order ``n`` exactly once (raw, not up to isomorphism)."""
    if filter not in FILTERS:
        raise ValueError(f"filter must be one of {FILTERS}")
    if n < 0:
        raise ValueError("order must be non-negative")
    for cells in _raw_cells(n, jobs):
        T = TribracketTable(np.array(cells, dtype=np.intp).reshape(n, n, n))
        if filter == "entropic" and not is_entropic(T):
            continue
        yield T


def deduplicate(tables: Iterable[TribracketTable],
                max_order: int = DEFAULT_CANONICAL_BOUND) -> list[TribracketTable]:
    """Canonical representatives of the isomorphism classes present, sorted."""
    forms = {}
    for T in tables:
        C = canonical_form(T, max_order)
        forms[C.key()] = C
    return [forms[k] for k in sorted(forms)]


def classify(n: int, filter: str = "all", jobs: int = 1,
             max_order: int = DEFAULT_CANONICAL_BOUND) -> list[TribracketTable]:
    classes = deduplicate(enumerate_tribrackets(n, filter, jobs), max_order)
    for k, C in enumerate(classes, start=1):
        C.name = f"T{n}^{k}"
    log.info("order %d filter %s: %d classes", n, filter, len(classes))
    return classes


class ClassRegistry:
    """Stable labels ``T<order>^<index>`` for isomorphism classes.

    Seeded classes keep their names; anything new gets the next free index
    for its order, in discovery order.
    """

    def __init__(self, seeds: Iterable[TribracketTable] = (),
                 max_canonical: int = DEFAULT_CANONICAL_BOUND):
        self.max_canonical = max_canonical
        self.entries: list[tuple[str, TribracketTable]] = []
        self._by_form: dict[tuple, str] = {}
        for T in seeds:
            self.label(T, preferred=T.name)

    def _next_label(self, n: int) -> str:
        used = {lab for lab, T in self.entries if T.order == n}
        k = 1
        while f"T{n}^{k}" in used:
            k += 1
        return f"T{n}^{k}"

    def find(self, T: TribracketTable) -> str | None:
        if T.order <= self.max_canonical:
            return self._by_form.get((T.order, canonical_form(T, self.max_canonical).key()))
        sig = sorted(element_signatures(T))
        for lab, R in self.entries:
            if R.order == T.order and sorted(element_signatures(R)) == sig and are_isomorphic(R, T):
                return lab
        return None

    def label(self, T: TribracketTable, preferred: str | None = None) -> str:
        found = self.find(T)
        if found is not None:
            return found
        lab = preferred if preferred and preferred not in {l for l, _ in self.entries} \
            else self._next_label(T.order)
        self.entries.append((lab, T))
        if T.order <= self.max_canonical:
            self._by_form[(T.order, canonical_form(T, self.max_canonical).key())] = lab
        return lab

    def table(self, label: str) -> TribracketTable:
        for lab, T in self.entries:
            if lab == label:
                return T
        raise KeyError(label)


def product_table(classes: Sequence[TribracketTable], registry: ClassRegistry | None = None
                  ) -> tuple[list[str], list[list[str]], ClassRegistry]:
    """Labels of ``Hom(classes[i], classes[j])`` up to isomorphism.

    Returns the row/column labels, the label matrix and the registry (which
    now also holds any classes discovered along the way).
    """
    registry = registry or ClassRegistry()
    heads = [registry.label(C, preferred=C.name) for C in classes]
    matrix = []
    for X in classes:
        row = []
        for Y in classes:
            H = homset_tribracket(X, Y).table
            row.append(registry.label(H))
        matrix.append(row)
    return heads, matrix, registry


def format_product_table(heads: Sequence[str], matrix: Sequence[Sequence[str]]) -> str:
    width = max(len(h) for h in list(heads) + [c for row in matrix for c in row] + ["*"])
    lines = [" ".join(s.rjust(width) for s in ["*", *heads])]
    for h, row in zip(heads, matrix):
        lines.append(" ".join(s.rjust(width) for s in [h, *row]))
    return "\n".join(lines) + "\n"
