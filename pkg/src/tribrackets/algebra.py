"""Finite horizontal tribrackets stored as operation 3-tensors.

Elements are the integers ``0..n-1`` internally; every text format in the
package is 1-based.  ``T.entries[x, y, z]`` holds ``[x, y, z]``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SLOTS = ("left", "middle", "right")


class TribracketError(ValueError):
    """Raised for malformed tables, bad constructor arguments and bad indices."""


class NotQuasigroupLine(TribracketError):
    def __init__(self, slot: str, coords: tuple[int, int]):
        self.slot = slot
        self.coords = coords
        super().__init__(f"not a quasigroup line: {slot} slot at fixed {coords}")


class TribracketTable:
    """An order-``n`` ternary operation on ``{0..n-1}``.

    The table is immutable; derived data (division tables, the entropic
    verdict) is computed lazily and cached.
    """

    __slots__ = ("entries", "name", "__dict__")

    def __init__(self, entries, name: str | None = None):
        arr = np.asarray(entries, dtype=np.intp)
        if arr.size == 0:
            arr = np.zeros((0, 0, 0), dtype=np.intp)
        n = arr.shape[0]
        if arr.shape != (n, n, n):
            raise TribracketError(f"entries must have shape (n, n, n), got {arr.shape}")
        if n and (arr.min() < 0 or arr.max() >= n):
            bad = tuple(int(i) for i in np.argwhere((arr < 0) | (arr >= n))[0])
            raise TribracketError(f"entry at {bad} is outside 0..{n - 1}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.entries = arr
        self.name = name

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __len__(self) -> int:
        return self.order

    def __call__(self, x: int, y: int, z: int) -> int:
        return bracket_eval(self, x, y, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TribracketTable):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.order, self.entries.tobytes()))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<TribracketTable{label} order={self.order}>"

    def key(self) -> tuple[int, ...]:
        """Row-major flattening, the ordering used for canonical forms."""
        return tuple(int(v) for v in self.entries.reshape(-1))

    def to_nested(self, one_based: bool = True) -> list:
        return (self.entries + int(one_based)).tolist()

    @cached_property
    def _division(self) -> tuple[np.ndarray, np.ndarray, np.ndarray] | NotQuasigroupLine:
        n = self.order
        E = self.entries
        left = np.full((n, n, n), -1, dtype=np.intp)
        middle = np.full((n, n, n), -1, dtype=np.intp)
        right = np.full((n, n, n), -1, dtype=np.intp)
        a, b, c = np.indices((n, n, n))
        # left[y, z, t] = a with [a, y, z] = t, and so on
        left[b, c, E] = a
        middle[a, c, E] = b
        right[a, b, E] = c
        for slot, table in zip(SLOTS, (left, middle, right)):
            missing = np.argwhere(table < 0)
            if missing.size:
                i, j, _ = missing[0]
                return NotQuasigroupLine(slot, (int(i), int(j)))
        for t in (left, middle, right):
            t.setflags(write=False)
        return left, middle, right

    @cached_property
    def _entropic_witness(self):
        return _find_entropic_violation(self.entries)


def _check_index(T: TribracketTable, *xs: int) -> None:
    for x in xs:
        if not 0 <= x < T.order:
            raise TribracketError(f"element {x} out of range for order {T.order}")


def bracket_eval(T: TribracketTable, x: int, y: int, z: int) -> int:
    """Return ``[x, y, z]`` (0-based)."""
    _check_index(T, x, y, z)
    return int(T.entries[x, y, z])


def divide(T: TribracketTable, slot: str, known1: int, known2: int, target: int) -> int:
    """Solve for the missing argument in ``slot`` so the bracket equals ``target``.

    ``left`` solves ``[a, known1, known2] = target``, ``middle`` solves
    ``[known1, b, known2] = target`` and ``right`` solves
    ``[known1, known2, c] = target``.
    """
    if slot not in SLOTS:
        raise TribracketError(f"slot must be one of {SLOTS}, got {slot!r}")
    _check_index(T, known1, known2, target)
    tables = T._division
    table = tables[SLOTS.index(slot)] if not isinstance(tables, NotQuasigroupLine) else None
    if table is None or table[known1, known2, target] < 0:
        # recompute the specific line so the error names it
        E = T.entries
        line = {"left": E[:, known1, known2], "middle": E[known1, :, known2],
                "right": E[known1, known2, :]}[slot]
        hits = np.flatnonzero(line == target)
        if len(hits) != 1 or len(set(line.tolist())) != T.order:
            raise NotQuasigroupLine(slot, (known1, known2))
        return int(hits[0])
    return int(table[known1, known2, target])


@dataclass(frozen=True)
class AxiomReport:
    axiom_i_ok: bool
    axiom_ii_ok: bool
    entropic_ok: bool | None
    violations: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.axiom_i_ok and self.axiom_ii_ok

    @property
    def first_violation(self) -> tuple | None:
        for axiom in ("i", "ii", "entropic"):
            if axiom in self.violations:
                return (axiom, self.violations[axiom])
        return None


def _axiom_i_violation(E: np.ndarray):
    n = E.shape[0]
    expected = np.arange(n)
    # axis 0 varies the left slot, axis 1 the middle, axis 2 the right
    for axis, slot in zip((0, 1, 2), SLOTS):
        lines = np.moveaxis(E, axis, -1)
        bad = np.argwhere((np.sort(lines, axis=-1) != expected).any(axis=-1))
        if bad.size:
            i, j = (int(v) for v in bad[0])
            return (slot, i, j)
    return None


def _axiom_ii_violation(E: np.ndarray):
    n = E.shape[0]
    x, y, z, w = np.indices((n, n, n, n)).reshape(4, -1)
    p = E[x, y, z]
    q = E[x, y, w]
    r = E[x, z, w]
    first = E[y, p, q]
    second = E[z, p, r]
    third = E[w, q, r]
    bad = np.flatnonzero((first != second) | (second != third))
    if bad.size:
        k = bad[0]
        return (int(x[k]), int(y[k]), int(z[k]), int(w[k]))
    return None


def axiom_ii_sides(T: TribracketTable, x: int, y: int, z: int, w: int) -> tuple[int, int, int]:
    """The three expressions that axiom (ii) requires to coincide."""
    E = T.entries
    p, q, r = E[x, y, z], E[x, y, w], E[x, z, w]
    return int(E[y, p, q]), int(E[z, p, r]), int(E[w, q, r])


def entropic_sides(T: TribracketTable, values: Sequence[int]) -> tuple[int, int]:
    """Evaluate ``[[x,y,z],[u,v,w],[a,b,c]]`` and ``[[x,u,a],[y,v,b],[z,w,c]]``."""
    x, y, z, u, v, w, a, b, c = values
    E = T.entries
    lhs = E[E[x, y, z], E[u, v, w], E[a, b, c]]
    rhs = E[E[x, u, a], E[y, v, b], E[z, w, c]]
    return int(lhs), int(rhs)


_ENTROPIC_BLOCK = 1 << 22  # largest vectorised slice of the n**9 scan, in elements


def _find_entropic_violation(E: np.ndarray):
    n = E.shape[0]
    if n == 0:
        return None
    flat = E.reshape(-1)
    shifted = E * (n * n)
    middle = E * n
    # slices fix x, y, z (and u too when n**6 entries would not fit in one block)
    u_slices = [slice(None)] if n ** 6 <= _ENTROPIC_BLOCK else [slice(u, u + 1) for u in range(n)]
    inner_all = (flat[:, None] * n + flat[None, :]).reshape((n,) * 6) if len(u_slices) == 1 else None
    for us in u_slices:
        if inner_all is not None:
            inner = inner_all
        else:
            # codes of ([u, v, w], [a, b, c]) for the fixed u
            inner = (E[us].reshape(-1)[:, None] * n + flat[None, :]).reshape((1,) + (n,) * 5)
        for x, y, z in itertools.product(range(n), repeat=3):
            lhs = E[E[x, y, z]].reshape(-1)[inner]
            idx = (shifted[x][us][:, None, None, :, None, None]
                   + middle[y][None, :, None, None, :, None]
                   + E[z][None, None, :, None, None, :])
            bad = lhs != flat[idx]
            if bad.any():
                u, v, w, a, b, c = (int(i) for i in np.unravel_index(np.argmax(bad), bad.shape))
                u += us.start or 0
                return (x, y, z, u, v, w, a, b, c)
    return None


def validate(T: TribracketTable, entropic: bool = True) -> AxiomReport:
    """Check axioms (i) and (ii), and optionally the entropic identity.

    The entropic check is skipped (``entropic_ok is None``) when asked to or
    when the table is not a tribracket to begin with.
    """
    E = T.entries
    violations = {}
    if T.order == 0:
        return AxiomReport(True, True, True if entropic else None)
    wit = _axiom_i_violation(E)
    if wit is not None:
        violations["i"] = wit
    wit = _axiom_ii_violation(E)
    if wit is not None:
        violations["ii"] = wit
    entropic_ok = None
    if entropic and not violations:
        wit = T._entropic_witness
        entropic_ok = wit is None
        if wit is not None:
            violations["entropic"] = wit
    return AxiomReport("i" not in violations, "ii" not in violations, entropic_ok, violations)


def is_valid(T: TribracketTable) -> bool:
    return validate(T, entropic=False).valid


def is_entropic(T: TribracketTable, witness: bool = False):
    """Exhaustive check of the entropic identity over all ``n**9`` tuples.

    With ``witness=True`` returns ``(verdict, tuple_or_None)``.
    """
    wit = T._entropic_witness
    if witness:
        return wit is None, wit
    return wit is None


def relabel(T: TribracketTable, perm: Sequence[int], name: str | None = None) -> TribracketTable:
    """Image of ``T`` under the bijection ``x -> perm[x]``."""
    n = T.order
    perm = np.asarray(perm, dtype=np.intp)
    if sorted(perm.tolist()) != list(range(n)):
        raise TribracketError("relabeling must be a permutation of the elements")
    inv = np.argsort(perm)
    new = perm[T.entries[np.ix_(inv, inv, inv)]]
    return TribracketTable(new, name=name)


# --- groups ---------------------------------------------------------------

class GroupTable:
    """A finite group given by its multiplication table (row ``g``, column ``h`` holds ``gh``)."""

    def __init__(self, table, name: str | None = None):
        M = np.asarray(table, dtype=np.intp)
        n = M.shape[0] if M.ndim == 2 else -1
        if M.ndim != 2 or M.shape != (n, n) or n == 0:
            raise TribracketError("group table must be a non-empty square matrix")
        if M.min() < 0 or M.max() >= n:
            raise TribracketError("group table entries out of range")
        # associativity: (gh)k == g(hk)
        g, h, k = np.indices((n, n, n))
        if not np.array_equal(M[M[g, h], k], M[g, M[h, k]]):
            bad = np.argwhere(M[M[g, h], k] != M[g, M[h, k]])[0]
            raise TribracketError(f"group table is not associative at {tuple(int(v) for v in bad)}")
        ids = [e for e in range(n) if (M[e] == np.arange(n)).all() and (M[:, e] == np.arange(n)).all()]
        if not ids:
            raise TribracketError("group table has no identity")
        e = ids[0]
        inverse = np.full(n, -1, dtype=np.intp)
        for x in range(n):
            hits = np.flatnonzero(M[x] == e)
            if len(hits) != 1 or M[hits[0], x] != e:
                raise TribracketError(f"element {x} has no two-sided inverse")
            inverse[x] = hits[0]
        M.setflags(write=False)
        inverse.setflags(write=False)
        self.table = M
        self.identity = e
        self.inverse = inverse
        self.name = name

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __repr__(self) -> str:
        return f"<GroupTable {self.name or ''} order={self.order}>"


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise TribracketError("cyclic group order must be positive")
    i = np.arange(n)
    return GroupTable((i[:, None] + i[None, :]) % n, name=f"Z{n}")


def _perm_group(perms: list[tuple[int, ...]], name: str) -> GroupTable:
    index = {p: i for i, p in enumerate(perms)}
    # (pq)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(len(p)))] for q in perms] for p in perms]
    return GroupTable(table, name=name)


def symmetric_group(n: int) -> GroupTable:
    if not 1 <= n <= 4:
        raise TribracketError("symmetric groups are provided for 1 <= n <= 4")
    return _perm_group(sorted(itertools.permutations(range(n))), f"S{n}")


def dihedral_group(n: int) -> GroupTable:
    """Symmetries of the regular ``n``-gon (order ``2n``)."""
    if n < 1:
        raise TribracketError("dihedral group parameter must be positive")
    rot = [tuple((x + k) % n for x in range(n)) for k in range(n)]
    ref = [tuple((k - x) % n for x in range(n)) for k in range(n)]
    perms = sorted(set(rot + ref))
    if n <= 2:  # the permutation action is not faithful on so few points
        return direct_product(cyclic_group(2), cyclic_group(n)) if n == 2 else cyclic_group(2)
    return _perm_group(perms, f"D{n}")


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    m = H.order
    n = G.order * m
    idx = np.arange(n)
    g, h = idx // m, idx % m
    table = G.table[g[:, None], g[None, :]] * m + H.table[h[:, None], h[None, :]]
    return GroupTable(table, name=f"{G.name}x{H.name}")


def parse_group_spec(spec: str) -> GroupTable:
    """Parse ``Z4``, ``S3``, ``D4`` or products such as ``Z2xZ2``."""
    group = None
    for part in spec.strip().split("x"):
        if len(part) < 2 or part[0] not in "ZSD" or not part[1:].isdigit():
            raise TribracketError(f"bad group factor {part!r} in {spec!r}")
        k = int(part[1:])
        factor = {"Z": cyclic_group, "S": symmetric_group, "D": dihedral_group}[part[0]](k)
        group = factor if group is None else direct_product(group, factor)
    group.name = spec.strip()
    return group


# --- constructions ---------------------------------------------------------

def make_alexander(n: int, s: int, t: int) -> TribracketTable:
    """``[x, y, z] = t*y + s*z - t*s*x`` over ``Z/n`` with units ``s`` and ``t``."""
    if n < 1:
        raise TribracketError("modulus must be positive")
    for label, value in (("s", s), ("t", t)):
        if math.gcd(value % n, n) != 1:
            raise TribracketError(f"{label}={value} is not a unit mod {n}")
    x, y, z = np.indices((n, n, n))
    entries = (t * y + s * z - t * s * x) % n
    return TribracketTable(entries, name=f"Alexander(Z{n},s={s % n},t={t % n})")


def make_dehn(G: GroupTable) -> TribracketTable:
    """``[x, y, z] = y x^-1 z`` over the group ``G``."""
    if not isinstance(G, GroupTable):
        raise TribracketError("make_dehn needs a GroupTable")
    M = G.table
    x, y, z = np.indices((G.order,) * 3)
    entries = M[M[y, G.inverse[x]], z]
    return TribracketTable(entries, name=f"Dehn({G.name})")


# --- idempotents ------------------------------------------------------------

def idempotent_elements(T: TribracketTable) -> frozenset[int]:
    n = T.order
    diag = T.entries[np.arange(n), np.arange(n), np.arange(n)]
    return frozenset(int(x) for x in np.flatnonzero(diag == np.arange(n)))


def idempotent_number(T: TribracketTable) -> int:
    return len(idempotent_elements(T))


class SubTribracket(NamedTuple):
    table: TribracketTable
    legend: tuple[int, ...]  # legend[i] is the original element behind new element i


def subtribracket_closure(T: TribracketTable, S: Iterable[int]) -> SubTribracket:
    """Smallest subset containing ``S`` that is closed under the bracket."""
    current = set(int(s) for s in S)
    _check_index(T, *current)
    E = T.entries
    while True:
        idx = np.array(sorted(current), dtype=np.intp)
        produced = set(np.unique(E[np.ix_(idx, idx, idx)]).tolist()) if len(idx) else set()
        if produced <= current:
            break
        current |= produced
    legend = tuple(sorted(current))
    if not legend:
        return SubTribracket(TribracketTable(np.zeros((0, 0, 0))), ())
    idx = np.array(legend, dtype=np.intp)
    position = np.full(T.order, -1, dtype=np.intp)
    position[idx] = np.arange(len(idx))
    sub = position[E[np.ix_(idx, idx, idx)]]
    return SubTribracket(TribracketTable(sub), legend)


def idem_subtribracket(T: TribracketTable) -> SubTribracket:
    return subtribracket_closure(T, idempotent_elements(T))


EMPTY = TribracketTable(np.zeros((0, 0, 0)), name="T0^1")
TRIVIAL = TribracketTable(np.zeros((1, 1, 1)), name="T1^1")
