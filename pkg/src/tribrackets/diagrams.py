"""Oriented link diagrams from PD codes, their regions and crossing relations.

PD convention: each crossing ``X a b c d`` lists its four edge ends
counterclockwise starting from the incoming under-strand, so the under-strand
runs ``a -> c``.  Labels increase along the orientation of each component.

Quadrant ``q`` of a crossing is the corner between slots ``q`` and ``q + 1``
(mod 4); with the under-strand drawn south to north, quadrants 0..3 are SE,
NE, NW and SW.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .formats import FormatError

LEFT, RIGHT = 0, 1


class PDError(FormatError):
    """Invalid PD text or an unusable diagram."""


class EmbeddingError(PDError):
    """Face tracing did not produce a planar 4-valent embedding."""


@dataclass(frozen=True)
class Diagram:
    name: str
    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    components: int
    # head_slot[e] = (crossing, slot) where edge e enters a crossing
    head_slot: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def edge_count(self) -> int:
        return 2 * len(self.crossings)

    def writhe(self) -> int:
        return sum(self.signs)

    def pd_text(self) -> str:
        lines = [f"name {self.name}"]
        lines += ["X " + " ".join(str(e) for e in X) for X in self.crossings]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RegionGraph:
    regions: tuple[tuple[tuple[int, int], ...], ...]  # cyclic (edge, side) incidences
    quadrant_region: tuple[tuple[int, int, int, int], ...]  # per crossing, quadrant -> region

    @property
    def count(self) -> int:
        return len(self.regions)


@dataclass(frozen=True)
class CrossingRelation:
    """A coloring must satisfy ``color[d] == [color[a], color[b], color[c]]``."""

    crossing: int
    a: int
    b: int
    c: int
    d: int

    @property
    def roles(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class ConventionTable:
    """For each crossing sign, the quadrant occupied by the roles a, b, c and d."""

    name: str
    positive: tuple[int, int, int, int]
    negative: tuple[int, int, int, int]

    def roles_for(self, sign: int) -> tuple[int, int, int, int]:
        table = {1: self.positive, -1: self.negative}.get(sign)
        if table is None or sorted(table) != [0, 1, 2, 3]:
            raise ValueError(f"convention {self.name!r} has no valid entry for sign {sign:+d}")
        return table


# a lies left of both strands and d = [a, b, c] right of both; b is left of the
# over-strand only and c left of the under-strand only.
STRAND_SIDES = ConventionTable("strand-sides", positive=(2, 1, 3, 0), negative=(3, 0, 2, 1))
DEFAULT_CONVENTION = STRAND_SIDES
CONVENTIONS = {STRAND_SIDES.name: STRAND_SIDES}


# --- parsing -----------------------------------------------------------------

_X_RE = re.compile(r"^X\s+(.*)$")


def _split_records(text: str, source: str | None):
    """Yield ``(name, first_line, [(line_no, crossing_tuple)])`` for each record."""
    records = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            current = None
            continue
        for piece in raw.split("/"):
            line = piece.strip()
            if line.startswith("#"):
                break
            if not line:
                continue
            if line.startswith("name"):
                parts = line.split()
                if len(parts) != 2:
                    raise PDError(f"bad header {line!r}; expected 'name <identifier>'", source, lineno)
                current = [parts[1], lineno, []]
                records.append(current)
                continue
            m = _X_RE.match(line)
            if not m:
                raise PDError(f"unrecognised line {line!r}", source, lineno)
            fields = m.group(1).replace(",", " ").split()
            if len(fields) != 4 or not all(f.isdigit() for f in fields):
                raise PDError(f"crossing needs four positive edge labels: {line!r}", source, lineno)
            if current is None:
                current = [f"diagram{len(records) + 1}", lineno, []]
                records.append(current)
            current[2].append((lineno, tuple(int(f) for f in fields)))
    return records


def _orient(name, crossings, lines, source):
    """Work out which slot each edge enters through; returns (head_slot, components)."""
    slots: dict[int, list[tuple[int, int]]] = {}
    for i, X in enumerate(crossings):
        for p, e in enumerate(X):
            slots.setdefault(e, []).append((i, p))

    def other(e, slot):
        s1, s2 = slots[e]
        return s2 if slot == s1 else s1

    head: dict[int, tuple[int, int]] = {}

    def set_head(e, slot, lineno):
        if e in head and head[e] != slot:
            raise PDError(f"{name}: inconsistent orientation of edge {e}", source, lineno)
        if e in head:
            return False
        head[e] = slot
        return True

    # the under-strand enters at slot 0 and leaves at slot 2
    pending = []
    for i, X in enumerate(crossings):
        if set_head(X[0], (i, 0), lines[i]):
            pending.append(X[0])
        tail_edge = X[2]
        if set_head(tail_edge, other(tail_edge, (i, 2)), lines[i]):
            pending.append(tail_edge)

    # component membership: an edge continues through slot p into slot p + 2
    parent = {e: e for e in slots}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for X in crossings:
        for p in (0, 1):
            ra, rb = find(X[p]), find(X[p + 2])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comps: dict[int, list[int]] = {}
    for e in slots:
        comps.setdefault(find(e), []).append(e)

    def propagate(queue):
        while queue:
            e = queue.pop()
            i, p = head[e]
            nxt = crossings[i][(p + 2) % 4]
            if set_head(nxt, other(nxt, (i, (p + 2) % 4)), lines[i]):
                queue.append(nxt)
            ti, tp = other(e, head[e])
            prev = crossings[ti][(tp + 2) % 4]
            if set_head(prev, (ti, (tp + 2) % 4), lines[ti]):
                queue.append(prev)

    propagate(pending)
    for members in comps.values():
        if any(e in head for e in members):
            continue
        # a component that never passes under: orient it along increasing labels
        m = min(members)
        succ = m + 1 if m + 1 in members else m
        choice = slots[m][0]
        for slot in slots[m]:
            i, p = slot
            if crossings[i][(p + 2) % 4] == succ:
                choice = slot
                break
        set_head(m, choice, lines[choice[0]])
        propagate([m])

    # labels must run consecutively along each component's orientation
    for members in comps.values():
        lo, hi = min(members), max(members)
        if sorted(members) != list(range(lo, hi + 1)):
            raise PDError(f"{name}: component edges {sorted(members)} are not a consecutive range",
                          source, lines[0])
        for e in members:
            i, p = head[e]
            nxt = crossings[i][(p + 2) % 4]
            expected = e + 1 if e < hi else lo
            if nxt != expected and len(members) > 1:
                raise PDError(f"{name}: non-consecutive component labeling: edge {e} is followed "
                              f"by edge {nxt} at crossing {i + 1}", source, lines[i])
    return head, len(comps)


def _build_diagram(name, first_line, entries, source) -> Diagram:
    crossings = tuple(X for _, X in entries)
    lines = [k for k, _ in entries]
    c = len(crossings)
    if c == 0:
        return Diagram(name, (), (), 1, {})
    counts: dict[int, int] = {}
    where: dict[int, int] = {}
    for k, X in entries:
        for e in X:
            counts[e] = counts.get(e, 0) + 1
            where.setdefault(e, k)
    for e in sorted(counts):
        if counts[e] != 2:
            raise PDError(f"{name}: edge {e} multiplicity {counts[e]}", source, where[e])
    if sorted(counts) != list(range(1, 2 * c + 1)):
        bad = min(e for e in counts if not 1 <= e <= 2 * c)
        raise PDError(f"{name}: edge labels must be 1..{2 * c}; found {bad}", source, where[bad])
    # the 4-valent graph must be connected
    parent = list(range(c))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for i, X in enumerate(crossings):
        for e in X:
            if e in owner:
                a, b = find(owner[e]), find(i)
                parent[max(a, b)] = min(a, b)
            else:
                owner[e] = i
    roots = {find(i) for i in range(c)}
    if len(roots) > 1:
        raise PDError(f"{name}: disconnected diagram ({len(roots)} pieces); split diagrams are "
                      "not supported", source, first_line)
    head, components = _orient(name, crossings, lines, source)
    signs = []
    for i, X in enumerate(crossings):
        # the over-strand entering through slot d means a positive crossing
        signs.append(1 if head[X[3]] == (i, 3) else -1)
    return Diagram(name, crossings, tuple(signs), components, head)


def parse_pd_file(text: str, source: str | None = None) -> list[Diagram]:
    records = _split_records(text, source)
    if not records:
        raise PDError("empty input: no PD records found", source)
    return [_build_diagram(name, first, entries, source) for name, first, entries in records]


def parse_pd(text: str, source: str | None = None) -> Diagram:
    """Parse a single PD record (the ``name`` header is optional here)."""
    diagrams = parse_pd_file(text, source)
    if len(diagrams) != 1:
        raise PDError(f"expected one PD record, found {len(diagrams)}", source)
    return diagrams[0]


def read_pd(path: str | Path) -> list[Diagram]:
    path = Path(path)
    return parse_pd_file(path.read_text(), source=str(path))


# --- faces --------------------------------------------------------------------

def _slot_partner(D: Diagram) -> dict[tuple[int, int], tuple[int, int]]:
    slots: dict[int, list[tuple[int, int]]] = {}
    for i, X in enumerate(D.crossings):
        for p, e in enumerate(X):
            slots.setdefault(e, []).append((i, p))
    partner = {}
    for s1, s2 in slots.values():
        partner[s1] = s2
        partner[s2] = s1
    return partner


def extract_faces(D: Diagram) -> RegionGraph:
    """Trace the complementary regions of a connected diagram."""
    c = D.crossing_count
    if c == 0:
        return RegionGraph(regions=((), ()), quadrant_region=())
    partner = _slot_partner(D)

    def side(i: int, p: int, corner_after: bool) -> tuple[int, int]:
        """(edge, side) of the corner that lies just clockwise (or counterclockwise) of slot p."""
        e = D.crossings[i][p]
        incoming = D.head_slot[e] == (i, p)
        # looking outward along the edge, the corner before slot p is on the right,
        # the corner after it on the left
        on_right = not corner_after
        if incoming:
            on_right = not on_right
        return (e, RIGHT if on_right else LEFT)

    seen: dict[tuple[int, int], int] = {}
    cycles = []
    for start in ((i, q) for i in range(c) for q in range(4)):
        if start in seen:
            continue
        cyc = []
        corner = start
        while corner not in seen:
            seen[corner] = len(cycles)
            i, q = corner
            p = (q + 1) % 4
            cyc.append(side(i, p, corner_after=False))
            j, r = partner[(i, p)]
            corner = (j, r)
        if corner != start:
            raise EmbeddingError(f"{D.name}: face tracing did not close at crossing {i + 1}")
        cycles.append(cyc)
    incidences: dict[tuple[int, int], int] = {}
    for k, cyc in enumerate(cycles):
        for inc in cyc:
            if inc in incidences:
                raise EmbeddingError(f"{D.name}: edge {inc[0]} side {inc[1]} bounds two regions")
            incidences[inc] = k
    # the corner after each slot must agree with the traced face
    for (i, q), k in seen.items():
        if incidences.get(side(i, q, corner_after=True)) != k:
            raise EmbeddingError(f"{D.name}: inconsistent corner at crossing {i + 1}")
    if len(cycles) != c + 2:
        raise EmbeddingError(f"{D.name}: found {len(cycles)} regions, a connected planar diagram "
                             f"with {c} crossings has {c + 2}")
    # number regions by their smallest (edge, side) incidence
    order = sorted(range(len(cycles)), key=lambda k: min(cycles[k]))
    rank = {k: r for r, k in enumerate(order)}
    regions = []
    for k in order:
        cyc = cycles[k]
        s = cyc.index(min(cyc))
        regions.append(tuple(cyc[s:] + cyc[:s]))
    quadrants = tuple(tuple(rank[seen[(i, q)]] for q in range(4)) for i in range(c))
    return RegionGraph(tuple(regions), quadrants)


def crossing_relations(D: Diagram, R: RegionGraph | None = None,
                       convention: ConventionTable = DEFAULT_CONVENTION) -> list[CrossingRelation]:
    R = R if R is not None else extract_faces(D)
    out = []
    for i, sign in enumerate(D.signs):
        quads = R.quadrant_region[i]
        roles = convention.roles_for(sign)
        out.append(CrossingRelation(i, *(quads[q] for q in roles)))
    return out


def relabel_crossings(D: Diagram, order: Sequence[int], name: str | None = None) -> Diagram:
    """The same diagram with its crossings listed in a different order."""
    entries = [(k + 1, D.crossings[i]) for k, i in enumerate(order)]
    return _build_diagram(name or D.name, 1, entries, None)
