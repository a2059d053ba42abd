"""Region colorings of diagrams and the link homset tribracket."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TribracketTable, divide, idempotent_number
from .diagrams import (DEFAULT_CONVENTION, ConventionTable, CrossingRelation, Diagram,
                       crossing_relations, extract_faces)
from .morphisms import (DEFAULT_CANONICAL_BOUND, HomsetTribracket, _require_entropic,
                        canonical_form, pointwise_table)


@dataclass(frozen=True)
class Coloring:
    diagram: str
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class LinkHomset:
    homset: HomsetTribracket
    diagram: str
    tribracket: str

    @property
    def table(self) -> TribracketTable:
        return self.homset.table

    @property
    def colorings(self) -> tuple[Coloring, ...]:
        return self.homset.legend


@dataclass(frozen=True)
class InvariantReport:
    diagram: str
    tribracket_order: int
    count: int
    idempotent_number: int
    canonical_form: TribracketTable | None


def satisfies(assignment, relations, X: TribracketTable) -> bool:
    E = X.entries
    return all(assignment[r.d] == E[assignment[r.a], assignment[r.b], assignment[r.c]]
               for r in relations)


def _propagate(values: list[int], relations: list[CrossingRelation], X: TribracketTable) -> bool:
    """Fill in every region forced by a relation with one unknown role; False on contradiction."""
    E = X.entries
    changed = True
    while changed:
        changed = False
        for rel in relations:
            a, b, c, d = (values[r] for r in rel.roles)
            unknown = {r for r in rel.roles if values[r] < 0}
            if not unknown:
                if E[a, b, c] != d:
                    return False
                continue
            if len(unknown) > 1 or sum(r in unknown for r in rel.roles) > 1:
                continue
            if d < 0:
                values[rel.d] = int(E[a, b, c])
            elif a < 0:
                values[rel.a] = divide(X, "left", b, c, d)
            elif b < 0:
                values[rel.b] = divide(X, "middle", a, c, d)
            else:
                values[rel.c] = divide(X, "right", a, b, d)
            changed = True
    return True


def _next_region(values: list[int], relations: list[CrossingRelation]) -> int:
    best, score = -1, -1
    for rel in relations:
        known = sum(values[r] >= 0 for r in rel.roles)
        for r in rel.roles:
            if values[r] < 0 and known > score:
                best, score = r, known
    if best < 0:
        best = values.index(-1)
    return best


def color_regions(region_count: int, relations: list[CrossingRelation],
                  X: TribracketTable) -> list[tuple[int, ...]]:
    """All assignments of elements of ``X`` to regions satisfying every relation, sorted."""
    if X.order == 0:
        return [] if region_count else [()]
    out: list[tuple[int, ...]] = []

    def search(values: list[int]) -> None:
        if not _propagate(values, relations, X):
            return
        if -1 not in values:
            out.append(tuple(values))
            return
        r = _next_region(values, relations)
        for v in range(X.order):
            trial = values[:]
            trial[r] = v
            search(trial)

    search([-1] * region_count)
    return sorted(out)


def enumerate_colorings(D: Diagram, X: TribracketTable,
                        convention: ConventionTable = DEFAULT_CONVENTION) -> list[Coloring]:
    R = extract_faces(D)
    relations = crossing_relations(D, R, convention)
    return [Coloring(D.name, a) for a in color_regions(R.count, relations, X)]


def counting_invariant(D: Diagram, X: TribracketTable,
                       convention: ConventionTable = DEFAULT_CONVENTION) -> int:
    return len(enumerate_colorings(D, X, convention))


def link_homset_tribracket(D: Diagram, X: TribracketTable,
                           convention: ConventionTable = DEFAULT_CONVENTION) -> LinkHomset:
    """The colorings of ``D`` by an entropic ``X`` under the pointwise bracket."""
    _require_entropic(X)
    colorings = enumerate_colorings(D, X, convention)
    regions = extract_faces(D).count
    images = np.array([c.assignment for c in colorings], dtype=np.intp).reshape(len(colorings), regions)
    table = pointwise_table(images, X)
    table.name = f"Hom(T({D.name}),{X.name or 'X'})"
    return LinkHomset(HomsetTribracket(table, tuple(colorings)), D.name, X.name or "X")


def link_invariant_report(D: Diagram, X: TribracketTable,
                          convention: ConventionTable = DEFAULT_CONVENTION,
                          max_canonical: int = DEFAULT_CANONICAL_BOUND) -> InvariantReport:
    """Count, idempotent number and (when small enough) canonical form of the homset.

    Homsets larger than ``max_canonical`` report ``canonical_form=None``.
    """
    H = link_homset_tribracket(D, X, convention).table
    canon = canonical_form(H, max_canonical) if H.order <= max_canonical else None
    return InvariantReport(D.name, X.order, H.order, idempotent_number(H), canon)
