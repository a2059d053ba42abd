"""Homomorphisms, homset tribrackets and isomorphism testing."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (TribracketError, TribracketTable, idempotent_elements, is_entropic,
                      relabel)

DEFAULT_CANONICAL_BOUND = 10


class NotEntropicError(TribracketError):
    """Pointwise brackets of homomorphisms into a non-entropic target need not be homomorphisms."""

    def __init__(self, X: TribracketTable, witness=None):
        self.witness = witness
        name = X.name or f"order-{X.order} table"
        detail = f" (entropic identity fails at {tuple(v + 1 for v in witness)})" if witness else ""
        super().__init__(
            f"target {name} is not entropic{detail}; the pointwise bracket of "
            "homomorphisms is only guaranteed to be a homomorphism for entropic targets")


class HomsetConsistencyError(RuntimeError):
    """A pointwise bracket left the homset.  This would contradict the theory and must not happen."""


class CanonicalBoundError(TribracketError):
    pass


@dataclass(frozen=True)
class Homomorphism:
    source: TribracketTable
    target: TribracketTable
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]


@dataclass(frozen=True)
class HomsetTribracket:
    table: TribracketTable
    legend: tuple  # index-aligned with table elements

    @property
    def order(self) -> int:
        return self.table.order

    def images(self) -> list[tuple[int, ...]]:
        return [_image_of(e) for e in self.legend]


@dataclass(frozen=True)
class IsoCertificate:
    permutation: tuple[int, ...]  # element x of the first table maps to permutation[x]

    def inverse(self) -> "IsoCertificate":
        inv = [0] * len(self.permutation)
        for x, y in enumerate(self.permutation):
            inv[y] = x
        return IsoCertificate(tuple(inv))


def _image_of(element) -> tuple[int, ...]:
    for attr in ("image", "assignment"):
        if hasattr(element, attr):
            return tuple(getattr(element, attr))
    return tuple(element)


# --- homomorphisms -----------------------------------------------------------

def is_hom(f: Sequence[int], T: TribracketTable, X: TribracketTable) -> bool:
    f = np.asarray(f, dtype=np.intp).reshape(-1)
    if len(f) != T.order:
        raise TribracketError(f"map has length {len(f)}, source has order {T.order}")
    if len(f) and (f.min() < 0 or f.max() >= X.order):
        raise TribracketError(f"map values must lie in 0..{X.order - 1}")
    if T.order == 0:
        return True
    E = T.entries
    return bool((f[E] == X.entries[f[:, None, None], f[None, :, None], f[None, None, :]]).all())


def _triples_by_level(T: TribracketTable) -> list[tuple[np.ndarray, ...]]:
    m = T.order
    a, b, c = np.indices((m, m, m)).reshape(3, -1)
    d = T.entries.reshape(-1)
    level = np.maximum(np.maximum(a, b), np.maximum(c, d))
    return [(a[level == i], b[level == i], c[level == i], d[level == i]) for i in range(m)]


def enumerate_hom_images(T: TribracketTable, X: TribracketTable) -> list[tuple[int, ...]]:
    """All homomorphism image arrays ``T -> X`` in lexicographic order.

    Following the convention that the homset into the empty tribracket is
    empty, ``X`` of order 0 yields no maps even when ``T`` is empty.
    """
    if X.order == 0:
        return []
    m = T.order
    if m == 0:
        return [()]
    groups = _triples_by_level(T)
    XE = X.entries
    f = np.zeros(m, dtype=np.intp)
    out: list[tuple[int, ...]] = []

    def extend(i: int) -> None:
        A, B, C, D = groups[i]
        for v in range(X.order):
            f[i] = v
            if len(A) and not (XE[f[A], f[B], f[C]] == f[D]).all():
                continue
            if i + 1 == m:
                out.append(tuple(int(t) for t in f))
            else:
                extend(i + 1)

    extend(0)
    return out


def enumerate_homs(T: TribracketTable, X: TribracketTable) -> list[Homomorphism]:
    return [Homomorphism(T, X, img) for img in enumerate_hom_images(T, X)]


def _require_entropic(X: TribracketTable) -> None:
    ok, wit = is_entropic(X, witness=True)
    if not ok:
        raise NotEntropicError(X, wit)


def pointwise_table(images: np.ndarray, X: TribracketTable) -> TribracketTable:
    """Tribracket on a set of maps into ``X`` given by ``[f, g, h](t) = [f(t), g(t), h(t)]``.

    ``images`` is an ``(h, m)`` array whose rows are sorted lexicographically.
    Raises :class:`HomsetConsistencyError` if some pointwise bracket is not
    one of the rows.
    """
    images = np.asarray(images, dtype=np.intp)
    h = images.shape[0]
    if h == 0:
        return TribracketTable(np.zeros((0, 0, 0)))
    m = images.shape[1]
    base = max(X.order, 1)
    weights = base ** np.arange(m - 1, -1, -1, dtype=np.int64) if m else np.zeros(0, np.int64)
    codes = images.astype(np.int64) @ weights
    if np.any(np.diff(codes) <= 0):
        raise ValueError("images must be distinct and sorted lexicographically")
    table = np.empty((h, h, h), dtype=np.intp)
    XE = X.entries
    for i in range(h):
        # (h, h, m) block of pointwise brackets [f_i, f_j, f_k]
        block = XE[images[i][None, None, :], images[:, None, :], images[None, :, :]]
        block_codes = block.astype(np.int64) @ weights
        pos = np.searchsorted(codes, block_codes)
        pos_clipped = np.minimum(pos, h - 1)
        if not (codes[pos_clipped] == block_codes).all():
            j, k = np.argwhere(codes[pos_clipped] != block_codes)[0]
            raise HomsetConsistencyError(
                f"pointwise bracket of elements {i + 1}, {j + 1}, {k + 1} is not in the homset")
        table[i] = pos_clipped
    return TribracketTable(table)


def homset_tribracket(T: TribracketTable, X: TribracketTable) -> HomsetTribracket:
    """``Hom(T, X)`` with the pointwise tribracket structure; ``X`` must be entropic."""
    _require_entropic(X)
    homs = enumerate_homs(T, X)
    images = np.array([h.image for h in homs], dtype=np.intp).reshape(len(homs), T.order)
    table = pointwise_table(images, X)
    table.name = f"Hom({T.name or 'T'},{X.name or 'X'})"
    return HomsetTribracket(table, tuple(homs))


def pullback(phi: Sequence[int], f: Sequence[int]) -> tuple[int, ...]:
    """Precompose ``f`` with ``phi``: ``(phi^* f)(t) = f(phi(t))``."""
    return tuple(int(f[p]) for p in phi)


# --- canonical forms ------------------------------------------------------------

def _canonical_search(T: TribracketTable) -> tuple[list[int], list[list[int]]]:
    """Lexicographically least row-major relabeling, with labelings attaining it.

    Labels are handed out in increasing order.  A value that has no label yet
    must receive the smallest free one (anything else is strictly worse at
    that position), so branching only happens when a row/column index needs a
    fresh label.  Automorphisms discovered from tied leaves prune sibling
    branches lying in the same orbit of the pointwise stabiliser.
    """
    n = T.order
    E = T.entries.tolist()
    N = n ** 3
    nn = n * n
    cur = [0] * N
    best: list[int] | None = None
    winners: list[list[int]] = []
    auts: list[list[int]] = []

    def orbit_roots(fixed: list[int]) -> list[int]:
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for alpha in auts:
            if all(alpha[f] == f for f in fixed):
                for x in range(n):
                    rx, ry = find(x), find(alpha[x])
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
        return [find(x) for x in range(n)]

    def run(pos: int, sigma: list[int], inv: list[int], m: int) -> None:
        nonlocal best, winners
        tied = best is not None and cur[:pos] == best[:pos]
        while pos < N:
            i, j, k = pos // nn, (pos // n) % n, pos % n
            if max(i, j, k) >= m:
                explored: set[int] = set()
                for old in range(n):
                    if sigma[old] >= 0:
                        continue
                    roots = orbit_roots(inv[:m])
                    if roots[old] in explored:
                        continue
                    explored.add(roots[old])
                    s2, inv2 = sigma[:], inv[:]
                    s2[old] = m
                    inv2[m] = old
                    run(pos, s2, inv2, m + 1)
                return
            v = E[inv[i]][inv[j]][inv[k]]
            lab = sigma[v]
            if lab < 0:
                lab = sigma[v] = m
                inv[m] = v
                m += 1
            if tied:
                if lab > best[pos]:
                    return
                if lab < best[pos]:
                    tied = False
            cur[pos] = lab
            pos += 1
        if best is None or not tied:
            best = cur[:]
            winners = [sigma[:]]
        else:
            first_inv = [0] * n
            for x, lab in enumerate(winners[0]):
                first_inv[lab] = x
            auts.append([first_inv[sigma[x]] for x in range(n)])
            winners.append(sigma[:])

    run(0, [-1] * n, [-1] * n, 0)
    return (best or []), winners


def canonical_labeling(T: TribracketTable, max_order: int = DEFAULT_CANONICAL_BOUND
                       ) -> tuple[TribracketTable, tuple[int, ...]]:
    """Canonical form of ``T`` together with one relabeling that produces it."""
    if T.order > max_order:
        raise CanonicalBoundError(
            f"order {T.order} exceeds the canonical-form bound {max_order}; "
            "pass a larger max_order to allow it")
    n = T.order
    if n == 0:
        return TribracketTable(np.zeros((0, 0, 0))), ()
    best, winners = _canonical_search(T)
    sigma = tuple(winners[0])
    canon = TribracketTable(np.array(best).reshape(n, n, n))
    return canon, sigma


def canonical_form(T: TribracketTable, max_order: int = DEFAULT_CANONICAL_BOUND) -> TribracketTable:
    return canonical_labeling(T, max_order)[0]


# --- isomorphism -------------------------------------------------------------------

def element_signatures(T: TribracketTable) -> list[tuple[int, ...]]:
    """Per-element isomorphism invariants used to prune the search."""
    n = T.order
    E = T.entries
    r = np.arange(n)
    idem = E[r, r, r] == r
    # how often x is returned by the bracket with x in one slot and a repeated partner
    c1 = (E[r[:, None], r[None, :], r[None, :]] == r[:, None]).sum(axis=1)
    c2 = (E[r[None, :], r[:, None], r[None, :]] == r[:, None]).sum(axis=1)
    c3 = (E[r[None, :], r[None, :], r[:, None]] == r[:, None]).sum(axis=1)
    c4 = (E[r[:, None], r[:, None], r[None, :]] == r[None, :]).sum(axis=1)
    sq = E[r, r, r]
    cycle = np.zeros(n, dtype=np.intp)
    for x in range(n):
        seen, y = {x}, int(sq[x])
        while y not in seen:
            seen.add(y)
            y = int(sq[y])
        cycle[x] = len(seen)
    return [(int(idem[x]), int(c1[x]), int(c2[x]), int(c3[x]), int(c4[x]), int(cycle[x]))
            for x in range(n)]


def _find_isomorphism(A: TribracketTable, B: TribracketTable) -> tuple[int, ...] | None:
    n = A.order
    sa, sb = element_signatures(A), element_signatures(B)
    if sorted(sa) != sorted(sb):
        return None
    AE, BE = A.entries, B.entries
    candidates = [[y for y in range(n) if sb[y] == sa[x]] for x in range(n)]

    def close(phi: np.ndarray, used: np.ndarray) -> bool:
        while True:
            dom = np.flatnonzero(phi >= 0)
            img = phi[dom]
            src = AE[np.ix_(dom, dom, dom)].reshape(-1)
            dst = BE[np.ix_(img, img, img)].reshape(-1)
            known = phi[src] >= 0
            if not (phi[src[known]] == dst[known]).all():
                return False
            fresh_src, first = np.unique(src[~known], return_index=True)
            if not len(fresh_src):
                return True
            fresh_dst = dst[~known][first]
            # every new source element must get one consistent, unused image
            for s, d in zip(fresh_src, fresh_dst):
                if not (dst[~known][src[~known] == s] == d).all():
                    return False
            if len(set(fresh_dst.tolist())) != len(fresh_dst) or used[fresh_dst].any():
                return False
            if any(sb[d] != sa[s] for s, d in zip(fresh_src, fresh_dst)):
                return False
            phi[fresh_src] = fresh_dst
            used[fresh_dst] = True

    def search(phi: np.ndarray, used: np.ndarray):
        free = np.flatnonzero(phi < 0)
        if not len(free):
            return tuple(int(v) for v in phi)
        x = int(free[0])
        for y in candidates[x]:
            if used[y]:
                continue
            p2, u2 = phi.copy(), used.copy()
            p2[x] = y
            u2[y] = True
            if close(p2, u2):
                found = search(p2, u2)
                if found is not None:
                    return found
        return None

    found = search(np.full(n, -1, dtype=np.intp), np.zeros(n, dtype=bool))
    if found is not None and relabel(A, found) != B:
        raise AssertionError("isomorphism search returned a non-isomorphism")
    return found


def are_isomorphic(A: TribracketTable, B: TribracketTable) -> IsoCertificate | None:
    """Certificate ``x -> permutation[x]`` carrying ``A`` onto ``B``, or ``None``."""
    if A.order != B.order:
        return None
    if A.order == 0:
        return IsoCertificate(())
    if len(idempotent_elements(A)) != len(idempotent_elements(B)):
        return None
    perm = _find_isomorphism(A, B)
    return IsoCertificate(perm) if perm is not None else None


def isomorphic(A: TribracketTable, B: TribracketTable) -> bool:
    return are_isomorphic(A, B) is not None
