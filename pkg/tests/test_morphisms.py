import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tribrackets.algebra import (TRIVIAL, idem_subtribracket, idempotent_elements, is_entropic,
                                 make_alexander, make_dehn, relabel, symmetric_group, validate)
from tribrackets.enumeration import classify
from tribrackets.morphisms import (CanonicalBoundError, HomsetConsistencyError, NotEntropicError,
                                   are_isomorphic, canonical_form, canonical_labeling,
                                   enumerate_hom_images, enumerate_homs, homset_tribracket,
                                   is_hom, isomorphic, pointwise_table, pullback)
from tribrackets.algebra import TribracketError

from conftest import SMALL_TABLES, brute_force_canonical_key, nested, relabeled_tables

ENTROPIC_SMALL = [T for T in SMALL_TABLES if is_entropic(T) and T.order <= 3]


def brute_force_homs(T, X):
    if X.order == 0:
        return []
    return [f for f in itertools.product(range(X.order), repeat=T.order)
            if all(f[T.entries[a, b, c]] == X.entries[f[a], f[b], f[c]]
                   for a, b, c in itertools.product(range(T.order), repeat=3))]


# --- homomorphisms ---------------------------------------------------------------------

def test_identity_is_hom(named):
    assert is_hom([0, 1], named["T2^1"], named["T2^1"])


def test_is_hom_shape_mismatch(named):
    with pytest.raises(TribracketError):
        is_hom([0], named["T2^1"], named["T2^1"])


def test_constant_maps_into_t22_fail(named):
    for y in range(2):
        assert not is_hom([y, y], named["T2^1"], named["T2^2"])


@pytest.mark.parametrize("T", SMALL_TABLES[1:], ids=lambda T: T.name)
@pytest.mark.parametrize("X", [T for T in SMALL_TABLES if 0 < T.order <= 3], ids=lambda T: T.name)
def test_constant_map_iff_idempotent(T, X):
    idem = idempotent_elements(X)
    for y in range(X.order):
        assert is_hom([y] * T.order, T, X) == (y in idem)


def test_enumerate_homs_examples(named):
    assert enumerate_homs(named["T1^1"], named["T2^2"]) == []
    assert len(enumerate_homs(named["T2^1"], named["T2^1"])) == 4
    assert enumerate_hom_images(named["T0^1"], named["T3^1"]) == [()]


@pytest.mark.parametrize("T", [T for T in SMALL_TABLES if T.order <= 3], ids=lambda T: T.name)
@pytest.mark.parametrize("X", [T for T in SMALL_TABLES if T.order <= 3], ids=lambda T: T.name)
def test_enumerate_homs_matches_brute_force(T, X):
    images = enumerate_hom_images(T, X)
    assert images == sorted(images)
    if T.order or X.order:
        assert images == brute_force_homs(T, X)
    assert all(is_hom(f, T, X) for f in images)


@given(relabeled_tables(), st.sampled_from([T for T in SMALL_TABLES if T.order <= 3]))
def test_hom_count_invariant_under_relabeling(pair, X):
    T, R = pair
    assert len(enumerate_hom_images(T, X)) == len(enumerate_hom_images(R, X))
    assert len(enumerate_hom_images(X, T)) == len(enumerate_hom_images(X, R))


# --- homsets ------------------------------------------------------------------------------

def test_homset_t21_t21_is_t41(named):
    H = homset_tribracket(named["T2^1"], named["T2^1"])
    assert isomorphic(H.table, named["T4^1"])


def test_homset_t32_t31(named):
    assert isomorphic(homset_tribracket(named["T3^2"], named["T3^1"]).table, named["T3^1"])


@pytest.mark.parametrize("T", SMALL_TABLES, ids=lambda T: T.name)
def test_homset_into_trivial(T):
    assert homset_tribracket(T, TRIVIAL).table == TRIVIAL


def test_homset_refuses_non_entropic(named):
    with pytest.raises(NotEntropicError):
        homset_tribracket(named["T2^1"], make_dehn(symmetric_group(3)))


def test_pointwise_table_detects_escape(named):
    # a subset of Hom(T2^1, T2^1) that is not closed
    with pytest.raises(HomsetConsistencyError):
        pointwise_table(np.array([[0, 0], [0, 1], [1, 1]]), named["T2^1"])


@pytest.mark.parametrize("T", ENTROPIC_SMALL, ids=lambda T: T.name)
@pytest.mark.parametrize("X", ENTROPIC_SMALL, ids=lambda T: T.name)
def test_homset_valid_and_entropic(T, X):
    H = homset_tribracket(T, X)
    r = validate(H.table)
    assert r.valid and r.entropic_ok
    images = H.images()
    for i, j, k in itertools.product(range(len(images)), repeat=3):
        point = tuple(int(X.entries[a, b, c]) for a, b, c in zip(images[i], images[j], images[k]))
        assert images[H.table.entries[i, j, k]] == point


@pytest.mark.parametrize("X", ENTROPIC_SMALL, ids=lambda T: T.name)
@pytest.mark.parametrize("Y", [T for T in ENTROPIC_SMALL if T.order], ids=lambda T: T.name)
def test_idem_embeds_in_homset(X, Y):
    if X.order == 0:
        return
    H = homset_tribracket(X, Y)
    idem = idem_subtribracket(Y)
    # the constant maps at the generated elements form a copy of Idem(Y)
    consts = [tuple([y] * X.order) for y in idem.legend]
    images = H.images()
    assert all(c in images for c in consts)
    idx = [images.index(c) for c in consts]
    sub = H.table.entries[np.ix_(idx, idx, idx)]
    pos = {v: k for k, v in enumerate(idx)}
    sub = np.vectorize(pos.__getitem__)(sub) if sub.size else sub
    assert np.array_equal(sub, idem.table.entries)


@given(relabeled_tables(pool=[T for T in SMALL_TABLES if T.order <= 3]),
       st.sampled_from(ENTROPIC_SMALL))
def test_pullback_gives_isomorphic_homsets(pair, X):
    T, R = pair
    cert = are_isomorphic(T, R)
    assert cert is not None
    HT, HR = homset_tribracket(T, X), homset_tribracket(R, X)
    pulled = sorted(pullback(cert.permutation, f) for f in HR.images())
    assert pulled == HT.images()
    assert isomorphic(HT.table, HR.table)


# --- canonical forms and isomorphism -------------------------------------------------------

@pytest.mark.parametrize("T", SMALL_TABLES, ids=lambda T: T.name)
def test_canonical_form_matches_brute_force(T):
    assert canonical_form(T).key() == brute_force_canonical_key(nested(T))


@pytest.mark.parametrize("n", [2, 3])
def test_canonical_form_matches_brute_force_all_classes(n):
    for C in classify(n, "all"):
        for perm in itertools.permutations(range(n)):
            R = relabel(C, perm)
            assert canonical_form(R).key() == brute_force_canonical_key(nested(R))


@given(relabeled_tables())
def test_canonical_form_relabel_invariant(pair):
    T, R = pair
    assert canonical_form(T) == canonical_form(R)
    canon, sigma = canonical_labeling(R)
    assert relabel(R, sigma) == canon
    assert isomorphic(canon, T)


def test_canonical_distinguishes_named_classes(named):
    assert canonical_form(named["T2^1"]) != canonical_form(named["T2^2"])
    forms = {canonical_form(named[f"T3^{k}"]).key() for k in range(1, 8)}
    assert len(forms) == 7


def test_canonical_bound():
    T = make_alexander(11, 1, 1)
    with pytest.raises(CanonicalBoundError):
        canonical_form(T)


def test_iso_examples(named):
    assert are_isomorphic(named["T2^1"], named["T2^2"]) is None
    for T in named.values():
        cert = are_isomorphic(T, T)
        assert cert is not None and relabel(T, cert.permutation) == T


def test_starred_homsets_pairwise(named):
    H = [homset_tribracket(named[f"T3^{k}"], named[f"T3^{k}"]).table for k in (1, 2, 3)]
    assert [T.order for T in H] == [9, 9, 9]
    # computed answers: the three diagonal entries are pairwise non-isomorphic
    assert not isomorphic(H[0], H[1])
    assert not isomorphic(H[0], H[2])
    assert not isomorphic(H[1], H[2])


@given(relabeled_tables())
def test_certificate_and_inverse_are_homs(pair):
    T, R = pair
    cert = are_isomorphic(T, R)
    assert cert is not None
    assert relabel(T, cert.permutation) == R
    assert is_hom(cert.permutation, T, R)
    assert is_hom(cert.inverse().permutation, R, T)


@given(relabeled_tables(), relabeled_tables())
def test_iso_agrees_with_canonical(p1, p2):
    A, B = p1[1], p2[1]
    assert isomorphic(A, B) == (A.order == B.order and canonical_form(A) == canonical_form(B))
