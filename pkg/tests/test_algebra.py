import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tribrackets.algebra import (EMPTY, TRIVIAL, NotQuasigroupLine, TribracketError,
                                 TribracketTable, axiom_ii_sides, bracket_eval, cyclic_group,
                                 dihedral_group, divide, entropic_sides, idem_subtribracket,
                                 idempotent_elements, idempotent_number, is_entropic, is_valid,
                                 make_alexander, make_dehn, parse_group_spec, relabel,
                                 subtribracket_closure, symmetric_group, validate, GroupTable)
from tribrackets.morphisms import isomorphic

from conftest import SMALL_TABLES, brute_force_is_entropic, brute_force_is_tribracket, nested


def units(n):
    return [u for u in range(1, n) if math.gcd(u, n) == 1] if n > 1 else [0]


# --- evaluation and division ------------------------------------------------------

def test_bracket_eval_example(named):
    # [1,1,2] = 2 in 1-based labels
    assert bracket_eval(named["T2^1"], 0, 0, 1) == 1


def test_bracket_eval_dehn_z4_diagonal():
    T = make_dehn(cyclic_group(4))
    assert all(bracket_eval(T, x, x, x) == x for x in range(4))


def test_bracket_eval_alexander_z6():
    assert bracket_eval(make_alexander(6, 5, 5), 0, 0, 3) == 3


def test_bracket_eval_out_of_range(named):
    with pytest.raises(TribracketError):
        bracket_eval(named["T2^1"], 0, 2, 0)


def test_divide_left_t21(named):
    # unique a with [a,1,2] = 1 is a = 2 (1-based)
    assert divide(named["T2^1"], "left", 0, 1, 0) == 1


def test_divide_middle_alexander_formula():
    n, s, t = 5, 2, 3
    T = make_alexander(n, s, t)
    t_inv = pow(t, -1, n)
    for x, z, w in itertools.product(range(n), repeat=3):
        assert divide(T, "middle", x, z, w) == (t_inv * (w - s * z + t * s * x)) % n


@pytest.mark.parametrize("T", SMALL_TABLES, ids=lambda T: T.name)
def test_division_round_trips(T):
    n = T.order
    for a, b, t in itertools.product(range(n), repeat=3):
        assert bracket_eval(T, divide(T, "left", a, b, t), a, b) == t
        assert bracket_eval(T, a, divide(T, "middle", a, b, t), b) == t
        assert bracket_eval(T, a, b, divide(T, "right", a, b, t)) == t


def test_divide_reports_bad_line():
    E = np.zeros((2, 2, 2), dtype=int)
    E[1] = [[1, 0], [0, 1]]
    T = TribracketTable(E)
    with pytest.raises(NotQuasigroupLine) as info:
        divide(T, "right", 0, 0, 1)
    assert info.value.coords == (0, 0)


# --- validation --------------------------------------------------------------------

def test_validate_t21(named):
    r = validate(named["T2^1"])
    assert r.axiom_i_ok and r.axiom_ii_ok and r.entropic_ok


def test_validate_repeated_value_in_row(named):
    E = named["T2^1"].entries.copy()
    E[0, 0] = [0, 0]
    r = validate(TribracketTable(E))
    assert not r.axiom_i_ok
    slot, i, j = r.violations["i"]
    line = {"left": E[:, i, j], "middle": E[i, :, j], "right": E[i, j, :]}[slot]
    assert len(set(line.tolist())) < 2


def test_axiom_ii_witness_reproduces():
    # a Latin cube that is not a tribracket
    E = np.array([[[(x + 2 * y + z) % 3 for z in range(3)] for y in range(3)] for x in range(3)])
    T = TribracketTable(E)
    assert brute_force_is_tribracket(nested(T)) == validate(T).valid
    r = validate(T)
    if not r.axiom_ii_ok:
        a, b, c = axiom_ii_sides(T, *r.violations["ii"])
        assert not a == b == c


def test_dehn_s3_valid_not_entropic():
    T = make_dehn(symmetric_group(3))
    assert is_valid(T)
    ok, wit = is_entropic(T, witness=True)
    assert not ok
    lhs, rhs = entropic_sides(T, wit)
    assert lhs != rhs


def test_empty_and_trivial():
    for T in (EMPTY, TRIVIAL):
        r = validate(T)
        assert r.valid and r.entropic_ok
    assert idempotent_number(EMPTY) == 0


def test_entries_range_checked():
    with pytest.raises(TribracketError):
        TribracketTable(np.full((2, 2, 2), 2))


@pytest.mark.parametrize("T", SMALL_TABLES[:6], ids=lambda T: T.name)
def test_validation_matches_brute_force(T):
    E = nested(T)
    assert validate(T).valid == brute_force_is_tribracket(E)
    if T.order <= 3:
        assert is_entropic(T) == brute_force_is_entropic(E)


# --- constructions -------------------------------------------------------------------

def test_alexander_211_is_t21(named):
    assert np.array_equal(make_alexander(2, 1, 1).entries, named["T2^1"].entries)


def test_alexander_z6_valid_entropic():
    r = validate(make_alexander(6, 5, 5))
    assert r.valid and r.entropic_ok


def test_alexander_non_unit():
    with pytest.raises(TribracketError, match="s=2"):
        make_alexander(4, 2, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_alexander_always_entropic(n):
    for s, t in itertools.product(units(n), repeat=2):
        T = make_alexander(n, s, t)
        assert validate(T).valid and is_entropic(T)


def test_alexander_z5_entropic_example():
    assert is_entropic(make_alexander(5, 2, 3))


def test_dehn_trivial_group_is_t11():
    assert make_dehn(cyclic_group(1)) == TRIVIAL


def test_dehn_z2_is_t21(named):
    assert np.array_equal(make_dehn(cyclic_group(2)).entries, named["T2^1"].entries)


@pytest.mark.parametrize("spec,abelian", [("Z2", True), ("Z3", True), ("Z4", True),
                                          ("Z2xZ2", True), ("S3", False), ("D4", False)])
def test_dehn_entropic_iff_abelian(spec, abelian):
    G = parse_group_spec(spec)
    T = make_dehn(G)
    assert is_valid(T)
    assert G.is_abelian() == abelian
    assert is_entropic(T) == abelian


def test_group_table_checks():
    with pytest.raises(TribracketError):
        GroupTable([[0, 1], [0, 1]])
    with pytest.raises(TribracketError):
        parse_group_spec("Q8")
    assert dihedral_group(4).order == 8


# --- idempotents ------------------------------------------------------------------------

def test_idempotents_t22_empty(named):
    assert idempotent_elements(named["T2^2"]) == frozenset()
    assert idempotent_number(named["T2^2"]) == 0
    assert idem_subtribracket(named["T2^2"]).table.order == 0


def test_idempotents_alexander_z8():
    X = make_alexander(8, 7, 7)
    assert idempotent_elements(X) == {0, 2, 4, 6}
    assert idem_subtribracket(X).table.order == 4


def test_idempotents_alexander_z6(named):
    X = make_alexander(6, 5, 5)
    assert idempotent_elements(X) == {0, 3}
    sub = subtribracket_closure(X, {0, 3})
    assert sub.legend == (0, 3)
    assert isomorphic(sub.table, named["T2^1"])


def test_idempotent_number_examples(named):
    assert idempotent_number(named["T4^1"]) == 4
    assert idempotent_number(TRIVIAL) == 1
    assert idem_subtribracket(TRIVIAL).table == TRIVIAL


def test_closure_examples(named):
    T = named["T2^1"]
    assert subtribracket_closure(T, {0, 1}).table == T
    assert subtribracket_closure(T, set()).table.order == 0


@pytest.mark.parametrize("s,t", list(itertools.product(range(1, 5), repeat=2)))
def test_alexander_z5_idempotents_all_or_zero(s, t):
    X = make_alexander(5, s, t)
    idem = idempotent_elements(X)
    assert idem in ({0}, set(range(5)))
    # matches the closed form read off the diagonal [x,x,x] = (s + t - st) x
    expected = {x for x in range(5) if ((s + t - s * t) * x - x) % 5 == 0}
    assert idem == expected


@pytest.mark.parametrize("n", range(2, 9))
def test_alexander_idempotent_condition(n):
    for s, t in itertools.product(units(n), repeat=2):
        X = make_alexander(n, s, t)
        assert idempotent_elements(X) == {x for x in range(n) if ((s + t - s * t - 1) * x) % n == 0}


@given(st.sampled_from(SMALL_TABLES), st.data())
def test_closure_is_closed(T, data):
    S = data.draw(st.sets(st.integers(0, max(T.order - 1, 0)), max_size=T.order))
    sub = subtribracket_closure(T, S)
    legend = set(sub.legend)
    assert set(S) <= legend
    for a, b, c in itertools.product(sub.legend, repeat=3):
        assert bracket_eval(T, a, b, c) in legend
    assert is_valid(sub.table)


# --- properties ------------------------------------------------------------------------

@given(st.sampled_from(SMALL_TABLES))
def test_latin_cube_property(T):
    n = T.order
    E = T.entries
    full = list(range(n))
    for i, j in itertools.product(range(n), repeat=2):
        assert sorted(E[i, j, :]) == full
        assert sorted(E[i, :, j]) == full
        assert sorted(E[:, i, j]) == full


@given(st.sampled_from(SMALL_TABLES), st.data())
def test_relabel_preserves_validity(T, data):
    perm = data.draw(st.permutations(range(T.order)))
    R = relabel(T, perm)
    assert validate(R).valid
    assert idempotent_number(R) == idempotent_number(T)
