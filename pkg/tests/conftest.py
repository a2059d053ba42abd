import itertools

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tribrackets.algebra import make_alexander, make_dehn, parse_group_spec, relabel
from tribrackets.formats import bundled_tensor, named_classes

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def small_tables():
    """Assorted valid tribrackets of order <= 4, entropic and not."""
    tables = [T for T in named_classes()] + [bundled_tensor("T4^1")]
    tables += [make_alexander(4, 1, 3), make_alexander(4, 3, 3), make_alexander(3, 2, 2)]
    tables.append(make_dehn(parse_group_spec("Z2xZ2")))
    return tables


SMALL_TABLES = small_tables()


@st.composite
def relabeled_tables(draw, pool=SMALL_TABLES):
    T = draw(st.sampled_from(pool))
    perm = draw(st.permutations(range(T.order)))
    return T, relabel(T, perm)


def brute_force_is_tribracket(E) -> bool:
    """Axioms checked literally in pure Python, with no shared code."""
    n = len(E)
    rng = range(n)
    for i, j in itertools.product(rng, repeat=2):
        if len({E[i][j][k] for k in rng}) != n:
            return False
        if len({E[i][k][j] for k in rng}) != n:
            return False
        if len({E[k][i][j] for k in rng}) != n:
            return False
    for x, y, z, w in itertools.product(rng, repeat=4):
        p, q, r = E[x][y][z], E[x][y][w], E[x][z][w]
        if not E[y][p][q] == E[z][p][r] == E[w][q][r]:
            return False
    return True


def brute_force_is_entropic(E) -> bool:
    n = len(E)
    for x, y, z, u, v, w, a, b, c in itertools.product(range(n), repeat=9):
        if E[E[x][y][z]][E[u][v][w]][E[a][b][c]] != E[E[x][u][a]][E[y][v][b]][E[z][w][c]]:
            return False
    return True


def brute_force_canonical_key(E):
    n = len(E)
    best = None
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for x, p in enumerate(perm):
            inv[p] = x
        key = tuple(perm[E[inv[a]][inv[b]][inv[c]]]
                    for a in range(n) for b in range(n) for c in range(n))
        if best is None or key < best:
            best = key
    return best or ()


@pytest.fixture(scope="session")
def named():
    return {T.name: T for T in named_classes() + [bundled_tensor("T4^1")]}


def nested(T):
    return np.asarray(T.entries).tolist()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
