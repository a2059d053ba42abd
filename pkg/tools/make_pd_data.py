"""Regenerate the bundled PD files under src/tribrackets/data/pd/.

Needs spherogram/snappy (not a runtime dependency of the package):

    python -m venv /tmp/kvenv && /tmp/kvenv/bin/pip install snappy
    /tmp/kvenv/bin/python tools/make_pd_data.py

Knot and link tables come from spherogram's Rolfsen tables.  Reidemeister
pairs are built from braid closures (R1: Markov stabilisation, R2: inserting
a generator next to its inverse, R3: the braid relation) and from single
random moves applied by spherogram.  Pairs whose complements are
hyperbolic are additionally checked for isometric exteriors.
"""
import random
import sys
from pathlib import Path

import spherogram as S

OUT = Path(__file__).resolve().parents[1] / "src" / "tribrackets" / "data" / "pd"

KNOTS = ["3_1", "4_1", "5_1", "5_2"] + [f"6_{i}" for i in range(1, 4)] \
    + [f"7_{i}" for i in range(1, 8)] + [f"8_{i}" for i in range(1, 22)]
LINKS = ["2^2_1", "4^2_1", "5^2_1", "6^2_1", "6^2_2", "6^2_3", "6^3_1", "6^3_2", "6^3_3"] \
    + [f"7^2_{i}" for i in range(1, 9)] + ["7^3_1"]


def pd_lines(link):
    return ["X " + " ".join(str(e + 1) for e in X) for X in link.PD_code()]


def record(name, link):
    return "\n".join([f"name {name}"] + pd_lines(link))


def same_link(A, B):
    try:
        return bool(A.exterior().is_isometric_to(B.exterior()))
    except Exception:
        return True  # not hyperbolic (e.g. torus knots); moves are isotopies by construction


def braid_pairs():
    # (pair name, move, word before, word after)
    return [
        ("trefoil_stab_pos", "R1", [1, 1, 1], [1, 1, 1, 2]),
        ("trefoil_stab_neg", "R1", [1, 1, 1], [1, 1, 1, -2]),
        ("figure8_stab", "R1", [1, -2, 1, -2], [1, -2, 1, -2, 3]),
        ("trefoil_r2", "R2", [1, 1, 1, 2], [1, -2, 2, 1, 1, 2]),
        ("figure8_r2", "R2", [1, -2, 1, -2], [1, -2, -1, 1, 1, -2]),
        ("r3_positive", "R3", [1, 2, 1, 2, 2], [2, 1, 2, 2, 2]),
        ("r3_mixed", "R3", [-1, 2, 1, 2, 1], [2, 1, -2, 2, 1]),
        ("r3_negative", "R3", [-1, -2, -1, 2, 2, 1], [-2, -1, -2, 2, 2, 1]),
    ]


def random_move_pairs(rng):
    out = []
    specs = [("3_1", "R1", 1, 0), ("4_1", "R1", 1, 0), ("3_1", "R2", 0, 1),
             ("5_2", "R2", 0, 1), ("4_1", "R2", 0, 1)]
    for base, move, p1, p2 in specs:
        K = S.Link(base)
        want = {"R1": 1, "R2": 2}[move]
        for attempt in range(200):
            random.seed(rng.random())
            M = K.copy()
            M.backtrack(steps=1, prob_type_1=p1, prob_type_2=p2)
            if len(M.crossings) == len(K.crossings) + want:
                out.append((f"{base.replace('_', '')}_{move.lower()}_random", move, K, M))
                break
    return out


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    knots = [record(k, S.Link(k)) for k in KNOTS]
    (OUT / "knots.pd").write_text(
        "# prime knots with at most 8 crossings (Rolfsen names)\n\n" + "\n\n".join(knots) + "\n")
    links = [record(l, S.Link(l)) for l in LINKS]
    (OUT / "links.pd").write_text(
        "# prime links with at most 7 crossings (Rolfsen names)\n\n" + "\n\n".join(links) + "\n")

    pairs = []
    for name, move, w0, w1 in braid_pairs():
        A, B = S.ClosedBraid(*w0), S.ClosedBraid(*w1)
        if not same_link(A, B):
            sys.exit(f"braid pair {name} is not isotopic")
        pairs.append((name, move, A, B))
    pairs += random_move_pairs(random.Random(7))
    lines = ["# Reidemeister test pairs: records <pair>.a and <pair>.b differ by one move",
             "# (the move is given in the pair name or the comment above it)", ""]
    for name, move, A, B in pairs:
        if not same_link(A, B):
            sys.exit(f"pair {name} is not isotopic")
        lines.append(f"# {move}: {len(A.crossings)} -> {len(B.crossings)} crossings")
        lines.append(record(f"{name}.a", A))
        lines.append("")
        lines.append(record(f"{name}.b", B))
        lines.append("")
    (OUT / "reidemeister.pd").write_text("\n".join(lines))

    (OUT / "trefoil.pd").write_text(
        "# trefoil knot 3_1\nname 3_1\nX 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n")
    (OUT / "unknots.pd").write_text(
        "# unknot diagrams\nname unknot\n\nname kink_neg\nX 1 2 2 1\n\nname kink_pos\nX 1 1 2 2\n")


if __name__ == "__main__":
    main()
