"""Smoke test for the pyletterblocks extension module.

Build and install it first, e.g.

    pip install maturin
    cd crates/python && maturin build --release -o dist && pip install dist/*.whl
"""

import json
import math
import random

import pyletterblocks as lb

BASE = "eeeaarroottiissllnnudcpmhygbfwkvzxjq"


def check_layout_basics():
    base = lb.CubeSet.base()
    assert str(base) == BASE == str(lb.base_permutation())
    assert base.cube(0) == "eeeaar"
    assert lb.CubeSet.seed2k().missing_letters() == []
    assert lb.face_location(35) == (5, 5)
    try:
        lb.CubeSet("abc")
    except ValueError:
        pass
    else:
        raise AssertionError("short layout accepted")


def check_moves():
    moves = lb.legal_moves()
    assert len(moves) == 180 and moves[0] == (0, 1) and moves[90] == (0, 6)
    labels = list(range(36))
    for i in range(36):
        for j in range(i + 1, 36):
            seq = lb.decompose_transposition(i, j)
            assert len(seq) <= 3
            perm = labels[:]
            for a, b in seq:
                perm[a], perm[b] = perm[b], perm[a]
            want = labels[:]
            want[i], want[j] = want[j], want[i]
            assert perm == want, (i, j, seq)


def check_counting():
    plan = lb.allocate_repetitions(6)
    assert plan["e"] == 3 and plan["a"] == 2 and plan["q"] == 1
    expected = math.factorial(36)
    for reps in plan.values():
        expected //= math.factorial(reps)
    assert lb.search_space_size() == expected
    assert abs(expected / 2.42183155e38 - 1) < 1e-8


def check_scoring():
    rng = random.Random(11)
    words = sorted({"".join(rng.choice("etaoinsrlud") for _ in range(rng.randint(1, 3))) for _ in range(60)})
    d = lb.Dictionary(words)
    assert len(d) == len(words)
    for _ in range(10):
        letters = list(BASE)
        rng.shuffle(letters)
        cs = lb.CubeSet("".join(letters))
        assert lb.score(cs, d) == lb.brute_force_score(cs, d)
    small = lb.Dictionary(["at", "see", "tea", "nut"])
    s = lb.score(lb.CubeSet.base(), small)
    assert (s.mono, s.rainbow, s.sum) == (1, 2, 3)
    assert lb.word_report(lb.CubeSet.base(), small) == (["at"], ["at", "nut"])


def check_search():
    d = lb.Dictionary(["at", "tea", "nut", "sun", "one", "rain", "lot", "ten"])
    runs = [lb.run_search(d, "tree", seed=4, budget=400, variant="greedy") for _ in range(2)]
    assert runs[0] == runs[1]
    record = json.loads(runs[0])
    assert record["manifest"]["dictionary"]["sha256"] == d.fingerprint()
    best = record["report"]["best"]["sum"]
    assert best["sum"] >= lb.score(lb.CubeSet.base(), d).sum
    history = [p["best_sum"] for p in record["report"]["history"]]
    assert history == sorted(history)


def main():
    check_layout_basics()
    check_moves()
    check_counting()
    check_scoring()
    check_search()
    ok, summary = lb.verify()
    assert ok, summary
    print(f"pyletterblocks {lb.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
