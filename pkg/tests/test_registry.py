import random

import pytest

from gridlab.errors import UnknownProblem
from gridlab.problems import (
    CellContext,
    cost_of,
    get_problem,
    local_loss,
    reverse_loss,
)


def test_registered_problems():
    spec = get_problem("2dom")
    assert {v.label for v in spec.alphabet} == {"stone", "need_one", "ok"}
    roman = get_problem("roman")
    assert {v.label for v in roman.alphabet} == {"two_stones", "stone", "ok", "need_one"}
    for name in ("dom", "total", "dist2", "minimal-dom", "minimal-total", "ab:1,1"):
        get_problem(name)
    with pytest.raises(UnknownProblem):
        get_problem("frobnicate")


def test_costs():
    twodom = get_problem("2dom")
    roman = get_problem("roman")
    assert cost_of(twodom, "stone") == 1
    assert cost_of(roman, "two_stones") == 2
    assert cost_of(roman, "ok") == 0
    assert cost_of(roman, "stone") == 1
    assert all(
        cost_of(twodom, v) == 0 for v in twodom.alphabet if "stone" not in v.label
    )


def test_local_loss_2dom_examples():
    spec = get_problem("2dom")
    stone = spec.alphabet[0]
    ok = spec.alphabet[1]
    # corner stone with no stone neighbours: loss 2
    assert local_loss(spec, CellContext(stone, 0, 2)) == 2
    # interior non-stone cell dominated four times: loss 2
    assert local_loss(spec, CellContext(ok, 4, 0)) == 2
    # exactly the required two dominators: loss 0
    assert local_loss(spec, CellContext(ok, 2, 0)) == 0
    # border stone: loss 1
    assert local_loss(spec, CellContext(stone, 0, 1)) == 1


def test_reverse_loss_examples():
    assert reverse_loss(get_problem("2dom"), 3, 4, 12) == 6
    assert reverse_loss(get_problem("ab:1,1"), 2, 2, 4) == 2
    assert reverse_loss(get_problem("roman"), 5, 5, 10) == 12


def test_reverse_loss_monotone():
    spec = get_problem("2dom")
    vals = [reverse_loss(spec, 5, 7, loss) for loss in range(0, 40)]
    assert vals == sorted(vals)


def _random_2dom_set(rng, n, m):
    cells = [(r, c) for r in range(n) for c in range(m)]
    chosen = {cell for cell in cells if rng.random() < 0.4}

    def nbrs(r, c):
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            if 0 <= r + dr < n and 0 <= c + dc < m:
                yield (r + dr, c + dc)

    while True:
        deficient = [
            cell for cell in cells
            if cell not in chosen
            and sum(1 for w in nbrs(*cell) if w in chosen) < 2
        ]
        if not deficient:
            return chosen
        cell = deficient[rng.randrange(len(deficient))]
        options = [w for w in nbrs(*cell) if w not in chosen]
        if options:
            chosen.add(options[rng.randrange(len(options))])
        else:
            chosen.add(cell)


def test_loss_sum_identity_random_sets():
    """Sum of local losses equals 4|D| - 2(nm - |D|) on random 2-dominating sets."""
    spec = get_problem("2dom")
    stone, _, _ = spec.alphabet
    rng = random.Random(20240817)
    for _ in range(1000):
        n = rng.randrange(1, 7)
        m = rng.randrange(1, 20 // n + 1)
        dset = _random_2dom_set(rng, n, m)

        def nbrs(r, c):
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                if 0 <= r + dr < n and 0 <= c + dc < m:
                    yield (r + dr, c + dc)

        total = 0
        for r in range(n):
            for c in range(m):
                missing = 4 - sum(1 for _ in nbrs(r, c))
                p = sum(1 for w in nbrs(r, c) if w in dset)
                value = spec.alphabet[0] if (r, c) in dset else spec.alphabet[1]
                if (r, c) in dset:
                    total += local_loss(spec, CellContext(stone, p, missing))
                else:
                    total += local_loss(spec, CellContext(value, p, 0))
        d = len(dset)
        assert total == 4 * d - 2 * (n * m - d)
