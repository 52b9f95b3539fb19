import pytest

from gridlab import oracle
from gridlab.counting import count_sets, growth_bounds
from gridlab.errors import UnsupportedProblem


def test_count_examples():
    assert count_sets("dom", 1, 1).count == 1
    assert count_sets("dom", 2, 2).count == 11
    assert count_sets("total", 2, 2).count == 9
    assert count_sets("minimal-dom", 1, 2).count == 2
    assert count_sets("minimal-total", 1, 1).count == 0


def test_count_transpose():
    for name in ("dom", "total", "minimal-dom", "minimal-total"):
        assert count_sets(name, 2, 4).count == count_sets(name, 4, 2).count


def test_roman_counting_excluded():
    with pytest.raises(UnsupportedProblem):
        count_sets("roman", 2, 2)


def test_supermultiplicative():
    for name in ("dom", "total"):
        for m in (2, 3, 4):
            whole = count_sets(name, 4, m).count
            a = count_sets(name, 2, m).count
            b = count_sets(name, 2, m).count
            assert whole >= a * b, (name, m)


def test_oracle_equivalence_counts():
    for name in ("dom", "total", "minimal-dom", "minimal-total"):
        for n in range(1, 5):
            for m in range(n, 17):
                if n * m > 16:
                    continue
                assert count_sets(name, n, m).count == \
                    oracle.brute_count(name, n, m), (name, n, m)


def test_growth_bracket_small():
    br = growth_bounds("dom", 5)
    assert br.lower <= br.upper
    assert 1.5 < br.lower < 2.0
    with pytest.raises(UnsupportedProblem):
        growth_bounds("dom", 2)
