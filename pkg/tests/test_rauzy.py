import numpy as np

from gridlab.problems import ABRules, ProblemSpec, get_problem
from gridlab.rauzy import build_rauzy, growth_rate


def test_unconstrained_language_complete_graph():
    """For plain domination order 1 the graph is small and strongly dense."""
    g = build_rauzy(get_problem("dom"), 1)
    adj = g.adjacency.toarray()
    assert adj.shape[0] == 3
    assert adj.sum() >= 7  # nearly complete: only stone-free columns constrain


def test_edges_are_overlaps():
    g = build_rauzy(get_problem("2dom"), 3)
    verts = g.vertices
    for u, v in g.edges:
        assert verts[u][1:] == verts[v][:-1]


def test_2dom_growth_value():
    lam = growth_rate(get_problem("2dom"), 3)
    assert abs(lam - 2.485584) < 1e-4
    # the value is a root of x^3 - 2x^2 - 3
    assert abs(lam ** 3 - 2 * lam ** 2 - 3) < 1e-3


def test_rates_bound_state_count_ratio():
    from gridlab.states import enumerate_states

    spec = get_problem("2dom")
    lam = growth_rate(spec, 4)
    c11 = len(enumerate_states(spec, 11))
    c12 = len(enumerate_states(spec, 12))
    assert abs(c12 / c11 - lam) < 0.05
