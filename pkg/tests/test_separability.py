from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings as hsettings
from hypothesis import strategies as st

from gamesep.errors import InvalidStructureError, NotSeparableError
from gamesep.gamecore import Game, StrategySpace, extend_table
from gamesep.gamegen import (
    gen_best_shot_ring,
    gen_planted,
    gen_planted_function,
    gen_two_level,
    random_fdhgraph,
    random_game,
    random_hgraph,
)
from gamesep.hypergraph import DiGraph, FDHGraph, HGraph, f_preceq, simplify_f
from gamesep.scalars import ScalarMode, to_table
from gamesep.separability import (
    extract_f_terms,
    extract_h_terms,
    is_f_separable,
    is_h_separable,
    minimal_fdh,
    minimal_graph,
    minimal_hgraph,
    mobius_decompose,
    oracle_is_f_separable,
    oracle_is_separable,
)

BINARY3 = StrategySpace((2, 2, 2))


def tabulate(space, fn, mode=ScalarMode.RATIONAL):
    return to_table((fn(x) for x in space.profiles()), space.shape, mode)


def ring_links(n, offsets):
    return FDHGraph.of(n, [(i, {(i + o) % n for o in offsets}) for i in range(n)])


def test_triple_product_needs_all_three():
    table = tabulate(BINARY3, lambda x: x[0] * x[1] * x[2])
    assert minimal_hgraph(table) == HGraph.of(3, [{0, 1, 2}])
    assert not oracle_is_separable(table, HGraph.of(3, [{0, 1}, {1, 2}, {0, 2}]))
    assert oracle_is_separable(table, HGraph.trivial(3))


def test_mixed_supports():
    table = tabulate(BINARY3, lambda x: 3 * x[0] + 2 * x[1] * x[2] - 1)
    assert minimal_hgraph(table) == HGraph.of(3, [{0}, {1, 2}])
    assert is_h_separable(table, HGraph.of(3, [{0, 1}, {1, 2}]))
    assert not is_h_separable(table, HGraph.of(3, [{0, 1}, {2}]))


def test_constant_function_has_empty_structure():
    table = tabulate(BINARY3, lambda x: 7)
    assert minimal_hgraph(table).hyperlinks == frozenset()
    assert oracle_is_separable(table, HGraph.of(3, []))
    assert extract_h_terms(table, HGraph.of(3, [])) == {}


def test_reference_profile_does_not_change_the_structure():
    table = tabulate(StrategySpace((3, 2, 2)), lambda x: (x[0] - 1) ** 2 * x[1] + x[2])
    assert minimal_hgraph(table) == minimal_hgraph(table, (2, 1, 1))
    with pytest.raises(InvalidStructureError):
        minimal_hgraph(table, (3, 0, 0))


def test_extract_h_terms_adds_up():
    space = StrategySpace((2, 3, 2))
    table = tabulate(space, lambda x: x[0] * x[1] + 2 * x[1] * x[2] + 5)
    h = HGraph.of(3, [{0, 1}, {1, 2}])
    terms = extract_h_terms(table, h)
    total = sum(extend_table(t, sorted(link), space) for link, t in terms.items())
    assert np.all(total == table)
    with pytest.raises(NotSeparableError):
        extract_h_terms(table, HGraph.of(3, [{0, 1}, {2}]))


def test_best_shot_ring_minimal_fdh():
    u = gen_best_shot_ring(6, Fraction(1, 2))
    assert minimal_fdh(u) == ring_links(6, (-1, 1))
    assert minimal_graph(u) == DiGraph.ring(6)


def test_two_level_ring_minimal_fdh():
    # on a ring the three-way agreement bonus has no cubic interaction, so only pairs remain
    u = gen_two_level(DiGraph.ring(5))
    expected = [(i, {j}) for i in range(5) for j in range(5) if j != i]
    assert minimal_fdh(u) == FDHGraph.of(5, expected)


def test_two_level_star_keeps_the_center_hyperlink():
    u = gen_two_level(DiGraph.undirected(4, [(0, 1), (0, 2), (0, 3)]))
    expected = [(0, {1, 2, 3})] + [(leaf, {j}) for leaf in (1, 2, 3) for j in range(4) if j != leaf]
    assert minimal_fdh(u) == FDHGraph.of(4, expected)


def test_two_level_complete_graph_minimal_fdh():
    u = gen_two_level(DiGraph.complete(4))
    assert minimal_fdh(u) == FDHGraph.of(4, [(i, set(range(4)) - {i}) for i in range(4)])


def test_extract_f_terms_reassembles_game():
    f = ring_links(5, (-1, 1))
    u = gen_planted(f, seed=11)
    terms = extract_f_terms(u, f)
    assert terms.reassemble().equals(u)
    assert set(terms.terms) == set(f.hyperlinks)
    with pytest.raises(NotSeparableError):
        extract_f_terms(u, ring_links(5, (1,)))


def test_own_action_terms_need_no_hyperlink():
    space = StrategySpace((2, 2))
    u = Game.from_function(space, lambda i, x: 3 * x[i] + x[1 - i] * 2)
    assert minimal_fdh(u) == FDHGraph.of(2, [])
    assert oracle_is_f_separable(u, FDHGraph.of(2, []))
    terms = extract_f_terms(u, FDHGraph.of(2, []))
    assert set(terms.own) == {0, 1}
    assert terms.reassemble().equals(u)


def test_mobius_components_vanish_at_reference():
    space = StrategySpace((3, 3))
    table = tabulate(space, lambda x: x[0] * x[1] + x[0] ** 2)
    decomposition = mobius_decompose(table, (1, 2))
    pair = decomposition.component({0, 1})
    assert np.all(pair[1, :] == 0) and np.all(pair[:, 2] == 0)
    assert np.all(decomposition.reconstruct() == table)


def test_float_mode_uses_tolerance(settings):
    table = tabulate(BINARY3, lambda x: x[0] * x[1] + 1e-13 * x[2], ScalarMode.FLOAT)
    assert minimal_hgraph(table, settings=settings) == HGraph.of(3, [{0, 1}])
    assert oracle_is_separable(table, HGraph.of(3, [{0, 1}]), settings=settings)


@hsettings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 2**16))
def test_mobius_reconstructs_every_table(counts, seed):
    u = random_game(StrategySpace(tuple(counts)), seed)
    table = u.utilities[0]
    assert np.all(mobius_decompose(table).reconstruct() == table)
    assert oracle_is_separable(table, minimal_hgraph(table))


@hsettings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**16))
def test_planted_games_separate_on_their_structure(n, seed):
    f = random_fdhgraph(n, seed)
    u = gen_planted(f, seed)
    found = minimal_fdh(u)
    assert f_preceq(found, simplify_f(f))
    assert is_f_separable(u, f)
    assert oracle_is_f_separable(u, found)


spaces = st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda counts: np.prod(counts) <= 64)


@hsettings(max_examples=60, deadline=None)
@given(spaces, st.integers(0, 2**16))
def test_mobius_test_and_span_test_agree(counts, seed):
    space = StrategySpace(tuple(counts))
    n = space.players
    table = gen_planted_function(space, random_hgraph(n, seed), seed)
    h = random_hgraph(n, seed + 1)
    assert is_h_separable(table, h) == oracle_is_separable(table, h)


@hsettings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**16))
def test_minimal_fdh_is_below_every_separating_structure(n, seed):
    u = gen_planted(random_fdhgraph(n, seed), seed)
    g = random_fdhgraph(n, seed + 1)
    assert oracle_is_f_separable(u, g) == f_preceq(minimal_fdh(u), g)


@hsettings(max_examples=40, deadline=None)
@given(spaces, st.integers(0, 2**16), st.data())
def test_structure_does_not_depend_on_the_reference_profile(counts, seed, data):
    space = StrategySpace(tuple(counts))
    z = tuple(data.draw(st.integers(0, k - 1)) for k in counts)
    if seed % 2:
        u = random_game(space, seed)
    else:
        u = gen_planted(random_fdhgraph(space.players, seed), seed, space=space)
    assert minimal_fdh(u, z) == minimal_fdh(u)
    table = gen_planted_function(space, random_hgraph(space.players, seed), seed)
    assert minimal_hgraph(table, z) == minimal_hgraph(table)
