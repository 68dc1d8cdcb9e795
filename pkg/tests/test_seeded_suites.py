"""Seeded property suites over generated games, functions and distributions."""

import itertools

import numpy as np
import pytest

from gamesep.decomposition import decompose, decompose_local, verify_component_separability
from gamesep.gamecore import Game, StrategySpace, harmonic_residual, is_normalized
from gamesep.gamegen import (
    gen_pairwise_mrf,
    gen_planted_function,
    gen_planted_potential,
    gen_triangle_mrf,
    make_rng,
    random_game,
    random_hgraph,
    random_nonstrategic,
)
from gamesep.hypergraph import DiGraph, FDHGraph, HGraph, f_preceq, h_intersect, underlying_undirected
from gamesep.mrf import check_local_markov, hc_factorize
from gamesep.potential import detect_potential, verify_potential_structure
from gamesep.scalars import ScalarMode, to_table
from gamesep.separability import minimal_fdh, minimal_hgraph, oracle_is_f_separable, oracle_is_separable


def small_space(seed, players=3):
    rng = make_rng(seed)
    return StrategySpace(tuple(int(k) for k in rng.integers(2, 4, size=players)))


@pytest.mark.parametrize("seed", range(200))
def test_planted_potentials_have_matching_structure(seed):
    n = 3 + seed % 2
    u = gen_planted_potential(random_hgraph(n, seed), seed)
    assert verify_potential_structure(u)
    f = minimal_fdh(u)
    assert underlying_undirected(f) == f


@pytest.mark.parametrize("seed", range(200))
def test_separable_on_two_structures_means_separable_on_their_meet(seed):
    rng = make_rng(seed)
    n = 3 + seed % 2
    space = small_space(seed, n)
    h1 = random_hgraph(n, rng)
    h2 = random_hgraph(n, rng)
    meet = h_intersect(h1, h2)
    table = gen_planted_function(space, meet, rng)
    assert oracle_is_separable(table, h1) and oracle_is_separable(table, h2)
    assert oracle_is_separable(table, meet)
    # a function separable on h1 passes on h2 exactly when it passes on the meet
    other = gen_planted_function(space, h1, rng)
    assert oracle_is_separable(other, h2) == oracle_is_separable(other, meet)


@pytest.mark.parametrize("seed", range(100))
def test_shrinking_a_minimal_hyperlink_breaks_separability(seed):
    rng = make_rng(seed)
    n = 3 + seed % 2
    space = small_space(seed, n)
    table = gen_planted_function(space, random_hgraph(n, rng), rng)
    minimal = minimal_hgraph(table)
    for link in minimal.hyperlinks:
        if len(link) < 2:
            continue
        others = [other for other in minimal.hyperlinks if other != link]
        for node in sorted(link):
            assert not oracle_is_separable(table, HGraph.of(n, others + [link - {node}]))


TWO_PLAYER_STRUCTURES = [
    FDHGraph.of(2, links)
    for links in ([], [(0, {1})], [(1, {0})], [(0, {1}), (1, {0})])
]


def test_minimal_fdh_matches_brute_force_on_small_games():
    space = StrategySpace((2, 2))
    for entries in itertools.product(range(3), repeat=8):
        u = Game(
            space,
            (
                to_table(entries[:4], space.shape, ScalarMode.RATIONAL),
                to_table(entries[4:], space.shape, ScalarMode.RATIONAL),
            ),
        )
        separable = [f for f in TWO_PLAYER_STRUCTURES if oracle_is_f_separable(u, f)]
        smallest = [f for f in separable if all(f_preceq(f, g) for g in separable)]
        assert smallest == [minimal_fdh(u)], entries


@pytest.mark.parametrize("seed", range(200))
def test_decomposition_invariants(seed):
    u = random_game(small_space(seed), seed)
    parts = decompose(u)
    assert parts.reconstruct().equals(u)
    assert detect_potential(parts.u_pot).is_potential
    assert np.all(harmonic_residual(parts.u_har) == 0)
    assert is_normalized(parts.u_pot) and is_normalized(parts.u_har)
    assert verify_component_separability(u)
    assert decompose_local(u, minimal_fdh(u)).agrees_with(parts)


def mrf_graph(seed):
    n = 3 + seed % 3
    shape = seed // 3 % 3
    if shape == 0:
        return DiGraph.line(n)
    if shape == 1:
        return DiGraph.ring(n)
    # a star is the simplest tree that is not a chain
    return DiGraph.undirected(n, [(0, k) for k in range(1, n)])


@pytest.mark.parametrize("seed", range(50))
def test_pairwise_fields_factorize(seed):
    g = mrf_graph(seed)
    p = gen_pairwise_mrf(g, seed)
    assert check_local_markov(p, g)
    result = hc_factorize(p, g)
    assert result.max_relative_error(p) <= 1e-6


def test_three_way_interaction_keeps_one_factor():
    result = hc_factorize(gen_triangle_mrf(), DiGraph.complete(3))
    assert len(result.factors) == 1


@pytest.mark.parametrize("seed", range(100))
def test_strategic_equivalence_invariance(seed):
    space = small_space(seed)
    if seed % 2:
        u = random_game(space, seed)
    else:
        u = gen_planted_potential(random_hgraph(3, seed), seed, space=space)
    v = u + random_nonstrategic(space, seed + 1000)
    assert minimal_fdh(u) == minimal_fdh(v)
    assert detect_potential(u).is_potential == detect_potential(v).is_potential
    left, right = decompose(u), decompose(v)
    assert left.u_pot.equals(right.u_pot)
    assert left.u_har.equals(right.u_har)
