import logging
import math

import numpy as np
import pytest

from gamesep.errors import InvalidStructureError, MarkovPropertyError
from gamesep.gamecore import StrategySpace
from gamesep.gamegen import gen_pairwise_mrf, gen_triangle_mrf
from gamesep.hypergraph import DiGraph, HGraph
from gamesep.mrf import DistributionTable, check_local_markov, hc_factorize

BINARY3 = StrategySpace((2, 2, 2))


def boltzmann(space, energy):
    weights = np.array([math.exp(energy(x)) for x in space.profiles()]).reshape(space.shape)
    return DistributionTable(space, weights / weights.sum())


def chain(second=1.0):
    return boltzmann(BINARY3, lambda x: x[0] * x[1] + second * x[1] * x[2])


def test_product_distribution_is_markov_on_the_empty_graph():
    marginals = [np.array([0.3, 0.7]), np.array([0.6, 0.4]), np.array([0.5, 0.5])]
    p = DistributionTable(BINARY3, np.einsum("i,j,k->ijk", *marginals))
    assert check_local_markov(p, DiGraph.empty(3))
    factors = hc_factorize(p, DiGraph.empty(3))
    assert factors.cliques == HGraph.of(3, [{0}, {1}, {2}])
    assert factors.max_relative_error(p) <= 1e-6


def test_chain_is_markov_on_the_line_only():
    p = chain()
    assert check_local_markov(p, DiGraph.line(3))
    assert check_local_markov(p, DiGraph.complete(3))
    assert not check_local_markov(p, DiGraph(3, frozenset({(1, 2), (2, 1)})))
    with pytest.raises(MarkovPropertyError):
        hc_factorize(p, DiGraph(3, frozenset({(1, 2), (2, 1)})))


def test_chain_factorizes_over_its_edges():
    p = chain(2.0)
    result = hc_factorize(p, DiGraph.line(3))
    assert result.cliques == HGraph.of(3, [{0, 1}, {1, 2}])
    assert result.max_relative_error(p) <= 1e-6
    z = 4 + (1 + math.e) * (1 + math.e**2)
    left = result.factors[frozenset({0, 1})]
    right = result.factors[frozenset({1, 2})]
    # the normalizing constant lands on the first clique
    assert left[0, 0] == pytest.approx(1 / z)
    assert left[1, 1] == pytest.approx(math.e / z)
    assert right[1, 1] == pytest.approx(math.e**2)
    assert right[0, 1] == pytest.approx(1.0)


def test_triangle_is_a_single_factor():
    p = gen_triangle_mrf(1.5)
    result = hc_factorize(p, DiGraph.complete(3))
    assert set(result.factors) == {frozenset({0, 1, 2})}
    assert np.allclose(result.factors[frozenset({0, 1, 2})], p.probabilities)
    assert not check_local_markov(p, DiGraph.line(3))


@pytest.mark.parametrize("seed", range(5))
def test_random_pairwise_fields(seed):
    ring = DiGraph.ring(4)
    p = gen_pairwise_mrf(ring, seed)
    assert check_local_markov(p, ring)
    assert not check_local_markov(p, DiGraph.line(4))
    result = hc_factorize(p, ring)
    assert len(result.factors) == 4
    assert all(np.all(table > 0) for table in result.factors.values())
    assert result.max_relative_error(p) <= 1e-6


def test_bad_distributions():
    with pytest.raises(InvalidStructureError):
        DistributionTable(StrategySpace((2,)), np.array([1.2, -0.2]))
    with pytest.raises(MarkovPropertyError):
        DistributionTable(StrategySpace((2,)), np.array([1.0, 0.0]))
    with pytest.raises(InvalidStructureError):
        DistributionTable(StrategySpace((2, 2)), np.array([0.5, 0.5]))


def test_graph_must_match_and_be_undirected():
    p = chain()
    with pytest.raises(InvalidStructureError):
        check_local_markov(p, DiGraph(3, frozenset({(0, 1)})))
    with pytest.raises(InvalidStructureError):
        check_local_markov(p, DiGraph.line(4))


def test_unnormalized_values_are_rescaled(caplog):
    with caplog.at_level(logging.WARNING, logger="gamesep"):
        p = DistributionTable.from_values(StrategySpace((2,)), [1.0, 3.0])
    assert np.allclose(p.probabilities, [0.25, 0.75])
    assert "renormalizing" in caplog.text
