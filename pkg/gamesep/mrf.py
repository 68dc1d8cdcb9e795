"""Clique factorization of positive Markov random fields.

The log-probability φ = log P is treated as the potential of the game in
which every player's utility is φ. The local Markov property makes that game
graphical on the graph, so φ separates on the maximal cliques and its
interaction components can be grouped clique by clique and exponentiated.
Float mode only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

import numpy as np

from .config import Settings, get_settings
from .errors import InvalidStructureError, InvariantViolationError, MarkovPropertyError
from .gamecore import PotentialFunction, StrategySpace, extend_table, game_from_potential
from .hypergraph import DiGraph, HGraph, Hyperlink, h_preceq, hyperlink_key, maximal_cliques
from .potential import is_graphical_on
from .separability import embed_table, mobius_decompose

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """Strictly positive probability mass function over a strategy space."""

    space: StrategySpace
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        table = np.asarray(self.probabilities, dtype=float)
        if table.size != self.space.profile_count:
            raise InvalidStructureError(
                f"distribution has {table.size} entries, expected {self.space.profile_count}"
            )
        table = table.reshape(self.space.shape)
        if np.any(table < 0):
            raise InvalidStructureError("probabilities must be non-negative")
        if np.any(table == 0):
            raise MarkovPropertyError("distribution has zero entries; restrict the action sets first")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "probabilities", table)

    @classmethod
    def from_values(
        cls, space: StrategySpace, values, settings: Optional[Settings] = None
    ) -> "DistributionTable":
        """Build a distribution, renormalizing values that do not sum to one."""

        settings = settings or get_settings()
        table = np.asarray(values, dtype=float).reshape(space.shape)
        total = float(table.sum())
        if total <= 0:
            raise InvalidStructureError("probabilities must have a positive sum")
        if abs(total - 1.0) > settings.tolerance:
            logger.warning("Distribution sums to %.12g; renormalizing", total)
            table = table / total
        return cls(space, table)

    def log(self) -> np.ndarray:
        return np.log(self.probabilities)


@dataclass(frozen=True, eq=False)
class CliqueFactorization:
    """Positive factors on maximal cliques; ``factors[C]`` is indexed by sorted C."""

    space: StrategySpace
    cliques: HGraph
    factors: Mapping[Hyperlink, np.ndarray]

    def reconstruct(self) -> np.ndarray:
        total = np.ones(self.space.shape, dtype=float)
        for clique, table in self.factors.items():
            total = total * extend_table(table, sorted(clique), self.space)
        return total

    def max_relative_error(self, p: DistributionTable) -> float:
        return float(np.max(np.abs(self.reconstruct() - p.probabilities) / p.probabilities))


def _mrf_settings(settings: Optional[Settings]) -> Settings:
    settings = settings or get_settings()
    return settings.model_copy(update={"tolerance": settings.mrf_tolerance})


def _require_graph(p: DistributionTable, g: DiGraph) -> None:
    if g.node_count != p.space.players:
        raise InvalidStructureError("graph and distribution disagree on the number of variables")
    if not g.is_undirected():
        raise InvalidStructureError("the local Markov property needs an undirected graph")


def check_local_markov(p: DistributionTable, g: DiGraph, settings: Optional[Settings] = None) -> bool:
    """Check P(x_i | x_{-i}) = P(x_i | x_{N_i}) for every node and profile."""

    settings = settings or get_settings()
    _require_graph(p, g)
    table = p.probabilities
    for i in range(p.space.players):
        rest = tuple(j for j in range(p.space.players) if j not in g.closed_neighbors(i))
        full = table / table.sum(axis=i, keepdims=True)
        marginal = table.sum(axis=rest, keepdims=True) if rest else table
        local = marginal / marginal.sum(axis=i, keepdims=True)
        gap = np.abs(full - local) / local
        if float(np.max(gap)) > settings.mrf_tolerance:
            logger.info("Local Markov property fails at node %d (relative gap %.3e)", i, float(np.max(gap)))
            return False
    return True


def _clique_order(clique: Hyperlink):
    return len(clique), hyperlink_key(clique)


def hc_factorize(
    p: DistributionTable, g: DiGraph, settings: Optional[Settings] = None
) -> CliqueFactorization:
    settings = settings or get_settings()
    if not check_local_markov(p, g, settings):
        raise MarkovPropertyError("distribution is not Markov with respect to the graph")
    local = _mrf_settings(settings)
    space = p.space
    phi = p.log()

    if not is_graphical_on(game_from_potential(PotentialFunction(space, phi)), g, local):
        raise InvariantViolationError("log-probability game is not graphical on the graph")
    cliques = maximal_cliques(g, settings)
    decomposition = mobius_decompose(phi, space=space, settings=local)
    supports = decomposition.supports()
    if not h_preceq(HGraph(space.players, frozenset(supports)), cliques):
        raise InvariantViolationError("interaction supports are not inside the maximal cliques")

    ordered = sorted(cliques.hyperlinks, key=_clique_order)
    logs: Dict[Hyperlink, np.ndarray] = {
        clique: np.zeros(tuple(space.action_counts[v] for v in sorted(clique))) for clique in ordered
    }
    for subset, component in decomposition.nonzero_components():
        if subset:
            target = next(clique for clique in ordered if subset <= clique)
        else:
            # constant goes to the lexicographically smallest clique
            target = min(ordered, key=hyperlink_key)
        logs[target] = logs[target] + embed_table(component, sorted(subset), sorted(target), space)

    result = CliqueFactorization(space, cliques, {clique: np.exp(t) for clique, t in logs.items()})
    error = result.max_relative_error(p)
    logger.info("Factorized over %d cliques, max relative error %.3e", len(ordered), error)
    if error > 10 * settings.mrf_tolerance:
        raise InvariantViolationError(f"factor product misses the distribution by {error:.3e}")
    return result
