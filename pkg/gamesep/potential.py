from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .config import Settings, get_settings
from .errors import InvalidStructureError, InvariantViolationError, NotPotentialError
from .gamecore import Game, PotentialFunction, Profile
from .hypergraph import DiGraph, fdh_from_h, maximal_cliques, simplify_f
from .scalars import Scalar, ScalarMode, zeros
from .separability import is_h_separable, minimal_fdh, minimal_graph, minimal_hgraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PotentialWitness:
    """A deviation edge where integration and utilities disagree.

    ``cycle`` runs from the base profile to ``source``, across the edge to
    ``target`` and back to the base along the search tree; its circulation of
    utility differences is ``circulation`` (nonzero).
    """

    player: int
    source: Profile
    target: Profile
    cycle: Tuple[Profile, ...]
    circulation: Scalar


@dataclass(frozen=True)
class PotentialCertificate:
    is_potential: bool
    potential: Optional[PotentialFunction] = None
    witness: Optional[PotentialWitness] = None


def _tolerance(u: Game, settings: Optional[Settings]) -> float:
    if u.mode is ScalarMode.RATIONAL:
        return 0.0
    return (settings or get_settings()).tolerance * (1.0 + float(u.max_abs()))


def _path_to_root(parents: dict, x: Profile) -> List[Profile]:
    path = [x]
    while parents[path[-1]] is not None:
        path.append(parents[path[-1]])
    return path


def detect_potential(u: Game, settings: Optional[Settings] = None) -> PotentialCertificate:
    """Integrate utility differences along the unilateral-deviation graph.

    φ is built breadth-first from the all-zeros profile, then every deviation
    edge is checked against it.
    """

    space = u.space
    root = space.zero_profile()
    phi = zeros(space.shape, u.mode)
    parents = {root: None}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for i in range(space.players):
            for y in space.deviations(x, i):
                if y not in parents:
                    parents[y] = x
                    phi[y] = phi[x] + u.utilities[i][y] - u.utilities[i][x]
                    queue.append(y)

    tol = _tolerance(u, settings)
    for i, table in enumerate(u.utilities):
        # u_i - φ must be constant along player i's own action
        gap = table - phi
        spread = gap - np.take(gap, [0], axis=i)
        bad = np.argwhere(np.abs(spread) > tol) if tol else np.argwhere(spread != 0)
        if len(bad):
            target = tuple(int(v) for v in bad[0])
            source = target[:i] + (0,) + target[i + 1 :]
            circulation = spread[target]
            cycle = tuple(reversed(_path_to_root(parents, source))) + tuple(_path_to_root(parents, target))
            logger.info("Not a potential game: player %d deviation %s -> %s", i, source, target)
            return PotentialCertificate(
                False, witness=PotentialWitness(i, source, target, cycle, circulation)
            )
    return PotentialCertificate(True, potential=PotentialFunction(space, phi))


def _require_potential(u: Game, settings: Optional[Settings]) -> PotentialFunction:
    certificate = detect_potential(u, settings)
    if not certificate.is_potential:
        raise NotPotentialError("the game is not an exact potential game")
    return certificate.potential


def verify_potential_structure(u: Game, settings: Optional[Settings] = None) -> bool:
    """Check that the minimal FDH-graph of u is the undirected one of its potential's H-graph."""

    phi = _require_potential(u, settings)
    game_side = simplify_f(minimal_fdh(u, settings=settings))
    potential_side = simplify_f(fdh_from_h(minimal_hgraph(phi.values, settings=settings)))
    return game_side == potential_side


def is_graphical_on(u: Game, g: DiGraph, settings: Optional[Settings] = None) -> bool:
    if g.node_count != u.space.players:
        raise InvalidStructureError("graph and game disagree on the number of players")
    return minimal_graph(u, settings=settings).links <= g.links


def verify_clique_corollary(u: Game, g: DiGraph, settings: Optional[Settings] = None) -> bool:
    """Graphicality on g agrees with separability of φ on the maximal cliques of g."""

    if not g.is_undirected():
        raise InvalidStructureError("the clique statement needs an undirected graph")
    phi = _require_potential(u, settings)
    if not minimal_graph(u, settings=settings).is_undirected():
        raise InvariantViolationError("minimal graph of a potential game is not undirected")
    cliques = maximal_cliques(g, settings)
    return is_graphical_on(u, g, settings) == is_h_separable(phi.values, cliques, settings=settings)
