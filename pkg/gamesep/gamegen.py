"""Example games and seeded random generators.

Every generator is deterministic given its parameters; random ones draw from
``numpy.random.Generator(PCG64(seed))``. Planted generators draw integer
coefficients in [-9, 9] and re-draw (up to ``planted_retries`` times) until
the minimal structure of the result equals the planted one.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Settings, get_settings
from .errors import InvalidStructureError
from .gamecore import Game, PotentialFunction, Profile, StrategySpace, extend_table, game_from_potential
from .hypergraph import DiGraph, DirectedHyperlink, FDHGraph, HGraph, hyperlink_key, simplify_f, simplify_h
from .models import GeneratorParams
from .mrf import DistributionTable
from .scalars import ScalarMode, to_table, zeros
from .separability import minimal_fdh, minimal_hgraph

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator]
Zeta = Sequence[Sequence[object]]

ZETA_SIGN = ((1, -1), (-1, 1))
"""ζ(a, b) = (-1)^(a - b) on binary actions."""

COEFFICIENT_RANGE = (-9, 9)


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _zeta_table(zeta: Zeta) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
    try:
        table = tuple(tuple(Fraction(v) for v in row) for row in zeta)
    except (TypeError, ValueError) as exc:
        raise InvalidStructureError(f"bad pairwise table {zeta!r}") from exc
    if len(table) != 2 or any(len(row) != 2 for row in table):
        raise InvalidStructureError("pairwise table must be 2x2")
    return table


def _binary_game(n: int, utility: Callable[[int, Profile], object]) -> Game:
    return Game.from_function(StrategySpace((2,) * n), utility)


def gen_coordination(
    g: DiGraph, zeta: Zeta = ZETA_SIGN, weights: Optional[Mapping[Tuple[int, int], object]] = None
) -> Game:
    """Network coordination game u_i(x) = Σ_{j∈N_i} w_ij ζ(x_i, x_j).

    ``weights`` may be keyed by either orientation of a link; missing links
    weigh 1.
    """

    table = _zeta_table(zeta)
    weights = weights or {}

    def weight(i: int, j: int) -> Fraction:
        return Fraction(weights.get((i, j), weights.get((j, i), 1)))

    neighbors = [sorted(g.out_neighbors(i)) for i in range(g.node_count)]
    return _binary_game(
        g.node_count,
        lambda i, x: sum((weight(i, j) * table[x[i]][x[j]] for j in neighbors[i]), Fraction(0)),
    )


def gen_best_shot(g: DiGraph, c: object) -> Game:
    """Best-shot public good game: 1 - c when contributing, 1 when a neighbor does, else 0."""

    cost = Fraction(c)
    neighbors = [sorted(g.out_neighbors(i)) for i in range(g.node_count)]

    def utility(i: int, x: Profile) -> Fraction:
        if x[i] == 1:
            return 1 - cost
        return Fraction(1) if any(x[j] == 1 for j in neighbors[i]) else Fraction(0)

    return _binary_game(g.node_count, utility)


def gen_best_shot_ring(n: int, c: object) -> Game:
    """Ring form u_i = max{x_{i-1}, x_i, x_{i+1}} - c x_i."""

    if n < 3:
        raise InvalidStructureError("a ring needs at least 3 nodes")
    cost = Fraction(c)
    return _binary_game(n, lambda i, x: Fraction(max(x[i - 1], x[i], x[(i + 1) % n])) - cost * x[i])


def gen_two_level(g: DiGraph, zeta: Zeta = ZETA_SIGN, bonus: object = 1) -> Game:
    """All-pairs coordination plus a bonus L when a player agrees with every neighbor."""

    table = _zeta_table(zeta)
    bonus = Fraction(bonus)
    n = g.node_count
    neighbors = [sorted(g.out_neighbors(i)) for i in range(n)]

    def utility(i: int, x: Profile) -> Fraction:
        pairwise = sum((table[x[i]][x[j]] for j in range(n) if j != i), Fraction(0))
        agrees = all(x[k] == x[i] for k in neighbors[i])
        return pairwise + (bonus if agrees else 0)

    return _binary_game(n, utility)


def gen_strong_coordination(g: DiGraph) -> Game:
    neighbors = [sorted(g.out_neighbors(i)) for i in range(g.node_count)]
    return _binary_game(
        g.node_count, lambda i, x: Fraction(int(all(x[j] == x[i] for j in neighbors[i])))
    )


def gen_matching_pennies() -> Game:
    """Player 0 wants to match, player 1 to mismatch; stakes ±1."""

    return _binary_game(2, lambda i, x: (1 if x[0] == x[1] else -1) * (1 if i == 0 else -1))


def _draw(rng: np.random.Generator, shape: Sequence[int], mode: ScalarMode) -> np.ndarray:
    low, high = COEFFICIENT_RANGE
    values = rng.integers(low, high + 1, size=tuple(shape))
    return to_table((int(v) for v in values.ravel()), tuple(shape), mode)


def _local_shape(space: StrategySpace, players: Sequence[int]) -> Tuple[int, ...]:
    return tuple(space.action_counts[p] for p in sorted(players))


def random_game(space: StrategySpace, seed: Seed, mode: ScalarMode = ScalarMode.RATIONAL) -> Game:
    rng = make_rng(seed)
    return Game(space, tuple(_draw(rng, space.shape, mode) for _ in range(space.players)))


def random_nonstrategic(space: StrategySpace, seed: Seed, mode: ScalarMode = ScalarMode.RATIONAL) -> Game:
    """Random game where no utility depends on its own player's action."""

    rng = make_rng(seed)
    tables = []
    for i in range(space.players):
        others = [p for p in range(space.players) if p != i]
        local = _draw(rng, _local_shape(space, others), mode)
        tables.append(np.array(extend_table(local, others, space)))
    return Game(space, tuple(tables))


def random_hgraph(n: int, seed: Seed, max_links: int = 3) -> HGraph:
    """Up to ``max_links`` random hyperlinks, each with at least one node."""

    rng = make_rng(seed)
    links = set()
    for _ in range(int(rng.integers(1, max_links + 1))):
        size = int(rng.integers(1, n + 1))
        links.add(frozenset(int(v) for v in rng.choice(n, size=size, replace=False)))
    return HGraph(n, frozenset(links))


def random_fdhgraph(n: int, seed: Seed, max_heads: int = 2) -> FDHGraph:
    """Up to ``max_heads`` random heads per tail; some tails may get none."""

    rng = make_rng(seed)
    links = set()
    for tail in range(n):
        others = [v for v in range(n) if v != tail]
        if not others:
            continue
        for _ in range(int(rng.integers(0, max_heads + 1))):
            size = int(rng.integers(1, len(others) + 1))
            head = frozenset(int(v) for v in rng.choice(others, size=size, replace=False))
            links.add(DirectedHyperlink(tail, head))
    return FDHGraph(n, frozenset(links))


def _planted_function_once(space: StrategySpace, h: HGraph, rng, mode: ScalarMode) -> np.ndarray:
    total = zeros(space.shape, mode)
    for link in sorted(h.hyperlinks, key=hyperlink_key):
        total = total + extend_table(_draw(rng, _local_shape(space, link), mode), sorted(link), space)
    return total


def gen_planted_function(
    space: StrategySpace,
    h: HGraph,
    seed: Seed,
    mode: ScalarMode = ScalarMode.RATIONAL,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Sum of random terms on the hyperlinks of ``h``."""

    settings = settings or get_settings()
    if h.node_count != space.players:
        raise InvalidStructureError("H-graph and strategy space disagree on the number of players")
    rng = make_rng(seed)
    target = simplify_h(h)
    for attempt in range(settings.planted_retries):
        table = _planted_function_once(space, h, rng, mode)
        if minimal_hgraph(table, settings=settings) == target:
            return table
        logger.debug("Planted function attempt %d degenerate; redrawing", attempt)
    logger.warning("Planted function stayed degenerate after %d draws", settings.planted_retries)
    return table


def gen_planted_potential(
    h: HGraph,
    seed: Seed,
    space: Optional[StrategySpace] = None,
    mode: ScalarMode = ScalarMode.RATIONAL,
    settings: Optional[Settings] = None,
) -> Game:
    """Potential game whose potential is a planted function on ``h`` (binary actions by default)."""

    space = space or StrategySpace((2,) * h.node_count)
    phi = gen_planted_function(space, h, seed, mode, settings)
    return game_from_potential(PotentialFunction(space, phi))


def _planted_game_once(space: StrategySpace, f: FDHGraph, rng, mode: ScalarMode) -> Game:
    tables = list(random_nonstrategic(space, rng, mode).utilities)
    for link in f.sorted_hyperlinks():
        players = sorted(link.head | {link.tail})
        term = _draw(rng, _local_shape(space, players), mode)
        tables[link.tail] = tables[link.tail] + extend_table(term, players, space)
    return Game(space, tuple(tables))


def gen_planted(
    f: FDHGraph,
    seed: Seed,
    space: Optional[StrategySpace] = None,
    mode: ScalarMode = ScalarMode.RATIONAL,
    settings: Optional[Settings] = None,
) -> Game:
    """Random game separable on ``f``: hyperlink terms plus a non-strategic remainder."""

    settings = settings or get_settings()
    space = space or StrategySpace((2,) * f.node_count)
    if f.node_count != space.players:
        raise InvalidStructureError("FDH-graph and strategy space disagree on the number of players")
    rng = make_rng(seed)
    target = simplify_f(f)
    for attempt in range(settings.planted_retries):
        game = _planted_game_once(space, f, rng, mode)
        if minimal_fdh(game, settings=settings) == target:
            return game
        logger.debug("Planted game attempt %d degenerate; redrawing", attempt)
    logger.warning("Planted game stayed degenerate after %d draws", settings.planted_retries)
    return game


def gen_pairwise_mrf(g: DiGraph, seed: Seed, strength: float = 1.0) -> DistributionTable:
    """Positive binary MRF with random unary and pairwise log-potentials on the links of g."""

    if not g.is_undirected():
        raise InvalidStructureError("a pairwise MRF needs an undirected graph")
    rng = make_rng(seed)
    n = g.node_count
    space = StrategySpace((2,) * n)
    log_p = np.zeros(space.shape)
    for i in range(n):
        log_p = log_p + extend_table(rng.normal(0.0, strength, size=2), [i], space)
    for i, j in sorted(link for link in g.links if link[0] < link[1]):
        log_p = log_p + extend_table(rng.normal(0.0, strength, size=(2, 2)), [i, j], space)
    weights = np.exp(log_p)
    return DistributionTable(space, weights / weights.sum())


def gen_triangle_mrf(strength: float = 1.0) -> DistributionTable:
    """P ∝ exp(strength · x_0 x_1 x_2) on three binary variables."""

    space = StrategySpace((2, 2, 2))
    weights = np.exp(strength * np.prod(np.indices(space.shape), axis=0))
    return DistributionTable(space, weights / weights.sum())



def generate(
    params: GeneratorParams,
    graph: Optional[DiGraph] = None,
    fdh: Optional[FDHGraph] = None,
    hgraph: Optional[HGraph] = None,
    settings: Optional[Settings] = None,
) -> Game:
    """Build the game named by ``params.variant``.

    Graph-based variants default to the ring on ``params.n`` nodes; planted
    variants default to a random structure drawn from ``params.seed``.
    """

    variant = params.variant
    logger.info("Generating %s game (n=%d, seed=%d)", variant, params.n, params.seed)
    if variant == "matching-pennies":
        return gen_matching_pennies()
    if variant == "best-shot-ring":
        return gen_best_shot_ring(params.n, Fraction(params.c))
    if variant == "planted":
        rng = make_rng(params.seed)
        return gen_planted(fdh or random_fdhgraph(params.n, rng), rng, settings=settings)
    if variant == "planted-potential":
        rng = make_rng(params.seed)
        return gen_planted_potential(hgraph or random_hgraph(params.n, rng), rng, settings=settings)

    g = graph or DiGraph.ring(params.n)
    if variant == "coordination":
        return gen_coordination(g, params.zeta_table())
    if variant == "best-shot":
        return gen_best_shot(g, Fraction(params.c))
    if variant == "two-level":
        return gen_two_level(g, params.zeta_table(), Fraction(params.bonus))
    return gen_strong_coordination(g)
