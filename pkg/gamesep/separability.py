"""Minimal separability structure of functions and games.

A function f on X is split into interaction components anchored at a
reference profile z:

    Φ_S(x_S) = Σ_{T ⊆ S} (-1)^{|S \\ T|} f(x_T, z_{-T})

Components vanish as soon as one coordinate of S sits at its reference
action and they add back up to f. f is separable on an H-graph exactly when
every nonzero component lives inside one of its hyperlinks, so the minimal
H-graph is formed by the inclusion-maximal supports. The same holds per
player for games, where components not involving the player are the
non-strategic part.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import Settings, get_settings
from .errors import InvalidStructureError, InvariantViolationError, NotSeparableError
from .gamecore import Game, Profile, StrategySpace, extend_table
from .hypergraph import (
    DiGraph,
    DirectedHyperlink,
    FDHGraph,
    HGraph,
    Hyperlink,
    directed_key,
    f_preceq,
    graph_from_fdh,
    h_preceq,
    hyperlink_key,
    local_hgraph,
    simplify_h,
)
from .linalg import in_column_span
from .scalars import ScalarMode, is_zero, max_abs, mode_of, zeros

logger = logging.getLogger(__name__)


def _tolerance(table: np.ndarray, tolerance: Optional[float], settings: Optional[Settings]) -> float:
    if mode_of(table) is ScalarMode.RATIONAL:
        return 0.0
    if tolerance is not None:
        return tolerance
    return (settings or get_settings()).tolerance


def _as_space_table(table: np.ndarray, space: Optional[StrategySpace]) -> Tuple[StrategySpace, np.ndarray]:
    table = np.asarray(table)
    if space is None:
        return StrategySpace(table.shape), table
    if table.size != space.profile_count:
        raise InvalidStructureError(f"table has {table.size} entries, expected {space.profile_count}")
    return space, table.reshape(space.shape)


def _reference(space: StrategySpace, reference: Optional[Sequence[int]]) -> Profile:
    if reference is None:
        return space.zero_profile()
    z = tuple(int(a) for a in reference)
    if len(z) != space.players or any(not 0 <= a < k for a, k in zip(z, space.action_counts)):
        raise InvalidStructureError(f"reference profile {z} does not fit {space.action_counts}")
    return z


def _component(table: np.ndarray, subset: Tuple[int, ...], z: Profile) -> np.ndarray:
    index = tuple(slice(None) if p in subset else z[p] for p in range(table.ndim))
    g = np.asarray(table[index], dtype=table.dtype)
    for axis, p in enumerate(subset):
        g = g - np.take(g, [z[p]], axis=axis)
    return g


def _depends_on(table: np.ndarray, p: int, z: Profile, tol: float, scale) -> bool:
    return not is_zero(table - np.take(table, [z[p]], axis=p), tol, scale)


def _subsets(nodes: Sequence[int], containing: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    for size in range(len(nodes) + 1):
        for subset in itertools.combinations(nodes, size):
            if containing is None or containing in subset:
                yield subset


@dataclass(frozen=True, eq=False)
class InteractionDecomposition:
    space: StrategySpace
    reference: Profile
    components: Mapping[FrozenSet[int], np.ndarray]
    nonzero: FrozenSet[FrozenSet[int]] = field(default_factory=frozenset)

    def component(self, subset) -> np.ndarray:
        subset = frozenset(subset)
        if subset in self.components:
            return self.components[subset]
        shape = tuple(self.space.action_counts[p] for p in sorted(subset))
        return zeros(shape, self._mode())

    def nonzero_components(self) -> List[Tuple[FrozenSet[int], np.ndarray]]:
        """Components above the zero test, constant component included."""

        return [(s, self.components[s]) for s in sorted(self.nonzero, key=hyperlink_key)]

    def supports(self) -> List[FrozenSet[int]]:
        """Nonempty subsets with a nonzero component, in lexicographic order."""

        return sorted((s for s in self.nonzero if s), key=hyperlink_key)

    def reconstruct(self) -> np.ndarray:
        total = zeros(self.space.shape, self._mode())
        for subset, table in self.components.items():
            total = total + extend_table(table, sorted(subset), self.space)
        return total

    def _mode(self) -> ScalarMode:
        first = next(iter(self.components.values()), None)
        return mode_of(first) if first is not None else ScalarMode.RATIONAL


def mobius_decompose(
    table: np.ndarray,
    reference: Optional[Sequence[int]] = None,
    *,
    space: Optional[StrategySpace] = None,
    tolerance: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> InteractionDecomposition:
    space, table = _as_space_table(table, space)
    z = _reference(space, reference)
    tol = _tolerance(table, tolerance, settings)
    scale = max_abs(table) if tol else 0
    dependent = [p for p in range(space.players) if _depends_on(table, p, z, tol, scale)]
    components: Dict[FrozenSet[int], np.ndarray] = {}
    nonzero = set()
    for subset in _subsets(dependent):
        phi = _component(table, subset, z)
        components[frozenset(subset)] = phi
        if not is_zero(phi, tol, scale):
            nonzero.add(frozenset(subset))
    logger.debug(
        "Decomposed table %s: %d dependent coordinates, %d nonzero components",
        space.shape,
        len(dependent),
        len(nonzero),
    )
    return InteractionDecomposition(space, z, components, frozenset(nonzero))


def _maximal(sets: Sequence[FrozenSet[int]]) -> FrozenSet[FrozenSet[int]]:
    return frozenset(s for s in sets if not any(s < t for t in sets))


def minimal_hgraph(
    table: np.ndarray,
    reference: Optional[Sequence[int]] = None,
    *,
    space: Optional[StrategySpace] = None,
    tolerance: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> HGraph:
    decomposition = mobius_decompose(table, reference, space=space, tolerance=tolerance, settings=settings)
    return HGraph(decomposition.space.players, _maximal(decomposition.supports()))


def is_h_separable(table: np.ndarray, h: HGraph, **kwargs) -> bool:
    return h_preceq(minimal_hgraph(table, **kwargs), h)


def extract_h_terms(table: np.ndarray, h: HGraph, **kwargs) -> Dict[Hyperlink, np.ndarray]:
    """Terms f_J on the hyperlinks of ``h`` summing exactly to f.

    Each nonzero component goes to the lexicographically smallest hyperlink
    containing it; the constant goes to the smallest hyperlink overall. With no
    hyperlinks the result is empty (only possible for constant f).
    """

    decomposition = mobius_decompose(table, **kwargs)
    space = decomposition.space
    if not h_preceq(HGraph(space.players, _maximal(decomposition.supports())), h):
        raise NotSeparableError("function is not separable on the given H-graph")
    links = sorted(h.hyperlinks, key=hyperlink_key)
    mode = mode_of(np.asarray(table))
    terms = {
        link: zeros(tuple(space.action_counts[p] for p in sorted(link)), mode) for link in links
    }
    for subset, phi in decomposition.nonzero_components():
        if not links:
            break
        target = next(link for link in links if subset <= link)
        terms[target] = terms[target] + embed_table(phi, sorted(subset), sorted(target), space)
    return terms


def embed_table(table: np.ndarray, axes: Sequence[int], target: Sequence[int], space: StrategySpace) -> np.ndarray:
    """Broadcast a table over the sorted players ``axes`` to the larger sorted set ``target``."""

    shape = tuple(space.action_counts[p] if p in axes else 1 for p in target)
    full = tuple(space.action_counts[p] for p in target)
    return np.array(np.broadcast_to(np.reshape(table, shape), full))


def _player_supports(
    u: Game, i: int, reference: Optional[Sequence[int]], tol: float
) -> List[FrozenSet[int]]:
    table = u.utilities[i]
    z = _reference(u.space, reference)
    scale = max_abs(table) if tol else 0
    if not _depends_on(table, i, z, tol, scale):
        return []
    dependent = [p for p in range(u.space.players) if _depends_on(table, p, z, tol, scale)]
    found = []
    for subset in _subsets(dependent, containing=i):
        if len(subset) >= 2 and not is_zero(_component(table, subset, z), tol, scale):
            found.append(frozenset(subset))
    return found


def minimal_fdh(
    u: Game,
    reference: Optional[Sequence[int]] = None,
    *,
    tolerance: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> FDHGraph:
    tol = _tolerance(u.utilities[0], tolerance, settings)
    links = set()
    for i in range(u.space.players):
        supports = _player_supports(u, i, reference, tol)
        for subset in _maximal(supports):
            links.add(DirectedHyperlink(i, subset - {i}))
    result = FDHGraph(u.space.players, frozenset(links))
    logger.debug("Minimal FDH-graph has %d hyperlinks", len(links))
    return result


def is_f_separable(u: Game, f: FDHGraph, **kwargs) -> bool:
    return f_preceq(minimal_fdh(u, **kwargs), f)


@dataclass(frozen=True, eq=False)
class SeparableTerms:
    """Per-hyperlink utilities, own-action terms and non-strategic remainders.

    ``terms[(i, J)]`` is indexed by the sorted players of ``{i} ∪ J``;
    ``own[i]`` by player i's action; ``nonstrategic[i]`` is a full table that
    does not depend on player i's action.
    """

    space: StrategySpace
    terms: Mapping[DirectedHyperlink, np.ndarray]
    own: Mapping[int, np.ndarray]
    nonstrategic: Tuple[np.ndarray, ...]

    def player_table(self, i: int) -> np.ndarray:
        total = np.array(self.nonstrategic[i])
        for link, table in self.terms.items():
            if link.tail == i:
                total = total + extend_table(table, sorted(link.head | {i}), self.space)
        if i in self.own:
            total = total + extend_table(self.own[i], [i], self.space)
        return total

    def reassemble(self) -> Game:
        return Game(self.space, tuple(self.player_table(i) for i in range(self.space.players)))


def extract_f_terms(
    u: Game,
    f: FDHGraph,
    reference: Optional[Sequence[int]] = None,
    *,
    tolerance: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> SeparableTerms:
    if not is_f_separable(u, f, reference=reference, tolerance=tolerance, settings=settings):
        raise NotSeparableError("game is not separable on the given FDH-graph")
    space = u.space
    mode = u.mode
    terms: Dict[DirectedHyperlink, np.ndarray] = {}
    own: Dict[int, np.ndarray] = {}
    remainders = []
    for i in range(space.players):
        decomposition = mobius_decompose(
            u.utilities[i], reference, tolerance=tolerance, settings=settings
        )
        links = [DirectedHyperlink(i, head) for head in f.heads_at(i)]
        for link in links:
            terms[link] = zeros(tuple(space.action_counts[p] for p in sorted(link.head | {i})), mode)
        remainder = zeros(space.shape, mode)
        for subset, phi in decomposition.nonzero_components():
            axes = sorted(subset)
            if i not in subset:
                remainder = remainder + extend_table(phi, axes, space)
                continue
            candidates = [link for link in links if subset - {i} <= link.head]
            if candidates:
                target = min(candidates, key=directed_key)
                terms[target] = terms[target] + embed_table(phi, axes, sorted(target.head | {i}), space)
            elif subset == {i}:
                own[i] = own.get(i, zeros((space.action_counts[i],), mode)) + phi
            else:
                raise InvariantViolationError(f"component on {axes} has no hyperlink at tail {i}")
        remainders.append(np.array(remainder))
    return SeparableTerms(space, terms, own, tuple(remainders))


def _indicator_columns(space: StrategySpace, links: Sequence[Hyperlink], exact: bool) -> np.ndarray:
    coords = np.indices(space.shape).reshape(space.players, -1)
    columns = [np.ones(space.profile_count, dtype=int)]
    for link in links:
        axes = sorted(link)
        dims = tuple(space.action_counts[p] for p in axes)
        local = np.ravel_multi_index(tuple(coords[p] for p in axes), dims)
        block = np.zeros((space.profile_count, int(np.prod(dims))), dtype=int)
        block[np.arange(space.profile_count), local] = 1
        columns.extend(block.T)
    matrix = np.stack(columns, axis=1)
    return matrix.astype(object) if exact else matrix.astype(float)


def oracle_is_separable(
    table: np.ndarray,
    h: HGraph,
    *,
    space: Optional[StrategySpace] = None,
    tolerance: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> bool:
    """Span test: is f a sum of functions each depending on one hyperlink only?

    Solved directly as a linear feasibility problem over indicator functions
    of the hyperlinks' local profiles (plus the constant function).
    """

    space, table = _as_space_table(table, space)
    if h.node_count != space.players:
        raise InvalidStructureError("H-graph and table disagree on the number of players")
    exact = mode_of(table) is ScalarMode.RATIONAL
    tol = _tolerance(table, tolerance, settings)
    matrix = _indicator_columns(space, sorted(simplify_h(h).hyperlinks, key=hyperlink_key), exact)
    return in_column_span(matrix, table.ravel(), exact, tol)


def oracle_is_f_separable(u: Game, f: FDHGraph, **kwargs) -> bool:
    return all(
        oracle_is_separable(u.utilities[i], local_hgraph(f, i), **kwargs) for i in range(u.space.players)
    )


def minimal_graph(u: Game, **kwargs) -> DiGraph:
    return graph_from_fdh(minimal_fdh(u, **kwargs))
