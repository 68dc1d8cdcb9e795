"""Graphs, H-graphs and FDH-graphs on a dense 0-based node set.

All three types are immutable value objects. The order ``preceq`` is the
sub-graph order: every hyperlink of the left side is contained in some
hyperlink of the right side (per tail node for FDH-graphs).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, NamedTuple, Tuple

import networkx as nx

from .config import Settings, get_settings
from .errors import InvalidStructureError, NodeCountMismatchError, SizeGuardError

logger = logging.getLogger(__name__)

Hyperlink = FrozenSet[int]


class DirectedHyperlink(NamedTuple):
    tail: int
    head: Hyperlink


def _check_nodes(node_count: int, nodes: Iterable[int], what: str) -> None:
    for node in nodes:
        if not isinstance(node, int) or isinstance(node, bool) or not 0 <= node < node_count:
            raise InvalidStructureError(f"{what} references node {node!r} outside 0..{node_count - 1}")


def hyperlink_key(link: Iterable[int]) -> Tuple[int, ...]:
    """Sort key giving the lexicographic order on sorted node tuples."""

    return tuple(sorted(link))


def directed_key(link: DirectedHyperlink) -> Tuple[int, Tuple[int, ...]]:
    return link.tail, hyperlink_key(link.head)


@dataclass(frozen=True)
class DiGraph:
    node_count: int
    links: FrozenSet[Tuple[int, int]]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise InvalidStructureError("a graph needs at least one node")
        object.__setattr__(self, "links", frozenset((int(i), int(j)) for i, j in self.links))
        for i, j in self.links:
            _check_nodes(self.node_count, (i, j), "link")
            if i == j:
                raise InvalidStructureError(f"self-loop at node {i}")

    @classmethod
    def empty(cls, n: int) -> "DiGraph":
        return cls(n, frozenset())

    @classmethod
    def undirected(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "DiGraph":
        links = set()
        for i, j in edges:
            links.add((i, j))
            links.add((j, i))
        return cls(n, frozenset(links))

    @classmethod
    def complete(cls, n: int) -> "DiGraph":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n) if i != j))

    @classmethod
    def ring(cls, n: int) -> "DiGraph":
        if n < 3:
            raise InvalidStructureError("a ring needs at least 3 nodes")
        return cls.undirected(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def line(cls, n: int) -> "DiGraph":
        return cls.undirected(n, ((i, i + 1) for i in range(n - 1)))

    def out_neighbors(self, i: int) -> FrozenSet[int]:
        """N_i, the open out-neighborhood."""

        return frozenset(j for (t, j) in self.links if t == i)

    def closed_neighbors(self, i: int) -> FrozenSet[int]:
        return self.out_neighbors(i) | {i}

    def is_undirected(self) -> bool:
        return all((j, i) in self.links for (i, j) in self.links)

    def sorted_links(self) -> List[Tuple[int, int]]:
        return sorted(self.links)


@dataclass(frozen=True)
class HGraph:
    node_count: int
    hyperlinks: FrozenSet[Hyperlink]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise InvalidStructureError("an H-graph needs at least one node")
        links = frozenset(frozenset(int(v) for v in link) for link in self.hyperlinks)
        for link in links:
            if not link:
                raise InvalidStructureError("hyperlinks must be nonempty")
            _check_nodes(self.node_count, link, "hyperlink")
        object.__setattr__(self, "hyperlinks", links)

    @classmethod
    def of(cls, n: int, hyperlinks: Iterable[Iterable[int]]) -> "HGraph":
        return cls(n, frozenset(frozenset(link) for link in hyperlinks))

    @classmethod
    def trivial(cls, n: int) -> "HGraph":
        return cls(n, frozenset({frozenset(range(n))}))

    def sorted_hyperlinks(self) -> List[Tuple[int, ...]]:
        return sorted(hyperlink_key(link) for link in self.hyperlinks)

    def is_simple(self) -> bool:
        return all(not (a < b) for a in self.hyperlinks for b in self.hyperlinks)

    def __iter__(self) -> Iterator[Hyperlink]:
        return iter(sorted(self.hyperlinks, key=hyperlink_key))


@dataclass(frozen=True)
class FDHGraph:
    node_count: int
    hyperlinks: FrozenSet[DirectedHyperlink]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise InvalidStructureError("an FDH-graph needs at least one node")
        links = frozenset(
            DirectedHyperlink(int(tail), frozenset(int(v) for v in head)) for tail, head in self.hyperlinks
        )
        for tail, head in links:
            _check_nodes(self.node_count, (tail, *head), "directed hyperlink")
            if not head:
                raise InvalidStructureError(f"empty head at tail {tail}")
            if tail in head:
                raise InvalidStructureError(f"tail {tail} inside its own head")
        object.__setattr__(self, "hyperlinks", links)

    @classmethod
    def of(cls, n: int, hyperlinks: Iterable[Tuple[int, Iterable[int]]]) -> "FDHGraph":
        return cls(n, frozenset(DirectedHyperlink(tail, frozenset(head)) for tail, head in hyperlinks))

    def heads_at(self, tail: int) -> List[Hyperlink]:
        return sorted((d.head for d in self.hyperlinks if d.tail == tail), key=hyperlink_key)

    def sorted_hyperlinks(self) -> List[DirectedHyperlink]:
        return sorted(self.hyperlinks, key=directed_key)

    def is_simple(self) -> bool:
        return all(
            not (a.tail == b.tail and a.head < b.head) for a in self.hyperlinks for b in self.hyperlinks
        )

    def __iter__(self) -> Iterator[DirectedHyperlink]:
        return iter(self.sorted_hyperlinks())


def _require_same_nodes(left, right) -> None:
    if left.node_count != right.node_count:
        raise NodeCountMismatchError(f"node counts differ: {left.node_count} vs {right.node_count}")


def _maximal(sets: Iterable[Hyperlink]) -> FrozenSet[Hyperlink]:
    pool = set(sets)
    return frozenset(s for s in pool if not any(s < other for other in pool))


def simplify_h(h: HGraph) -> HGraph:
    return HGraph(h.node_count, _maximal(h.hyperlinks))


def h_preceq(h1: HGraph, h2: HGraph) -> bool:
    _require_same_nodes(h1, h2)
    return all(any(a <= b for b in h2.hyperlinks) for a in h1.hyperlinks)


def h_intersect(h1: HGraph, h2: HGraph) -> HGraph:
    """Pairwise intersections; empty intersections are dropped."""

    _require_same_nodes(h1, h2)
    links = {a & b for a in h1.hyperlinks for b in h2.hyperlinks}
    links.discard(frozenset())
    return HGraph(h1.node_count, frozenset(links))


def h_union(h1: HGraph, h2: HGraph) -> HGraph:
    _require_same_nodes(h1, h2)
    return HGraph(h1.node_count, h1.hyperlinks | h2.hyperlinks)


def simplify_f(f: FDHGraph) -> FDHGraph:
    links = set()
    for tail in {d.tail for d in f.hyperlinks}:
        links.update(DirectedHyperlink(tail, head) for head in _maximal(f.heads_at(tail)))
    return FDHGraph(f.node_count, frozenset(links))


def f_preceq(f1: FDHGraph, f2: FDHGraph) -> bool:
    _require_same_nodes(f1, f2)
    return all(
        any(d.tail == e.tail and d.head <= e.head for e in f2.hyperlinks) for d in f1.hyperlinks
    )


def f_intersect(f1: FDHGraph, f2: FDHGraph) -> FDHGraph:
    """Per-tail pairwise head intersections; empty heads are dropped."""

    _require_same_nodes(f1, f2)
    links = {
        DirectedHyperlink(d.tail, d.head & e.head)
        for d in f1.hyperlinks
        for e in f2.hyperlinks
        if d.tail == e.tail and d.head & e.head
    }
    return FDHGraph(f1.node_count, frozenset(links))


def f_union(f1: FDHGraph, f2: FDHGraph) -> FDHGraph:
    _require_same_nodes(f1, f2)
    return FDHGraph(f1.node_count, f1.hyperlinks | f2.hyperlinks)


def fdh_from_graph(g: DiGraph) -> FDHGraph:
    links = set()
    for i in range(g.node_count):
        neighbors = g.out_neighbors(i)
        if neighbors:
            links.add(DirectedHyperlink(i, neighbors))
    return FDHGraph(g.node_count, frozenset(links))


def graph_from_fdh(f: FDHGraph) -> DiGraph:
    return DiGraph(f.node_count, frozenset((d.tail, j) for d in f.hyperlinks for j in d.head))


def fdh_from_h(h: HGraph) -> FDHGraph:
    """Every node of a hyperlink becomes a tail; singleton hyperlinks produce nothing."""

    links = {
        DirectedHyperlink(i, link - {i}) for link in h.hyperlinks if len(link) >= 2 for i in link
    }
    return FDHGraph(h.node_count, frozenset(links))


def h_from_fdh(f: FDHGraph) -> HGraph:
    return HGraph(f.node_count, frozenset(d.head | {d.tail} for d in f.hyperlinks))


def underlying_undirected(f: FDHGraph) -> FDHGraph:
    return fdh_from_h(h_from_fdh(f))


def is_undirected_fdh(f: FDHGraph) -> bool:
    return all(
        DirectedHyperlink(j, (d.head | {d.tail}) - {j}) in f.hyperlinks for d in f.hyperlinks for j in d.head
    )


def local_hgraph(f: FDHGraph, i: int) -> HGraph:
    """The local H-graph of player ``i``.

    Contains ``{i} ∪ J`` for every hyperlink ``(i, J)``, the own-action link
    ``{i}`` and the complement ``V \\ {i}`` carrying the non-strategic part.
    """

    links = {d.head | {i} for d in f.hyperlinks if d.tail == i}
    links.add(frozenset({i}))
    rest = frozenset(range(f.node_count)) - {i}
    if rest:
        links.add(rest)
    return HGraph(f.node_count, frozenset(links))


def maximal_cliques(g: DiGraph, settings: Settings | None = None) -> HGraph:
    """Maximal cliques of an undirected graph (isolated nodes give singletons)."""

    settings = settings or get_settings()
    if not g.is_undirected():
        raise InvalidStructureError("maximal cliques need an undirected graph")
    if g.node_count > settings.max_clique_nodes:
        raise SizeGuardError(
            f"clique enumeration limited to {settings.max_clique_nodes} nodes, got {g.node_count}"
        )
    graph = nx.Graph()
    graph.add_nodes_from(range(g.node_count))
    graph.add_edges_from(g.links)
    cliques = frozenset(frozenset(clique) for clique in nx.find_cliques(graph))
    logger.debug("Found %d maximal cliques on %d nodes", len(cliques), g.node_count)
    return HGraph(g.node_count, cliques)
