"""JSON documents on disk and their conversion to library objects."""

from __future__ import annotations

import hashlib
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from .config import Settings
from .errors import FormatError
from .gamecore import Game, StrategySpace
from .hypergraph import DiGraph, FDHGraph, HGraph, directed_key
from .models import (
    DiGraphFile,
    DirectedHyperlinkFile,
    DistributionFile,
    FactorizationFile,
    FactorTableFile,
    FDHGraphFile,
    GameFile,
    HGraphFile,
    HyperlinkTermFile,
    OwnTermFile,
    ScalarLiteral,
    SeparableTermsFile,
)
from .mrf import CliqueFactorization, DistributionTable
from .scalars import ScalarMode, convert, format_scalar, mode_of, to_table
from .separability import SeparableTerms

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class JsonStore:
    """Read and write one JSON document."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def load_bytes(self) -> bytes:
        try:
            return self.path.read_bytes()
        except OSError as exc:
            raise FormatError(f"cannot read {self.path}: {exc}") from exc

    def load(self) -> Any:
        try:
            return json.loads(self.load_bytes().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise FormatError(f"{self.path} is not valid JSON: {exc}") from exc

    def load_model(self, model: Type[ModelT]) -> ModelT:
        try:
            return model.model_validate(self.load())
        except ValidationError as exc:
            raise FormatError(f"{self.path} does not match the {model.__name__} schema: {exc}") from exc

    def digest(self) -> str:
        return hashlib.sha256(self.load_bytes()).hexdigest()

    def save(self, model: BaseModel) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("w", encoding="utf-8") as handle:
            handle.write(dump_model(model))
        logger.debug("Wrote %s", self.path)


def dump_model(model: BaseModel) -> str:
    return model.model_dump_json(indent=2, exclude_none=True) + "\n"


def write_model(model: BaseModel, path: Optional[Path]) -> None:
    """Write to ``path``, or to stdout when no path is given."""

    if path is None:
        sys.stdout.write(dump_model(model))
    else:
        JsonStore(path).save(model)


def table_literals(table: np.ndarray) -> List[ScalarLiteral]:
    mode = mode_of(table)
    return [format_scalar(v, mode) for v in np.asarray(table).ravel()]


def game_from_file(document: GameFile, mode: Optional[ScalarMode] = None) -> Game:
    """Parse literals in the file's own mode, then convert to ``mode`` if requested."""

    source = ScalarMode(document.scalar)
    space = StrategySpace(tuple(document.actions))
    tables = tuple(to_table(values, space.shape, source) for values in document.utilities)
    if mode is not None and mode is not source:
        tables = tuple(convert(t, mode) for t in tables)
    return Game(space, tables)


def game_to_file(game: Game) -> GameFile:
    return GameFile(
        actions=list(game.space.action_counts),
        scalar=game.mode.value,
        utilities=[table_literals(t) for t in game.utilities],
    )


def hgraph_from_file(document: HGraphFile) -> HGraph:
    return HGraph.of(document.nodes, document.hyperlinks)


def hgraph_to_file(h: HGraph) -> HGraphFile:
    return HGraphFile(nodes=h.node_count, hyperlinks=[list(link) for link in h.sorted_hyperlinks()])


def fdh_from_file(document: FDHGraphFile) -> FDHGraph:
    return FDHGraph.of(document.nodes, [(d.tail, d.head) for d in document.hyperlinks])


def fdh_to_file(f: FDHGraph) -> FDHGraphFile:
    return FDHGraphFile(
        nodes=f.node_count,
        hyperlinks=[DirectedHyperlinkFile(tail=d.tail, head=sorted(d.head)) for d in f.sorted_hyperlinks()],
    )


def digraph_from_file(document: DiGraphFile) -> DiGraph:
    return DiGraph(document.nodes, frozenset((i, j) for i, j in document.links))


def digraph_to_file(g: DiGraph) -> DiGraphFile:
    return DiGraphFile(nodes=g.node_count, links=[[i, j] for i, j in g.sorted_links()])


def distribution_from_file(document: DistributionFile, settings: Optional[Settings] = None) -> DistributionTable:
    space = StrategySpace(tuple(document.actions))
    return DistributionTable.from_values(space, document.probabilities, settings)


def factorization_to_file(result: CliqueFactorization, version: str, error: float) -> FactorizationFile:
    factors = []
    for clique in result.cliques:
        players = sorted(clique)
        factors.append(
            FactorTableFile(
                clique=players,
                actions=[result.space.action_counts[p] for p in players],
                values=[float(v) for v in result.factors[clique].ravel()],
            )
        )
    return FactorizationFile(
        version=version,
        nodes=result.space.players,
        cliques=hgraph_to_file(result.cliques),
        factors=factors,
        max_relative_error=error,
    )


def terms_to_file(terms: SeparableTerms, f: FDHGraph) -> SeparableTermsFile:
    return SeparableTermsFile(
        fdh=fdh_to_file(f),
        terms=[
            HyperlinkTermFile(
                tail=link.tail,
                head=sorted(link.head),
                players=sorted(link.head | {link.tail}),
                values=table_literals(terms.terms[link]),
            )
            for link in sorted(terms.terms, key=directed_key)
        ],
        own=[OwnTermFile(player=i, values=table_literals(t)) for i, t in sorted(terms.own.items())],
        nonstrategic=[table_literals(t) for t in terms.nonstrategic],
    )


def load_game(path: Path, mode: Optional[ScalarMode] = None) -> Game:
    return game_from_file(JsonStore(path).load_model(GameFile), mode)


def save_game(game: Game, path: Path) -> None:
    JsonStore(path).save(game_to_file(game))


def load_hgraph(path: Path) -> HGraph:
    return hgraph_from_file(JsonStore(path).load_model(HGraphFile))


def load_fdhgraph(path: Path) -> FDHGraph:
    return fdh_from_file(JsonStore(path).load_model(FDHGraphFile))


def load_digraph(path: Path) -> DiGraph:
    return digraph_from_file(JsonStore(path).load_model(DiGraphFile))


def load_distribution(path: Path, settings: Optional[Settings] = None) -> DistributionTable:
    return distribution_from_file(JsonStore(path).load_model(DistributionFile), settings)
