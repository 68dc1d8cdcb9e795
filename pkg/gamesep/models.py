from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

ScalarLiteral = Union[int, float, str]
"""A scalar literal: integer, ``"p/q"`` string, or float (float mode only)."""


def _check_rational_literal(value: ScalarLiteral) -> ScalarLiteral:
    if isinstance(value, str):
        try:
            Fraction(value.replace(" ", ""))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a numeric literal: {value!r}") from exc
    return value


def _product(values: List[int]) -> int:
    total = 1
    for v in values:
        total *= v
    return total


class GameFile(BaseModel):
    actions: List[int] = Field(min_length=1, description="Number of actions of each player")
    scalar: Literal["rational", "float"] = "rational"
    utilities: List[List[ScalarLiteral]] = Field(
        description="One table per player, profiles in lexicographic order with player 0 most significant"
    )

    @field_validator("actions")
    @classmethod
    def _positive_actions(cls, value: List[int]) -> List[int]:
        if any(k < 1 for k in value):
            raise ValueError("every player needs at least one action")
        return value

    @model_validator(mode="after")
    def _check_tables(self) -> "GameFile":
        if len(self.utilities) != len(self.actions):
            raise ValueError(f"{len(self.utilities)} utility tables for {len(self.actions)} players")
        size = _product(self.actions)
        for i, table in enumerate(self.utilities):
            if len(table) != size:
                raise ValueError(f"utility table {i} has {len(table)} entries, expected {size}")
            for value in table:
                _check_rational_literal(value)
        return self


class DecompositionTermFile(GameFile):
    component: Literal["potential", "harmonic", "nonstrategic"]


class HGraphFile(BaseModel):
    nodes: int = Field(ge=1)
    hyperlinks: List[List[int]] = Field(default_factory=list)


class DirectedHyperlinkFile(BaseModel):
    tail: int
    head: List[int] = Field(min_length=1)


class FDHGraphFile(BaseModel):
    nodes: int = Field(ge=1)
    hyperlinks: List[DirectedHyperlinkFile] = Field(default_factory=list)


class DiGraphFile(BaseModel):
    nodes: int = Field(ge=1)
    links: List[List[int]] = Field(default_factory=list)

    @field_validator("links")
    @classmethod
    def _pairs(cls, value: List[List[int]]) -> List[List[int]]:
        if any(len(link) != 2 for link in value):
            raise ValueError("links are [tail, head] pairs")
        return value


class DistributionFile(BaseModel):
    actions: List[int] = Field(min_length=1)
    probabilities: List[float]

    @model_validator(mode="after")
    def _check_size(self) -> "DistributionFile":
        size = _product(self.actions)
        if len(self.probabilities) != size:
            raise ValueError(f"distribution has {len(self.probabilities)} entries, expected {size}")
        return self


class FactorTableFile(BaseModel):
    clique: List[int]
    actions: List[int]
    values: List[float]


class FactorizationFile(BaseModel):
    version: str
    nodes: int
    cliques: HGraphFile
    factors: List[FactorTableFile]
    max_relative_error: float


class HyperlinkTermFile(BaseModel):
    tail: int
    head: List[int]
    players: List[int]
    values: List[ScalarLiteral]


class OwnTermFile(BaseModel):
    player: int
    values: List[ScalarLiteral]


class SeparableTermsFile(BaseModel):
    fdh: FDHGraphFile
    terms: List[HyperlinkTermFile]
    own: List[OwnTermFile] = Field(default_factory=list)
    nonstrategic: List[List[ScalarLiteral]]


class MinimalStructureReport(BaseModel):
    version: str
    flags: Dict[str, Optional[str]]
    minimal_fdh: FDHGraphFile
    graph: DiGraphFile
    timing_seconds: Optional[float] = None


class WitnessReport(BaseModel):
    player: int
    source: List[int]
    target: List[int]
    cycle: List[List[int]]
    circulation: ScalarLiteral


class PotentialReport(BaseModel):
    version: str
    flags: Dict[str, Optional[str]]
    is_potential: bool
    potential: Optional[List[ScalarLiteral]] = None
    witness: Optional[WitnessReport] = None
    structure_verified: Optional[bool] = None
    minimal_fdh: FDHGraphFile
    potential_hgraph: Optional[HGraphFile] = None
    timing_seconds: Optional[float] = None


class DecompositionReport(BaseModel):
    version: str
    flags: Dict[str, Optional[str]]
    checks: Dict[str, bool]
    potential: List[ScalarLiteral]
    minimal_fdh: FDHGraphFile
    underlying_undirected: FDHGraphFile
    potential_minimal_fdh: FDHGraphFile
    harmonic_minimal_fdh: FDHGraphFile
    timing_seconds: Optional[float] = None


class AnalysisReport(BaseModel):
    version: str
    flags: Dict[str, Optional[str]]
    digest: str = Field(description="sha256 of the input file")
    actions: List[int]
    minimal_fdh: FDHGraphFile
    minimal_graph: DiGraphFile
    underlying_undirected: FDHGraphFile
    is_potential: bool
    potential: Optional[List[ScalarLiteral]] = None
    potential_structure_verified: Optional[bool] = None
    potential_minimal_fdh: FDHGraphFile
    harmonic_minimal_fdh: FDHGraphFile
    harmonic_is_zero: bool
    component_separability: bool
    timing_seconds: Optional[float] = None

    def to_text(self) -> str:
        def links(f: FDHGraphFile) -> str:
            return ", ".join(f"({d.tail},{{{','.join(map(str, d.head))}}})" for d in f.hyperlinks) or "none"

        lines = [
            f"gamesep {self.version}",
            f"input sha256: {self.digest}",
            f"actions: {self.actions}",
            f"minimal FDH-graph: {links(self.minimal_fdh)}",
            f"minimal graph links: {', '.join(f'{i}->{j}' for i, j in self.minimal_graph.links) or 'none'}",
            f"underlying undirected: {links(self.underlying_undirected)}",
            f"potential game: {'yes' if self.is_potential else 'no'}",
        ]
        if self.potential_structure_verified is not None:
            lines.append(f"potential structure verified: {self.potential_structure_verified}")
        lines.extend(
            [
                f"potential component FDH-graph: {links(self.potential_minimal_fdh)}",
                f"harmonic component FDH-graph: {links(self.harmonic_minimal_fdh)}",
                f"harmonic component is zero: {self.harmonic_is_zero}",
                f"components separable on underlying undirected graph: {self.component_separability}",
            ]
        )
        if self.timing_seconds is not None:
            lines.append(f"timing: {self.timing_seconds:.3f}s")
        return "\n".join(lines) + "\n"


Variant = Literal[
    "coordination",
    "best-shot",
    "best-shot-ring",
    "two-level",
    "strong-coordination",
    "matching-pennies",
    "planted",
    "planted-potential",
]

RING_VARIANTS = {"best-shot-ring"}
COORDINATION_VARIANTS = {"coordination", "two-level"}


class GeneratorParams(BaseModel):
    variant: Variant
    n: int = Field(default=6, ge=1, le=16)
    c: str = Field(default="1/2", description="Contribution cost of the best-shot games")
    bonus: str = Field(default="1", description="Agreement bonus L of the two-level game")
    zeta: List[str] = Field(default_factory=lambda: ["1", "-1", "-1", "1"], min_length=4, max_length=4)
    seed: int = 0

    @field_validator("c", "bonus")
    @classmethod
    def _literal(cls, value: str) -> str:
        _check_rational_literal(value)
        return value

    @field_validator("zeta")
    @classmethod
    def _zeta_literals(cls, value: List[str]) -> List[str]:
        for v in value:
            _check_rational_literal(v)
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> "GeneratorParams":
        if self.variant in RING_VARIANTS and self.n < 3:
            raise ValueError("a ring needs at least 3 nodes")
        cost = Fraction(self.c)
        if not 0 <= cost <= 1:
            raise ValueError(f"cost must lie in [0, 1], got {self.c}")
        if self.variant == "two-level" and Fraction(self.bonus) <= 0:
            raise ValueError(f"bonus must be positive, got {self.bonus}")
        if self.variant in COORDINATION_VARIANTS:
            z00, z01, z10, z11 = (Fraction(v) for v in self.zeta)
            if z01 != z10 or z00 < z01 or z11 < z01:
                raise ValueError("pairwise table must be symmetric with coordination on the diagonal")
        return self

    def zeta_table(self) -> List[List[Fraction]]:
        values = [Fraction(v) for v in self.zeta]
        return [values[:2], values[2:]]
