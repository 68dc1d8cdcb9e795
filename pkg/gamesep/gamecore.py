"""Finite strategic-form games stored as dense utility tables.

Profiles are indexed lexicographically with player 0 most significant, which
is exactly numpy's C order for an array of shape ``action_counts``; every
per-player table is such an array.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .config import Settings, get_settings
from .errors import InvalidStructureError, SizeGuardError
from .scalars import Scalar, ScalarMode, is_zero, max_abs, mode_of, tables_equal, to_table, zeros

logger = logging.getLogger(__name__)

Profile = Tuple[int, ...]


def _frozen(table: np.ndarray) -> np.ndarray:
    table = np.array(table, dtype=table.dtype, copy=True)
    table.flags.writeable = False
    return table


@dataclass(frozen=True)
class StrategySpace:
    action_counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(k) for k in self.action_counts)
        if not counts:
            raise InvalidStructureError("a game needs at least one player")
        if any(k < 1 for k in counts):
            raise InvalidStructureError(f"action counts must be >= 1, got {counts}")
        object.__setattr__(self, "action_counts", counts)

    @property
    def players(self) -> int:
        return len(self.action_counts)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.action_counts

    @property
    def profile_count(self) -> int:
        return int(np.prod(self.action_counts, dtype=np.int64))

    def check_size(self, settings: Settings | None = None) -> None:
        settings = settings or get_settings()
        if self.players > settings.max_players:
            raise SizeGuardError(f"{self.players} players exceeds the limit of {settings.max_players}")
        if self.profile_count > settings.max_profiles:
            raise SizeGuardError(
                f"{self.profile_count} profiles exceeds the limit of {settings.max_profiles}"
            )

    def profile_index(self, x: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(x), self.shape))

    def profile(self, index: int) -> Profile:
        return tuple(int(v) for v in np.unravel_index(index, self.shape))

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*(range(k) for k in self.action_counts))

    def zero_profile(self) -> Profile:
        return (0,) * self.players

    def deviations(self, x: Sequence[int], i: int) -> Iterator[Profile]:
        """Profiles i-comparable to ``x`` other than ``x`` itself."""

        for a in range(self.action_counts[i]):
            if a != x[i]:
                y = list(x)
                y[i] = a
                yield tuple(y)

    def restrict(self, players: Sequence[int]) -> "StrategySpace":
        return StrategySpace(tuple(self.action_counts[p] for p in players))


@dataclass(frozen=True, eq=False)
class PotentialFunction:
    space: StrategySpace
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != self.space.shape:
            raise InvalidStructureError(f"potential table shape {self.values.shape} != {self.space.shape}")
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def mode(self) -> ScalarMode:
        return mode_of(self.values)

    def pinned(self) -> "PotentialFunction":
        """Same potential shifted so that the all-zeros profile has value 0."""

        return PotentialFunction(self.space, self.values - self.values[self.space.zero_profile()])


@dataclass(frozen=True, eq=False)
class Game:
    space: StrategySpace
    utilities: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.utilities) != self.space.players:
            raise InvalidStructureError(
                f"{len(self.utilities)} utility tables for {self.space.players} players"
            )
        modes = {mode_of(table) for table in self.utilities}
        if len(modes) > 1:
            raise InvalidStructureError("a game must use a single scalar mode")
        for table in self.utilities:
            if table.shape != self.space.shape:
                raise InvalidStructureError(f"utility table shape {table.shape} != {self.space.shape}")
        object.__setattr__(self, "utilities", tuple(_frozen(t) for t in self.utilities))

    @classmethod
    def zeros(cls, space: StrategySpace, mode: ScalarMode = ScalarMode.RATIONAL) -> "Game":
        return cls(space, tuple(zeros(space.shape, mode) for _ in range(space.players)))

    @classmethod
    def from_function(
        cls,
        space: StrategySpace,
        utility: Callable[[int, Profile], object],
        mode: ScalarMode = ScalarMode.RATIONAL,
    ) -> "Game":
        """Tabulate ``utility(i, x)`` over every player and profile."""

        profiles = list(space.profiles())
        tables = tuple(
            to_table((_coerce(utility(i, x), mode) for x in profiles), space.shape, mode)
            for i in range(space.players)
        )
        return cls(space, tables)

    @property
    def mode(self) -> ScalarMode:
        return mode_of(self.utilities[0])

    def utility(self, i: int, x: Sequence[int]) -> Scalar:
        return self.utilities[i][tuple(x)]

    def map(self, fn: Callable[[int, np.ndarray], np.ndarray]) -> "Game":
        return Game(self.space, tuple(fn(i, t) for i, t in enumerate(self.utilities)))

    def __add__(self, other: "Game") -> "Game":
        self._require_compatible(other)
        return Game(self.space, tuple(a + b for a, b in zip(self.utilities, other.utilities)))

    def __sub__(self, other: "Game") -> "Game":
        self._require_compatible(other)
        return Game(self.space, tuple(a - b for a, b in zip(self.utilities, other.utilities)))

    def __neg__(self) -> "Game":
        return Game(self.space, tuple(-t for t in self.utilities))

    def scale(self, factor: Scalar) -> "Game":
        if self.mode is ScalarMode.RATIONAL:
            factor = Fraction(factor)
        else:
            factor = float(factor)
        return Game(self.space, tuple(t * factor for t in self.utilities))

    def equals(self, other: "Game", tolerance: float = 0.0) -> bool:
        if self.space != other.space:
            return False
        return all(tables_equal(a, b, tolerance) for a, b in zip(self.utilities, other.utilities))

    def max_abs(self) -> Scalar:
        return max(max_abs(t) for t in self.utilities)

    def restrict_to(self, players: Sequence[int], base: Optional[Profile] = None) -> "Game":
        """Restriction to ``players``; the others are frozen at ``base`` (all zeros by default)."""

        base = tuple(base) if base is not None else self.space.zero_profile()
        index = tuple(slice(None) if p in players else base[p] for p in range(self.space.players))
        order = sorted(players)
        return Game(self.space.restrict(order), tuple(self.utilities[p][index] for p in order))

    def _require_compatible(self, other: "Game") -> None:
        if self.space != other.space:
            raise InvalidStructureError("games live on different strategy spaces")
        if self.mode is not other.mode:
            raise InvalidStructureError("games use different scalar modes")


def _coerce(value: object, mode: ScalarMode) -> Scalar:
    if mode is ScalarMode.RATIONAL:
        if isinstance(value, float):
            raise InvalidStructureError(f"float value {value!r} in a rational game")
        return Fraction(value)
    return float(value)


def extend_table(table: np.ndarray, axes: Sequence[int], space: StrategySpace) -> np.ndarray:
    """Broadcast a table over the sorted player subset ``axes`` to the full space."""

    order = sorted(axes)
    shape = tuple(space.action_counts[p] if p in order else 1 for p in range(space.players))
    return np.broadcast_to(table.reshape(shape), space.shape)


def extend_game(game: Game, players: Sequence[int], space: StrategySpace) -> Game:
    """Zero-extend a game on the sorted ``players`` to ``space``."""

    order = sorted(players)
    tables = []
    for p in range(space.players):
        if p in order:
            tables.append(np.array(extend_table(game.utilities[order.index(p)], order, space)))
        else:
            tables.append(zeros(space.shape, game.mode))
    return Game(space, tuple(tables))


def i_comparable(space: StrategySpace, x: Sequence[int], y: Sequence[int], i: int) -> bool:
    return all(a == b for p, (a, b) in enumerate(zip(x, y)) if p != i)


def _fiber_mean(table: np.ndarray, axis: int) -> np.ndarray:
    return table.sum(axis=axis, keepdims=True) / table.shape[axis]


def normalize(u: Game) -> Game:
    """Subtract from each u_i its mean over player i's own action."""

    return u.map(lambda i, t: t - _fiber_mean(t, i))


def _tolerance(u: Game, settings: Settings | None) -> float:
    if u.mode is ScalarMode.RATIONAL:
        return 0.0
    return (settings or get_settings()).tolerance


def _scale(u: Game, tol: float, scale: Scalar | None) -> Scalar:
    if not tol:
        return 0
    return u.max_abs() if scale is None else scale


def is_normalized(u: Game, settings: Settings | None = None, scale: Scalar | None = None) -> bool:
    """Zero fiber sums; float tolerance is relative to ``scale`` (default: max |u|)."""

    tol = _tolerance(u, settings)
    bound = _scale(u, tol, scale)
    return all(is_zero(t.sum(axis=i), tol, bound) for i, t in enumerate(u.utilities))


def is_nonstrategic(u: Game, settings: Settings | None = None, scale: Scalar | None = None) -> bool:
    tol = _tolerance(u, settings)
    bound = _scale(u, tol, scale)
    return all(is_zero(t, tol, bound) for t in normalize(u).utilities)


def strategically_equivalent(u1: Game, u2: Game, settings: Settings | None = None) -> bool:
    return is_nonstrategic(u1 - u2, settings, max(u1.max_abs(), u2.max_abs()))


def harmonic_residual(u: Game) -> np.ndarray:
    """Per-profile value of Σ_i Σ_{y ~_i x} [u_i(x) - u_i(y)].

    For player i the inner sum equals |A_i| · (u_i(x) - fiber mean), so the
    residual is Σ_i |A_i| · ū_i(x).
    """

    residual = zeros(u.space.shape, u.mode)
    for i, table in enumerate(normalize(u).utilities):
        residual = residual + table * u.space.action_counts[i]
    return residual


def is_harmonic(u: Game, settings: Settings | None = None, scale: Scalar | None = None) -> bool:
    tol = _tolerance(u, settings)
    return is_zero(harmonic_residual(u), tol, _scale(u, tol, scale))


def game_from_potential(phi: PotentialFunction) -> Game:
    return Game(phi.space, tuple(phi.values for _ in range(phi.space.players)))
