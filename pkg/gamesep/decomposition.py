"""Potential / harmonic / non-strategic decomposition of finite games.

Every game splits uniquely (up to the non-strategic part) as
``u = u_pot + u_har + n`` with ``u_pot`` and ``u_har`` normalized. Writing
``u_pot = normalize(game_from_potential(φ))``, the harmonic condition on
``normalize(u) - u_pot`` reduces to a graph-Laplacian system on the
unilateral-deviation graph:

    L φ = harmonic_residual(u)

with L = Σ_i |A_i| (I - M_i), M_i the fiber mean along player i. The
fiber means commute, so L is diagonal on the mean/deviation splits of the
table and is inverted in closed form; its kernel (the constants) is fixed
by pinning ``φ(0) = 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import Settings, get_settings
from .errors import InvariantViolationError, LinearSolveError, SizeGuardError
from .gamecore import (
    Game,
    PotentialFunction,
    StrategySpace,
    extend_game,
    extend_table,
    game_from_potential,
    harmonic_residual,
    is_harmonic,
    is_nonstrategic,
    is_normalized,
    normalize,
)
from .hypergraph import FDHGraph, directed_key, underlying_undirected
from .potential import detect_potential
from .scalars import ScalarMode, is_zero, mode_of, zeros
from .separability import extract_f_terms, is_f_separable, minimal_fdh

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GameDecomposition:
    u_pot: Game
    u_har: Game
    nonstrategic: Game
    potential: PotentialFunction

    def reconstruct(self) -> Game:
        return self.u_pot + self.u_har + self.nonstrategic

    def agrees_with(self, other: "GameDecomposition", tolerance: float = 0.0) -> bool:
        """Same potential and harmonic components once both are normalized."""

        return normalize(self.u_pot).equals(normalize(other.u_pot), tolerance) and normalize(
            self.u_har
        ).equals(normalize(other.u_har), tolerance)


def _mean_along(t: np.ndarray, axis: int, exact: bool) -> np.ndarray:
    count = t.shape[axis]
    return t.sum(axis=axis, keepdims=True) * (Fraction(1, count) if exact else 1.0 / count)


def _apply_laplacian(phi: np.ndarray, exact: bool) -> np.ndarray:
    """L φ = Σ_i |A_i| · (φ - fiber mean of φ along axis i)."""

    total = phi * 0
    for axis, count in enumerate(phi.shape):
        total = total + (phi - _mean_along(phi, axis, exact)) * count
    return total


def _invert_laplacian(t: np.ndarray, axis: int, weight: int, exact: bool) -> np.ndarray:
    """Apply the pseudo-inverse of L to ``t`` from ``axis`` onwards.

    Splitting t along an axis into its fiber mean and the deviation from it
    separates the eigenspaces of L: a deviation along axis i adds |A_i| to
    the eigenvalue. Means are kept reduced (length-1 axis) and broadcast on
    the way back, so the work stays near Π(|A_i| + 1).
    """

    if axis == t.ndim:
        if weight == 0:
            return t * 0
        return t * (Fraction(1, weight) if exact else 1.0 / weight)
    mean = _mean_along(t, axis, exact)
    deviation = t - mean
    return _invert_laplacian(mean, axis + 1, weight, exact) + _invert_laplacian(
        deviation, axis + 1, weight + t.shape[axis], exact
    )


def _solve_potential(u: Game, settings: Settings) -> PotentialFunction:
    space = u.space
    if space.profile_count > settings.max_solve_profiles:
        raise SizeGuardError(
            f"decomposition solve limited to {settings.max_solve_profiles} profiles, got {space.profile_count}"
        )
    exact = u.mode is ScalarMode.RATIONAL
    residual = harmonic_residual(u)
    logger.debug("Inverting deviation Laplacian on %d profiles (%s)", space.profile_count, u.mode.value)
    values = _invert_laplacian(residual, 0, 0, exact)
    mismatch = _apply_laplacian(values, exact) - residual
    if not is_zero(mismatch, settings.tolerance if not exact else 0.0, u.max_abs()):
        raise LinearSolveError("deviation Laplacian residual above tolerance")
    return PotentialFunction(space, values).pinned()


def _reconstruction_tolerance(u: Game, settings: Settings) -> float:
    if u.mode is ScalarMode.RATIONAL:
        return 0.0
    return settings.tolerance * (1.0 + float(u.max_abs()))


def _check_invariants(u: Game, result: GameDecomposition, settings: Settings) -> None:
    # float checks are relative to the magnitude of u, not of each component
    scale = u.max_abs()
    failures: List[str] = []
    if not result.reconstruct().equals(u, _reconstruction_tolerance(u, settings)):
        failures.append("components do not add up to the game")
    if not is_normalized(result.u_pot, settings, scale):
        failures.append("potential component is not normalized")
    if not is_normalized(result.u_har, settings, scale):
        failures.append("harmonic component is not normalized")
    if not detect_potential(result.u_pot, settings).is_potential:
        failures.append("potential component is not a potential game")
    if not is_harmonic(result.u_har, settings, scale):
        failures.append("harmonic component is not harmonic")
    if not is_nonstrategic(result.nonstrategic, settings, scale):
        failures.append("remainder is not non-strategic")
    if failures:
        raise InvariantViolationError("; ".join(failures))


def decompose(u: Game, settings: Optional[Settings] = None) -> GameDecomposition:
    settings = settings or get_settings()
    u.space.check_size(settings)
    normalized = normalize(u)
    phi = _solve_potential(normalized, settings)
    u_pot = normalize(game_from_potential(phi))
    result = GameDecomposition(u_pot, normalized - u_pot, u - normalized, phi)
    _check_invariants(u, result, settings)
    return result


def _auxiliary_game(space: StrategySpace, players: Sequence[int], tail: int, table: np.ndarray) -> Game:
    """Game on ``players`` where only ``tail`` has a nonzero utility."""

    local = space.restrict(players)
    tables = []
    for p in players:
        if p == tail:
            tables.append(np.asarray(table).reshape(local.shape))
        else:
            tables.append(zeros(local.shape, mode_of(table)))
    return Game(local, tuple(tables))


def decompose_local(
    u: Game,
    f: FDHGraph,
    reference: Optional[Sequence[int]] = None,
    settings: Optional[Settings] = None,
) -> GameDecomposition:
    """Decompose hyperlink by hyperlink.

    Each hyperlink term of u becomes an auxiliary game on the players it
    touches, which is decomposed on its own and zero-extended. Own-action
    terms are handled as one-player auxiliary games.
    """

    settings = settings or get_settings()
    space = u.space
    space.check_size(settings)
    separated = extract_f_terms(u, f, reference, settings=settings)
    pieces: List[Tuple[Tuple[int, ...], int, np.ndarray]] = [
        (tuple(sorted(link.head | {link.tail})), link.tail, table)
        for link, table in sorted(separated.terms.items(), key=lambda item: directed_key(item[0]))
    ]
    pieces.extend(((i,), i, table) for i, table in sorted(separated.own.items()))

    u_pot = Game.zeros(space, u.mode)
    u_har = Game.zeros(space, u.mode)
    phi = zeros(space.shape, u.mode)
    for players, tail, table in pieces:
        local = decompose(_auxiliary_game(space, players, tail, table), settings)
        u_pot = u_pot + extend_game(local.u_pot, players, space)
        u_har = u_har + extend_game(local.u_har, players, space)
        phi = phi + extend_table(local.potential.values, players, space)
    logger.debug("Combined %d local decompositions", len(pieces))

    normalized = normalize(u)
    result = GameDecomposition(
        normalize(u_pot), normalize(u_har), u - normalized, PotentialFunction(space, phi).pinned()
    )
    _check_invariants(u, result, settings)
    return result


def verify_component_separability(u: Game, settings: Optional[Settings] = None) -> bool:
    """Both components are separable on the underlying undirected minimal FDH-graph of u."""

    settings = settings or get_settings()
    undirected = underlying_undirected(minimal_fdh(u, settings=settings))
    result = decompose(u, settings)
    return is_f_separable(result.u_pot, undirected, settings=settings) and is_f_separable(
        result.u_har, undirected, settings=settings
    )
