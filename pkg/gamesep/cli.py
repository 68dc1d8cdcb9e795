from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, get_args

from pydantic import ValidationError

from . import __version__
from .config import Settings, get_settings
from .decomposition import decompose
from .errors import FormatError, GameSepError
from .game_store import (
    JsonStore,
    digraph_to_file,
    factorization_to_file,
    fdh_to_file,
    game_to_file,
    hgraph_to_file,
    load_digraph,
    load_distribution,
    load_fdhgraph,
    load_game,
    load_hgraph,
    table_literals,
    terms_to_file,
    write_model,
)
from .gamecore import Game, is_harmonic, is_nonstrategic, is_normalized
from .gamegen import generate
from .hypergraph import f_preceq, graph_from_fdh, underlying_undirected
from .models import (
    AnalysisReport,
    DecompositionReport,
    DecompositionTermFile,
    GeneratorParams,
    MinimalStructureReport,
    PotentialReport,
    Variant,
    WitnessReport,
)
from .mrf import hc_factorize
from .potential import detect_potential, verify_potential_structure
from .scalars import ScalarMode, convert, format_scalar
from .separability import extract_f_terms, minimal_fdh, minimal_hgraph

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"

logger = logging.getLogger("gamesep")


def _reference_profile(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise FormatError(f"reference profile must be comma-separated integers, got {text!r}") from exc


def _settings_for(args: argparse.Namespace) -> Settings:
    update: Dict[str, object] = {}
    if args.scalar_mode:
        update["scalar_mode"] = args.scalar_mode
    if args.tolerance is not None:
        update["tolerance"] = args.tolerance
    return get_settings().model_copy(update=update)


def _flags(args: argparse.Namespace) -> Dict[str, Optional[str]]:
    return {
        key: None if value is None else str(value)
        for key, value in sorted(vars(args).items())
        if key != "handler"
    }


def _mode(settings: Settings) -> ScalarMode:
    return ScalarMode(settings.scalar_mode)


def _equals_zero(game: Game, settings: Settings) -> bool:
    tolerance = 0.0 if game.mode is ScalarMode.RATIONAL else settings.tolerance * (1.0 + float(game.max_abs()))
    return game.equals(Game.zeros(game.space, game.mode), tolerance)


def _load_input(args: argparse.Namespace, settings: Settings) -> Game:
    game = load_game(args.game, _mode(settings))
    game.space.check_size(settings)
    return game


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> AnalysisReport:
    started = time.perf_counter()
    u = _load_input(args, settings)
    reference = _reference_profile(args.reference_profile)
    f = minimal_fdh(u, reference, settings=settings)
    undirected = underlying_undirected(f)
    certificate = detect_potential(u, settings)
    structure = verify_potential_structure(u, settings) if certificate.is_potential else None
    parts = decompose(u, settings)
    pot_f = minimal_fdh(parts.u_pot, reference, settings=settings)
    har_f = minimal_fdh(parts.u_har, reference, settings=settings)
    elapsed = time.perf_counter() - started
    logger.info("Analyzed %s in %.3fs", args.game, elapsed)
    return AnalysisReport(
        version=__version__,
        flags=_flags(args),
        digest=JsonStore(args.game).digest(),
        actions=list(u.space.action_counts),
        minimal_fdh=fdh_to_file(f),
        minimal_graph=digraph_to_file(graph_from_fdh(f)),
        underlying_undirected=fdh_to_file(undirected),
        is_potential=certificate.is_potential,
        potential=table_literals(certificate.potential.values) if certificate.is_potential else None,
        potential_structure_verified=structure,
        potential_minimal_fdh=fdh_to_file(pot_f),
        harmonic_minimal_fdh=fdh_to_file(har_f),
        harmonic_is_zero=_equals_zero(parts.u_har, settings),
        component_separability=f_preceq(pot_f, undirected) and f_preceq(har_f, undirected),
        timing_seconds=elapsed if args.timing else None,
    )


def cmd_minimal_fdh(args: argparse.Namespace, settings: Settings) -> MinimalStructureReport:
    started = time.perf_counter()
    u = _load_input(args, settings)
    reference = _reference_profile(args.reference_profile)
    f = minimal_fdh(u, reference, settings=settings)
    if args.terms:
        JsonStore(args.terms).save(terms_to_file(extract_f_terms(u, f, reference, settings=settings), f))
    elapsed = time.perf_counter() - started
    logger.info("Minimal FDH-graph has %d hyperlinks (%.3fs)", len(f.hyperlinks), elapsed)
    return MinimalStructureReport(
        version=__version__,
        flags=_flags(args),
        minimal_fdh=fdh_to_file(f),
        graph=digraph_to_file(graph_from_fdh(f)),
        timing_seconds=elapsed if args.timing else None,
    )


def cmd_potential(args: argparse.Namespace, settings: Settings) -> PotentialReport:
    started = time.perf_counter()
    u = _load_input(args, settings)
    reference = _reference_profile(args.reference_profile)
    certificate = detect_potential(u, settings)
    report = PotentialReport(
        version=__version__,
        flags=_flags(args),
        is_potential=certificate.is_potential,
        minimal_fdh=fdh_to_file(minimal_fdh(u, reference, settings=settings)),
    )
    if certificate.is_potential:
        phi = certificate.potential.values
        report.potential = table_literals(phi)
        report.structure_verified = verify_potential_structure(u, settings)
        report.potential_hgraph = hgraph_to_file(minimal_hgraph(phi, reference, settings=settings))
    else:
        witness = certificate.witness
        report.witness = WitnessReport(
            player=witness.player,
            source=list(witness.source),
            target=list(witness.target),
            cycle=[list(x) for x in witness.cycle],
            circulation=format_scalar(witness.circulation, u.mode),
        )
    elapsed = time.perf_counter() - started
    logger.info("Potential check finished: %s (%.3fs)", certificate.is_potential, elapsed)
    if args.timing:
        report.timing_seconds = elapsed
    return report


def cmd_decompose(args: argparse.Namespace, settings: Settings) -> DecompositionReport:
    started = time.perf_counter()
    u = _load_input(args, settings)
    reference = _reference_profile(args.reference_profile)
    parts = decompose(u, settings)
    f = minimal_fdh(u, reference, settings=settings)
    undirected = underlying_undirected(f)
    pot_f = minimal_fdh(parts.u_pot, reference, settings=settings)
    har_f = minimal_fdh(parts.u_har, reference, settings=settings)

    out_dir = Path(args.out_dir)
    for name, component, game in (
        ("potential.json", "potential", parts.u_pot),
        ("harmonic.json", "harmonic", parts.u_har),
        ("nonstrategic.json", "nonstrategic", parts.nonstrategic),
    ):
        document = DecompositionTermFile(component=component, **game_to_file(game).model_dump())
        JsonStore(out_dir / name).save(document)

    scale = u.max_abs()
    tolerance = 0.0 if u.mode is ScalarMode.RATIONAL else settings.tolerance * (1.0 + float(u.max_abs()))
    checks = {
        "reconstruction": parts.reconstruct().equals(u, tolerance),
        "potential_normalized": is_normalized(parts.u_pot, settings, scale),
        "harmonic_normalized": is_normalized(parts.u_har, settings, scale),
        "potential_is_potential": detect_potential(parts.u_pot, settings).is_potential,
        "harmonic_is_harmonic": is_harmonic(parts.u_har, settings, scale),
        "remainder_is_nonstrategic": is_nonstrategic(parts.nonstrategic, settings, scale),
        "component_separability": f_preceq(pot_f, undirected) and f_preceq(har_f, undirected),
    }
    elapsed = time.perf_counter() - started
    logger.info("Decomposed %s into %s (%.3fs)", args.game, out_dir, elapsed)
    report = DecompositionReport(
        version=__version__,
        flags=_flags(args),
        checks=checks,
        potential=table_literals(parts.potential.values),
        minimal_fdh=fdh_to_file(f),
        underlying_undirected=fdh_to_file(undirected),
        potential_minimal_fdh=fdh_to_file(pot_f),
        harmonic_minimal_fdh=fdh_to_file(har_f),
        timing_seconds=elapsed if args.timing else None,
    )
    JsonStore(out_dir / "report.json").save(report)
    return report


def cmd_mrf_factorize(args: argparse.Namespace, settings: Settings):
    started = time.perf_counter()
    p = load_distribution(args.distribution, settings)
    g = load_digraph(args.graph)
    result = hc_factorize(p, g, settings)
    logger.info("Factorized %s in %.3fs", args.distribution, time.perf_counter() - started)
    return factorization_to_file(result, __version__, result.max_relative_error(p))


def cmd_gen(args: argparse.Namespace, settings: Settings):
    try:
        params = GeneratorParams(
            variant=args.variant,
            n=args.n,
            c=args.c,
            bonus=args.L,
            zeta=args.zeta.split(",") if args.zeta else ["1", "-1", "-1", "1"],
            seed=args.seed,
        )
    except ValidationError as exc:
        raise FormatError(f"invalid generator parameters: {exc}") from exc
    graph = fdh = hgraph = None
    if args.graph:
        if params.variant == "planted":
            fdh = load_fdhgraph(args.graph)
        elif params.variant == "planted-potential":
            hgraph = load_hgraph(args.graph)
        else:
            graph = load_digraph(args.graph)
    game = generate(params, graph=graph, fdh=fdh, hgraph=hgraph, settings=settings)
    if _mode(settings) is ScalarMode.FLOAT:
        game = game.map(lambda i, t: convert(t, ScalarMode.FLOAT))
    return game_to_file(game)


def _common(parser: argparse.ArgumentParser, out: bool = True) -> None:
    if out:
        parser.add_argument("--out", type=Path, default=None, help="Write JSON here instead of stdout")
    modes = parser.add_mutually_exclusive_group()
    modes.add_argument("--exact", dest="scalar_mode", action="store_const", const="rational")
    modes.add_argument("--float", dest="scalar_mode", action="store_const", const="float")
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--timing", action="store_true", help="Include wall-clock timing in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamesep", description="Separability structure of finite games")
    parser.add_argument("--version", action="version", version=f"gamesep {__version__}")
    parser.add_argument("--log-level", default=None, help="Override GAMESEP_LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Full structural report for a game")
    analyze.add_argument("game", type=Path)
    analyze.add_argument("--reference-profile", default=None)
    analyze.add_argument("--format", choices=("json", "text"), default="json")
    _common(analyze)
    analyze.set_defaults(handler=cmd_analyze)

    fdh = commands.add_parser("minimal-fdh", help="Minimal FDH-graph and minimal graph")
    fdh.add_argument("game", type=Path)
    fdh.add_argument("--reference-profile", default=None)
    fdh.add_argument("--terms", type=Path, default=None, help="Also write the per-hyperlink terms")
    _common(fdh)
    fdh.set_defaults(handler=cmd_minimal_fdh)

    potential = commands.add_parser("potential", help="Potential detection and structure check")
    potential.add_argument("game", type=Path)
    potential.add_argument("--reference-profile", default=None)
    _common(potential)
    potential.set_defaults(handler=cmd_potential)

    dec = commands.add_parser("decompose", help="Potential / harmonic / non-strategic decomposition")
    dec.add_argument("game", type=Path)
    dec.add_argument("--out-dir", type=Path, required=True)
    dec.add_argument("--reference-profile", default=None)
    _common(dec, out=False)
    dec.set_defaults(handler=cmd_decompose, out=None)

    mrf = commands.add_parser("mrf-factorize", help="Clique factorization of a positive distribution")
    mrf.add_argument("distribution", type=Path)
    mrf.add_argument("graph", type=Path)
    _common(mrf)
    mrf.set_defaults(handler=cmd_mrf_factorize)

    gen = commands.add_parser("gen", help="Generate an example or planted game")
    gen.add_argument("variant", choices=get_args(Variant))
    gen.add_argument("--n", type=int, default=6)
    gen.add_argument("--c", default="1/2")
    gen.add_argument("--L", default="1")
    gen.add_argument("--zeta", default=None, help="Pairwise table as z00,z01,z10,z11")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--graph", type=Path, default=None)
    _common(gen)
    gen.set_defaults(handler=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = args.log_level or get_settings().log_level
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr)

    handler: Callable = args.handler
    try:
        settings = _settings_for(args)
        result = handler(args, settings)
        if isinstance(result, AnalysisReport) and args.format == "text":
            text = result.to_text()
            if args.out is None:
                sys.stdout.write(text)
            else:
                args.out.write_text(text, encoding="utf-8")
        elif not isinstance(result, DecompositionReport):
            write_model(result, args.out)
    except GameSepError as exc:
        logger.exception("%s failed: %s", args.command, exc)
        return exc.exit_code
    return 0
