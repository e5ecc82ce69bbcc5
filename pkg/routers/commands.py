from typing import Callable, Optional

from pydantic import ValidationError

from construct import (
    classify_regime,
    construct_defense_optimal,
    is_defender_pure_graph,
    pure_vertex_balanced_ne,
)
from exceptions import AdGameError, GraphFormatError, SearchBoundExceeded
from game import verify_ne, verify_pure_ne
from matching import canonicalize_fpm, edge_cover_number, fractional_perfect_matching, minimum_edge_cover
from partition import find_delta_partitionable, has_perfect_matching
from repository.documents import (
    format_fractional_matching,
    format_profile,
    format_rational,
    parse_fractional_matching,
    parse_graph,
    parse_profile,
    read_document,
)
from schemas.commands import Command, CommandResult
from schemas.game import MixedProfile, NeReport, PureProfile
from schemas.graph import Graph
from logging_config import get_logger

logger = get_logger(__name__)

Handler = Callable[[Command, Graph], CommandResult]


class CommandRouter:
    """Registry of subcommand handlers, filled by decorator."""

    def __init__(self):
        self.handlers: dict[str, Handler] = {}
        self.help: dict[str, str] = {}

    def command(self, name: str, help: str = ""):
        def register(handler: Handler) -> Handler:
            self.handlers[name] = handler
            self.help[name] = help
            return handler

        return register

    def dispatch(self, cmd: Command, g: Graph) -> CommandResult:
        return self.handlers[cmd.subcommand](cmd, g)


commands_router = CommandRouter()


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _true_false(flag: bool) -> str:
    return "true" if flag else "false"


@commands_router.command("analyze", help="graph summary and regime table for delta = 1..|V|")
def analyze(cmd: Command, g: Graph) -> CommandResult:
    lines = [
        f"vertices {g.vertex_count}",
        f"edges {g.edge_count}",
        f"edge_cover_number {edge_cover_number(g)}",
        f"perfect_matching {_yes_no(has_perfect_matching(g))}",
        "delta regime defense_optimal defender_pure",
    ]
    for delta in range(1, g.vertex_count + 1):
        regime = classify_regime(g, delta)
        kind = "few" if regime.overlaps_few else regime.kind
        if regime.kind == "too-many":
            optimal = "yes"
        elif regime.kind == "many":
            optimal = "no"
        else:
            try:
                optimal = _yes_no(find_delta_partitionable(g, delta, bound=cmd.bound) is not None)
            except SearchBoundExceeded:
                optimal = "?"
        lines.append(f"{delta} {kind} {optimal} {_yes_no(is_defender_pure_graph(g, delta))}")
    return CommandResult(exit_status=0, report="\n".join(lines) + "\n")


@commands_router.command("min-edge-cover", help="a minimum edge cover")
def min_edge_cover(cmd: Command, g: Graph) -> CommandResult:
    cover = sorted(minimum_edge_cover(g))
    report = f"size {len(cover)}\n" + "".join(f"{u} {v}\n" for u, v in cover)
    return CommandResult(exit_status=0, report=report)


@commands_router.command("fpm", help="a fractional perfect matching, or NONE")
def fpm(cmd: Command, g: Graph) -> CommandResult:
    f = fractional_perfect_matching(g)
    if f is None:
        return CommandResult(exit_status=1, report="NONE\n")
    return CommandResult(exit_status=0, report=format_fractional_matching(f))


@commands_router.command("reduce", help="reduce a fractional perfect matching to single edges and odd cycles")
def reduce_fpm(cmd: Command, g: Graph) -> CommandResult:
    if cmd.matching_path is not None:
        f = parse_fractional_matching(g, read_document(cmd.matching_path))
    else:
        f = fractional_perfect_matching(g)
        if f is None:
            return CommandResult(exit_status=1, report="NONE\n")
    return CommandResult(exit_status=0, report=format_fractional_matching(canonicalize_fpm(f)))


@commands_router.command("partition", help="a delta-partitionable fractional perfect matching, or NONE")
def partition_graph(cmd: Command, g: Graph) -> CommandResult:
    found = find_delta_partitionable(g, cmd.delta, bound=cmd.bound)
    if found is None:
        return CommandResult(exit_status=1, report="NONE\n")
    f, p = found
    lines = []
    for index, partite in enumerate(p.partites, start=1):
        entries = " ".join(f"{u} {v} {format_rational(f.weight((u, v)))}" for u, v in partite)
        lines.append(f"partite {index} {entries}")
    return CommandResult(exit_status=0, report="\n".join(lines) + "\n")


@commands_router.command("construct-ne", help="a Defense-Optimal equilibrium profile, or NONE")
def construct_ne(cmd: Command, g: Graph) -> CommandResult:
    if cmd.pure:
        return CommandResult(exit_status=0, report=format_profile(pure_vertex_balanced_ne(g, cmd.alpha, cmd.delta)))
    profile = construct_defense_optimal(g, cmd.alpha, cmd.delta, bound=cmd.bound)
    if profile is None:
        regime = classify_regime(g, cmd.delta)
        reason = "many-defenders regime" if regime.kind == "many" else f"no {cmd.delta}-partitionable fractional perfect matching"
        return CommandResult(exit_status=1, report=f"NONE {reason}\n")
    return CommandResult(exit_status=0, report=format_profile(profile))


def format_report(report: NeReport) -> str:
    ratio = "none" if report.defense_ratio is None else format_rational(report.defense_ratio)
    lines = [
        f"is_ne {_true_false(report.is_ne)}",
        f"min_hit {format_rational(report.min_hit)}",
        f"defense_ratio {ratio}",
        f"defense_optimal {_true_false(report.is_defense_optimal)}",
        f"total_defender_utility {format_rational(report.total_defender_utility)}",
        f"defender_supports_edge_cover {_true_false(report.defender_supports_edge_cover)}",
        f"attacker_supports_vertex_cover {_true_false(report.attacker_supports_vertex_cover)}",
        " ".join(["maxhit_vertices"] + [str(v) for v in report.maxhit_vertices]),
        " ".join(["maxhitters"] + [str(d) for d in report.maxhitters]),
        " ".join(["classes"] + list(report.profile_classes)),
    ]
    for violation in report.violations:
        deviation = violation.deviation if isinstance(violation.deviation, int) else " ".join(map(str, violation.deviation))
        lines.append(f"violation {violation.player} {violation.index} deviation {deviation} gain {format_rational(violation.gain)}")
    return "\n".join(lines) + "\n"


def _as_pure(p: MixedProfile) -> Optional[PureProfile]:
    if any(len(s) != 1 for s in p.attacker_strategies + p.defender_strategies):
        return None
    return PureProfile(
        graph=p.graph,
        attacker_choices=tuple(next(iter(s)) for s in p.attacker_strategies),
        defender_choices=tuple(next(iter(s)) for s in p.defender_strategies),
    )


@commands_router.command("verify-ne", help="verify a profile against the equilibrium characterization")
def verify(cmd: Command, g: Graph) -> CommandResult:
    p = parse_profile(g, read_document(cmd.profile_path))
    pure = _as_pure(p)
    report = verify_pure_ne(pure) if pure is not None else verify_ne(p)
    logger.info(f"Profile {cmd.profile_path}: is_ne={report.is_ne}, {len(report.violations)} violation(s)")
    return CommandResult(exit_status=0 if report.is_ne else 1, report=format_report(report))


@commands_router.command("classify", help="the defender regime of delta")
def classify(cmd: Command, g: Graph) -> CommandResult:
    regime = classify_regime(g, cmd.delta)
    report = f"regime {regime.kind}\ndelta {regime.delta}\nvertices {regime.vertex_count}\nedge_cover_number {regime.beta_prime}\n"
    return CommandResult(exit_status=0, report=report)


def run(cmd: Command) -> CommandResult:
    """Load the graph, dispatch, and map failures onto exit statuses."""
    logger.info(f"Running {cmd.subcommand} on {cmd.graph_path}")
    try:
        g = parse_graph(read_document(cmd.graph_path, GraphFormatError))
        result = commands_router.dispatch(cmd, g)
    except AdGameError as e:
        logger.info(f"{cmd.subcommand} failed: {e.detail}")
        return CommandResult(exit_status=e.exit_status, diagnostic=f"error: {e.detail}")
    except FileNotFoundError as e:
        logger.info(f"{cmd.subcommand} failed: missing file {e.filename}")
        return CommandResult(exit_status=2, diagnostic=f"error: file not found: {e.filename}")
    except OSError as e:
        logger.info(f"{cmd.subcommand} failed: cannot read {e.filename}: {e.strerror}")
        return CommandResult(exit_status=2, diagnostic=f"error: cannot read {e.filename}: {e.strerror}")
    except ValidationError as e:
        logger.info(f"{cmd.subcommand} failed validation: {e}")
        return CommandResult(exit_status=2, diagnostic=f"error: {e.errors()[0]['msg']}")
    logger.info(f"{cmd.subcommand} finished with exit status {result.exit_status}")
    return result
