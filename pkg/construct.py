from collections import Counter
from fractions import Fraction
from typing import Optional

from exceptions import InvariantViolation, PreconditionError
from game import defense_ratio_lower_bound, verify_ne, verify_pure_ne
from matching import edge_cover_number, maximum_matching, minimum_edge_cover
from partition import canonicalize_partitioned, find_delta_partitionable, has_perfect_matching, verify_partitionable
from schemas.construct import Regime
from schemas.game import MixedProfile, PureProfile
from schemas.graph import Edge, Graph
from schemas.matching import FractionalMatching
from schemas.partition import EdgePartition
from logging_config import get_logger

logger = get_logger(__name__)


def classify_regime(g: Graph, delta: int) -> Regime:
    if delta < 1:
        raise PreconditionError(f"delta must be at least 1, got {delta}")
    beta_prime = edge_cover_number(g)
    if delta >= beta_prime:
        kind = "too-many"
    elif 2 * delta <= g.vertex_count:
        kind = "few"
    else:
        kind = "many"
    return Regime(kind=kind, vertex_count=g.vertex_count, delta=delta, beta_prime=beta_prime)


def is_defender_pure_graph(g: Graph, delta: int) -> bool:
    return delta >= edge_cover_number(g)


def _uniform_attackers(g: Graph, alpha: int) -> tuple[dict[int, Fraction], ...]:
    share = Fraction(1, g.vertex_count)
    return tuple({v: share for v in g.vertices} for _ in range(alpha))


def _certified(profile: MixedProfile, what: str) -> MixedProfile:
    report = verify_ne(profile)
    expected = defense_ratio_lower_bound(profile.graph.vertex_count, profile.delta)
    if not report.is_ne or report.defense_ratio != expected:
        raise InvariantViolation(f"{what} produced a profile that is not a Defense-Optimal equilibrium")
    return profile


def construct_from_partitionable(g: Graph, f: FractionalMatching, p: EdgePartition, alpha: int) -> MixedProfile:
    """Attackers uniform over V; defender j plays e in E_j with probability (2 delta / |V|) f(e).

    The certificate is first reduced to single edges and odd cycles, so
    defender supports never carry an even cycle.
    """
    delta = p.delta
    if alpha < 1:
        raise PreconditionError(f"alpha must be at least 1, got {alpha}")
    if f.graph != g or not verify_partitionable(f, p, delta):
        raise PreconditionError(f"({delta} partites) is not a {delta}-partitionable fractional perfect matching of the graph")
    f, p = canonicalize_partitioned(f, p)
    scale = Fraction(2 * delta, g.vertex_count)
    profile = MixedProfile(
        graph=g,
        attacker_strategies=_uniform_attackers(g, alpha),
        defender_strategies=tuple({e: scale * f.weight(e) for e in partite} for partite in p.partites),
    )
    logger.debug(f"Built partition equilibrium: alpha={alpha}, delta={delta}, hit probability {scale}")
    return _certified(profile, "partition construction")


def construct_perfect_matching_ne(g: Graph, alpha: int, delta: int) -> Optional[MixedProfile]:
    """Split a perfect matching into delta blocks of |V| / (2 delta) edges; None unless 2 delta divides |V|."""
    if not has_perfect_matching(g):
        raise PreconditionError("graph has no perfect matching")
    if 2 * delta > g.vertex_count:
        raise PreconditionError(f"delta={delta} exceeds |V|/2={g.vertex_count // 2}")
    if g.vertex_count % (2 * delta) != 0:
        return None
    matching = sorted(maximum_matching(g))
    block = g.vertex_count // (2 * delta)
    share = Fraction(1, block)
    profile = MixedProfile(
        graph=g,
        attacker_strategies=_uniform_attackers(g, alpha),
        defender_strategies=tuple({e: share for e in matching[j * block : (j + 1) * block]} for j in range(delta)),
    )
    return _certified(profile, "perfect-matching construction")


def _round_robin_cover(g: Graph, delta: int) -> list[Edge]:
    beta_prime = edge_cover_number(g)
    if delta < beta_prime:
        raise PreconditionError(f"delta={delta} is below the edge cover number {beta_prime}")
    cover = sorted(minimum_edge_cover(g))
    return [cover[j % len(cover)] for j in range(delta)]


def _multiplicities(g: Graph, assignment: list[Edge]) -> list[int]:
    counts = Counter(v for edge in assignment for v in edge)
    return [counts[v] for v in g.vertices]


def defender_pure_vertex_balanced_ne(g: Graph, alpha: int, delta: int) -> MixedProfile:
    """Defenders round-robin on a minimum edge cover; every attacker plays v with probability |D(v)| / (2 delta)."""
    assignment = _round_robin_cover(g, delta)
    multiplicity = _multiplicities(g, assignment)
    attacker = {v: Fraction(multiplicity[v], 2 * delta) for v in g.vertices}
    profile = MixedProfile(
        graph=g,
        attacker_strategies=tuple(dict(attacker) for _ in range(alpha)),
        defender_strategies=tuple({e: Fraction(1)} for e in assignment),
    )
    return _certified(profile, "vertex-balanced construction")


def pure_vertex_balanced_ne(g: Graph, alpha: int, delta: int) -> PureProfile:
    """Same defenders; exactly |D(v)| alpha / (2 delta) attackers on each v, filled in vertex order."""
    assignment = _round_robin_cover(g, delta)
    if alpha % (2 * delta) != 0:
        raise PreconditionError(f"2*delta={2 * delta} does not divide alpha={alpha}")
    multiplicity = _multiplicities(g, assignment)
    per_unit = alpha // (2 * delta)
    attackers = [v for v in g.vertices for _ in range(multiplicity[v] * per_unit)]
    profile = PureProfile(graph=g, attacker_choices=tuple(attackers), defender_choices=tuple(assignment))
    report = verify_pure_ne(profile)
    if not report.is_ne or report.defense_ratio != 1:
        raise InvariantViolation("pure vertex-balanced construction produced a non-equilibrium")
    return profile


def construct_defense_optimal(
    g: Graph, alpha: int, delta: int, bound: Optional[int] = None, workers: Optional[int] = None
) -> Optional[MixedProfile]:
    """A Defense-Optimal equilibrium when one exists, else None."""
    regime = classify_regime(g, delta)
    logger.debug(f"delta={delta} on |V|={g.vertex_count}, beta'={regime.beta_prime}: {regime.kind} regime")
    if regime.kind == "too-many":
        return defender_pure_vertex_balanced_ne(g, alpha, delta)
    if regime.kind == "many":
        return None
    found = find_delta_partitionable(g, delta, bound=bound, workers=workers)
    if found is None:
        return None
    f, p = found
    return construct_from_partitionable(g, f, p, alpha)
