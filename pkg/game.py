from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Optional, Sequence

from exceptions import InvariantViolation
from graph_core import is_edge_cover, is_vertex_cover
from matching import edge_cover_number, minimum_vertex_cover_over_edge_covers
from schemas.game import MixedProfile, NeReport, PureProfile, Violation
from schemas.graph import Edge, Graph
from logging_config import get_logger

logger = get_logger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def hit_probability(p: MixedProfile, d: int, v: int) -> Fraction:
    """P(Hit(d, v)): mass defender d puts on edges incident to v."""
    return sum((weight for edge, weight in p.defender_strategies[d].items() if v in edge), ZERO)


def hit_probabilities(p: MixedProfile, v: int) -> list[Fraction]:
    return [hit_probability(p, d, v) for d in range(p.delta)]


def hit_probability_vertex(p: MixedProfile, v: int) -> Fraction:
    """P(Hit(v)) = 1 - prod_d (1 - P(Hit(d, v))), defenders being independent."""
    return ONE - prod((ONE - x for x in hit_probabilities(p, v)), start=ONE)


def hit_probability_inclusion_exclusion(p: MixedProfile, v: int) -> Fraction:
    """P(Hit(v)) by inclusion-exclusion over defender subsets. Exponential in delta."""
    xs = hit_probabilities(p, v)
    total = ZERO
    for size in range(1, len(xs) + 1):
        sign = 1 if size % 2 == 1 else -1
        for chosen in combinations(xs, size):
            total += sign * prod(chosen, start=ONE)
    return total


def min_hit(p: MixedProfile) -> Fraction:
    return min(hit_probability_vertex(p, v) for v in p.graph.vertices)


def total_hit(p: MixedProfile) -> Fraction:
    """Sum over V of P(Hit(v)); at most 2*delta."""
    return sum((hit_probability_vertex(p, v) for v in p.graph.vertices), ZERO)


def expected_attackers(p: MixedProfile, v: int) -> Fraction:
    """|A|(v): expected number of attackers choosing v."""
    return sum((strategy.get(v, ZERO) for strategy in p.attacker_strategies), ZERO)


def defenders_hitting(p: MixedProfile, v: int) -> int:
    """Number of defenders whose support touches v; |D(v)| for defender-pure profiles."""
    return sum(1 for d in range(p.delta) if any(v in edge for edge in p.defender_strategies[d]))


def proportion_by_subsets(others: Sequence[Fraction]) -> Fraction:
    """Expected share 1/l of a defender sure to hit v, where l-1 of the other defenders also hit it."""
    indices = range(len(others))
    total = ZERO
    for size in range(len(others) + 1):
        for chosen in combinations(indices, size):
            picked = set(chosen)
            term = prod((others[i] if i in picked else ONE - others[i] for i in indices), start=ONE)
            total += term / (size + 1)
    return total


def proportion_by_alternating_sum(others: Sequence[Fraction]) -> Fraction:
    """Same quantity as sum over subsets S of (-1)^|S| / (|S| + 1) * prod_S x."""
    total = ZERO
    for size in range(len(others) + 1):
        sign = 1 if size % 2 == 0 else -1
        for chosen in combinations(others, size):
            total += Fraction(sign, size + 1) * prod(chosen, start=ONE)
    return total


def _proportion(others: Sequence[Fraction]) -> Fraction:
    # distribution of the number of other defenders hitting v, built one defender at a time
    counts = [ONE]
    for x in others:
        shifted = [ZERO] * (len(counts) + 1)
        for k, mass in enumerate(counts):
            shifted[k] += mass * (ONE - x)
            shifted[k + 1] += mass * x
        counts = shifted
    return sum((mass / (k + 1) for k, mass in enumerate(counts)), ZERO)


def _others(p: MixedProfile, d: int, v: int) -> list[Fraction]:
    return [hit_probability(p, other, v) for other in range(p.delta) if other != d]


def conditional_expected_proportion(p: MixedProfile, d: int, v: int) -> Fraction:
    """Prop_d(sigma_-d <> v), computed by both formulas, which must agree."""
    others = _others(p, d, v)
    by_subsets = proportion_by_subsets(others)
    by_alternating = proportion_by_alternating_sum(others)
    if by_subsets != by_alternating:
        raise InvariantViolation(f"proportion formulas disagree at defender {d}, vertex {v}: {by_subsets} != {by_alternating}")
    return by_subsets


def expected_utility_attacker(p: MixedProfile, a: int) -> Fraction:
    return sum((weight * (ONE - hit_probability_vertex(p, v)) for v, weight in p.attacker_strategies[a].items()), ZERO)


def _proportions(p: MixedProfile, d: int) -> list[Fraction]:
    return [_proportion(_others(p, d, v)) for v in p.graph.vertices]


def expected_utility_defender(p: MixedProfile, d: int) -> Fraction:
    proportions = _proportions(p, d)
    return sum(
        (hit_probability(p, d, v) * proportions[v] * expected_attackers(p, v) for v in p.graph.vertices),
        ZERO,
    )


def defense_ratio_lower_bound(vertex_count: int, delta: int) -> Fraction:
    """max{1, |V| / (2 delta)}: no profile does better, and Defense-Optimal equilibria attain it."""
    return max(ONE, Fraction(vertex_count, 2 * delta))


# Profile classes


def _is_uniform(distribution: dict) -> bool:
    return len(set(distribution.values())) == 1


def is_uniform(p: MixedProfile) -> bool:
    return all(_is_uniform(s) for s in p.attacker_strategies + p.defender_strategies)


def is_attacker_symmetric(p: MixedProfile) -> bool:
    return all(s == p.attacker_strategies[0] for s in p.attacker_strategies)


def is_defender_symmetric(p: MixedProfile) -> bool:
    return all(s == p.defender_strategies[0] for s in p.defender_strategies)


def is_attacker_fullymixed(p: MixedProfile) -> bool:
    return all(len(s) == p.graph.vertex_count for s in p.attacker_strategies)


def is_defender_fullymixed(p: MixedProfile) -> bool:
    return all(len(s) == p.graph.edge_count for s in p.defender_strategies)


def is_defender_pure(p: MixedProfile) -> bool:
    return all(len(s) == 1 for s in p.defender_strategies)


def is_unidefender(p: MixedProfile) -> bool:
    """Every vertex is touched by at most one defender's support."""
    return all(defenders_hitting(p, v) <= 1 for v in p.graph.vertices)


def is_monodefender(p: MixedProfile) -> bool:
    return all(defenders_hitting(p, v) == 1 for v in p.graph.vertices)


def is_perfect_matching_profile(p: MixedProfile) -> bool:
    """Supports_sigma(D) is a perfect matching of G."""
    supports = p.defender_supports
    return 2 * len(supports) == p.graph.vertex_count and is_edge_cover(p.graph, supports)


def is_vertex_balanced(p: MixedProfile) -> Optional[Fraction]:
    """The constant c with |A|(v) / |D(v)| = c at every vertex, or None."""
    ratios = set()
    for v in p.graph.vertices:
        multiplicity = defenders_hitting(p, v)
        if multiplicity == 0:
            return None
        ratios.add(expected_attackers(p, v) / multiplicity)
    return ratios.pop() if len(ratios) == 1 else None


PROFILE_CLASSES = (
    ("uniform", is_uniform),
    ("attacker-symmetric", is_attacker_symmetric),
    ("defender-symmetric", is_defender_symmetric),
    ("attacker-fullymixed", is_attacker_fullymixed),
    ("defender-fullymixed", is_defender_fullymixed),
    ("defender-pure", is_defender_pure),
    ("unidefender", is_unidefender),
    ("monodefender", is_monodefender),
    ("perfect-matching", is_perfect_matching_profile),
    ("vertex-balanced", lambda p: is_vertex_balanced(p) is not None),
)


def profile_classes(p: MixedProfile) -> tuple[str, ...]:
    return tuple(name for name, holds in PROFILE_CLASSES if holds(p))


def maxhit_vertices(p: MixedProfile) -> tuple[int, ...]:
    """Vertices hit with probability 1."""
    return tuple(v for v in p.graph.vertices if hit_probability_vertex(p, v) == 1)


def maxhitters(p: MixedProfile) -> tuple[int, ...]:
    """Defenders certain to hit some vertex."""
    return tuple(d for d in range(p.delta) if any(hit_probability(p, d, v) == 1 for v in p.graph.vertices))


def project_defender_pure(p: MixedProfile) -> MixedProfile:
    """Keep one support edge per defender.

    A maxhitter keeps its least edge through the least vertex it is certain
    to hit; any other defender keeps its least support edge.
    """
    chosen = []
    for d, strategy in enumerate(p.defender_strategies):
        certain = [v for v in p.graph.vertices if hit_probability(p, d, v) == 1]
        candidates = [e for e in strategy if certain and certain[0] in e] or list(strategy)
        chosen.append({min(candidates): ONE})
    return MixedProfile(graph=p.graph, attacker_strategies=p.attacker_strategies, defender_strategies=tuple(chosen))


# Verification


def _defender_violations(
    g: Graph, d: int, current: Fraction, value_of_edge
) -> list[Violation]:
    violations = []
    for edge in g.edges:
        value = value_of_edge(edge)
        if value > current:
            violations.append(
                Violation(player="defender", index=d, deviation=edge, current_utility=current, deviation_utility=value)
            )
    return violations


def _certify(report: NeReport, p: MixedProfile) -> NeReport:
    if not report.is_ne:
        return report
    if report.total_defender_utility != p.alpha * report.min_hit:
        raise InvariantViolation(
            f"equilibrium with total defender utility {report.total_defender_utility} != alpha * MinHit = {p.alpha * report.min_hit}"
        )
    if is_unidefender(p) and not is_monodefender(p):
        raise InvariantViolation("unidefender equilibrium is not monodefender")
    return report


def verify_ne(p: MixedProfile) -> NeReport:
    """Check the equilibrium characterization exactly, reporting every strictly improving pure deviation."""
    g = p.graph
    hits = [hit_probability_vertex(p, v) for v in g.vertices]
    minimum = min(hits)
    loads = [expected_attackers(p, v) for v in g.vertices]
    violations: list[Violation] = []

    for a in range(p.alpha):
        current = sum((weight * (ONE - hits[v]) for v, weight in p.attacker_strategies[a].items()), ZERO)
        for v in g.vertices:
            if ONE - hits[v] > current:
                violations.append(
                    Violation(player="attacker", index=a, deviation=v, current_utility=current, deviation_utility=ONE - hits[v])
                )

    total = ZERO
    for d in range(p.delta):
        proportions = _proportions(p, d)
        current = sum((hit_probability(p, d, v) * proportions[v] * loads[v] for v in g.vertices), ZERO)
        total += current

        def value_of_edge(edge: Edge) -> Fraction:
            return sum((proportions[v] * loads[v] for v in edge), ZERO)

        violations.extend(_defender_violations(g, d, current, value_of_edge))

    is_ne = not violations
    if p.delta == 1:
        attacker_ok = not any(v.player == "attacker" for v in violations)
        edge_loads = {edge: loads[edge[0]] + loads[edge[1]] for edge in g.edges}
        best = max(edge_loads.values())
        single_defender_ok = attacker_ok and all(edge_loads[e] == best for e in p.defender_strategies[0])
        if single_defender_ok != is_ne:
            raise InvariantViolation("single-defender condition disagrees with the general characterization")

    defense_ratio = Fraction(p.alpha) / total if total > 0 else None
    report = NeReport(
        is_ne=is_ne,
        min_hit=minimum,
        defense_ratio=defense_ratio,
        is_defense_optimal=is_ne and defense_ratio == defense_ratio_lower_bound(g.vertex_count, p.delta),
        violations=tuple(violations),
        total_defender_utility=total,
        defender_supports_edge_cover=is_edge_cover(g, p.defender_supports),
        attacker_supports_vertex_cover=is_vertex_cover(g, p.defender_supports, p.attacker_supports),
        maxhit_vertices=maxhit_vertices(p),
        maxhitters=maxhitters(p),
        profile_classes=profile_classes(p),
    )
    logger.debug(f"Verified profile (alpha={p.alpha}, delta={p.delta}): is_ne={is_ne}, {len(violations)} violation(s)")
    return _certify(report, p)


def verify_pure_ne(s: PureProfile) -> NeReport:
    """Pure-profile verification with integer attacker/defender counts."""
    g = s.graph
    attackers = [s.attackers_on(v) for v in g.vertices]
    defenders = [s.defenders_on(v) for v in g.vertices]
    violations: list[Violation] = []

    unhit = [v for v in g.vertices if defenders[v] == 0]
    for a, v in enumerate(s.attacker_choices):
        if defenders[v] > 0:
            for u in unhit:
                violations.append(Violation(player="attacker", index=a, deviation=u, current_utility=ZERO, deviation_utility=ONE))

    total = ZERO
    for d, edge in enumerate(s.defender_choices):
        current = sum((Fraction(attackers[v], defenders[v]) for v in edge), ZERO)
        total += current

        def value_of_edge(candidate: Edge) -> Fraction:
            return sum(
                (Fraction(attackers[v], defenders[v] - (1 if v in edge else 0) + 1) for v in candidate),
                ZERO,
            )

        violations.extend(_defender_violations(g, d, current, value_of_edge))

    mixed = verify_ne(s.to_mixed())
    if tuple(violations) != mixed.violations or total != mixed.total_defender_utility:
        raise InvariantViolation("pure verification disagrees with verification of the lifted mixed profile")
    return mixed


def pure_ne_necessary(g: Graph, alpha: int, delta: int, bound: Optional[int] = None) -> tuple[bool, bool]:
    """(delta >= beta'(G), alpha >= min over edge covers EC of beta(G(EC))); necessary, not sufficient."""
    return delta >= edge_cover_number(g), alpha >= minimum_vertex_cover_over_edge_covers(g, bound)
