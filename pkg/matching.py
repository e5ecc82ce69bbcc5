from collections import Counter
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx

from constants import EXACT_SEARCH_BOUND
from exceptions import InvariantViolation, PreconditionError, SearchBoundExceeded
from graph_core import (
    connected_components,
    find_even_cycle,
    find_non_isolated_odd_cycle,
    is_cycle_component,
    is_vertex_cover,
    pendant_edges,
)
from schemas.graph import Cycle, Edge, EdgeSet, Graph, VertexSet, canonical_edge, restricted_adjacency, vertices_of
from schemas.matching import FractionalMatching
from logging_config import get_logger

logger = get_logger(__name__)

HALF = Fraction(1, 2)


def maximum_matching(g: Graph) -> EdgeSet:
    """Maximum-cardinality matching via Edmonds' blossom algorithm (networkx)."""
    mate = nx.max_weight_matching(g.to_networkx(), maxcardinality=True)
    matching = frozenset(canonical_edge(u, v) for u, v in mate)
    logger.debug(f"Maximum matching of size {len(matching)} on {g.vertex_count} vertices")
    return matching


def minimum_edge_cover(g: Graph) -> EdgeSet:
    """Minimum edge cover: a maximum matching plus one edge per exposed vertex.

    Exposed vertices are pairwise non-adjacent (the matching is maximum), so
    each one is covered by its least incident edge and |cover| = |V| - |M|.
    """
    matching = maximum_matching(g)
    covered = vertices_of(matching)
    cover = set(matching)
    for v in g.vertices:
        if v not in covered:
            cover.add(canonical_edge(v, g.adjacency[v][0]))
    return frozenset(cover)


def edge_cover_number(g: Graph) -> int:
    """beta'(G)."""
    return g.vertex_count - len(maximum_matching(g))


def _check_bound(what: str, g: Graph, bound: Optional[int]) -> None:
    limit = EXACT_SEARCH_BOUND if bound is None else bound
    if g.vertex_count > limit:
        raise SearchBoundExceeded(what, g.vertex_count, limit)


def minimum_vertex_cover_exact(g: Graph, restrict: Optional[Iterable[Edge]] = None, bound: Optional[int] = None) -> VertexSet:
    """Least (then lexicographically first) vertex cover of G(F), by exhaustive search."""
    _check_bound("minimum vertex cover", g, bound)
    edges = g.restrict(restrict)
    candidates = sorted(vertices_of(edges))
    for size in range(len(candidates) + 1):
        for chosen in combinations(candidates, size):
            if is_vertex_cover(g, edges, chosen):
                return frozenset(chosen)
    return frozenset(candidates)


def minimum_vertex_cover_over_edge_covers(g: Graph, bound: Optional[int] = None) -> int:
    """min over edge covers EC of beta(G(EC)).

    A vertex set S covers some edge cover exactly when every vertex outside S
    has a neighbour in S, so this is the domination number of G.
    """
    _check_bound("minimum vertex cover over edge covers", g, bound)
    for size in range(g.vertex_count + 1):
        for chosen in combinations(g.vertices, size):
            dominated = set(chosen)
            for v in chosen:
                dominated.update(g.adjacency[v])
            if len(dominated) == g.vertex_count:
                return size
    return g.vertex_count


def ensure_no_pendant_edges(f: FractionalMatching) -> FractionalMatching:
    """A perfect fractional matching never has a pendant edge in its support."""
    if f.is_perfect:
        pendant = pendant_edges(f.graph, f.support)
        if pendant:
            raise InvariantViolation(f"perfect fractional matching has pendant edges {sorted(pendant)}")
    return f


def fractional_perfect_matching(g: Graph) -> Optional[FractionalMatching]:
    """A half-integral fractional perfect matching, read off a perfect matching of the bipartite double cover."""
    cover = nx.Graph()
    left = [("L", v) for v in g.vertices]
    cover.add_nodes_from(left)
    cover.add_nodes_from(("R", v) for v in g.vertices)
    for u, v in g.edges:
        cover.add_edge(("L", u), ("R", v))
        cover.add_edge(("L", v), ("R", u))
    mates = nx.bipartite.hopcroft_karp_matching(cover, top_nodes=left)
    if len(mates) != 2 * g.vertex_count:
        logger.debug(f"Double cover has no perfect matching; no fractional perfect matching on {g.vertex_count} vertices")
        return None
    copies = Counter(canonical_edge(v, mates[("L", v)][1]) for v in g.vertices)
    f = FractionalMatching(graph=g, weights={edge: Fraction(count, 2) for edge, count in copies.items()})
    return ensure_no_pendant_edges(f)


def eliminate_even_cycles(f: FractionalMatching) -> FractionalMatching:
    """Equivalent f' with E(f') a subset of E(f) and no even cycle in G(E(f'))."""
    g = f.graph
    current = f
    iterations = 0
    while (cycle := find_even_cycle(g, current.support)) is not None:
        iterations += 1
        if iterations > g.edge_count:
            raise InvariantViolation("even-cycle elimination did not terminate within |E| iterations")
        weights = dict(current.weights)
        cycle_edges = cycle.edges
        start = min(range(len(cycle_edges)), key=lambda i: (weights[cycle_edges[i]], cycle_edges[i]))
        f0 = weights[cycle_edges[start]]
        for offset in range(len(cycle_edges)):
            edge = cycle_edges[(start + offset) % len(cycle_edges)]
            weights[edge] += -f0 if offset % 2 == 0 else f0
        logger.debug(f"Even cycle {cycle.vertices}: removed {cycle_edges[start]} (f0={f0})")
        current = current.with_weights(weights)
    return ensure_no_pendant_edges(current)


def _closing_walk(adjacency: dict[int, list[int]], forbidden: set[int], v0: int, v1: int) -> tuple[list[int], int]:
    """Walk v0, v1, v2, ... never stepping straight back, until a vertex repeats.

    Returns the walk v0..v_r and the index l with v_r = v_l.
    """
    path = [v0, v1]
    index = {v0: 0, v1: 1}
    previous, current = v0, v1
    while True:
        following = next((w for w in adjacency[current] if w != previous), None)
        if following is None or following in forbidden:
            raise InvariantViolation(f"walk from {v0} via {v1} left the bicycle structure at {current}")
        path.append(following)
        if following in index:
            return path, index[following]
        index[following] = len(path) - 1
        previous, current = current, following


def _signed_coefficients(cycle: Cycle, v0: int, path: list[int], closing: int) -> dict[Edge, Fraction]:
    """The coefficient function g over E(C) and the walk edges."""
    coefficients: dict[Edge, Fraction] = {}
    start = cycle.vertices.index(v0)
    around = cycle.vertices[start:] + cycle.vertices[:start]
    n = len(around)
    for i in range(n):
        coefficients[canonical_edge(around[i], around[(i + 1) % n])] = HALF if i % 2 == 0 else -HALF

    last = HALF
    for k in range(closing):
        last = Fraction(-1) if k % 2 == 0 else Fraction(1)
        coefficients[canonical_edge(path[k], path[k + 1])] = last

    first = -HALF if last > 0 else HALF
    for k in range(closing, len(path) - 1):
        edge = canonical_edge(path[k], path[k + 1])
        if edge in coefficients:
            raise InvariantViolation(f"edge {edge} appears twice in the bicycle structure")
        coefficients[edge] = first if (k - closing) % 2 == 0 else -first
    return coefficients


def isolate_odd_cycles(f: FractionalMatching) -> FractionalMatching:
    """Equivalent f' with E(f') a subset of E(f) and no non-isolated odd cycle.

    Requires a fractional perfect matching whose support has no even cycle.
    """
    if not f.is_perfect:
        raise PreconditionError("odd-cycle isolation needs a fractional perfect matching")
    g = f.graph
    if find_even_cycle(g, f.support) is not None:
        raise PreconditionError("odd-cycle isolation needs a support without even cycles")

    current = f
    while (found := find_non_isolated_odd_cycle(g, current.support)) is not None:
        cycle, v0 = found
        on_cycle = set(cycle.vertices)
        adjacency = restricted_adjacency(current.support)
        v1 = next(w for w in adjacency[v0] if w not in on_cycle)
        anchored = set(cycle.edges) | {canonical_edge(v0, v1)}
        logger.debug(f"Isolating odd cycle {cycle.vertices} at {v0} via ({v0}, {v1})")

        while anchored <= current.support:
            adjacency = restricted_adjacency(current.support)
            path, closing = _closing_walk(adjacency, on_cycle - {v0}, v0, v1)
            coefficients = _signed_coefficients(cycle, v0, path, closing)
            weights = dict(current.weights)
            e0 = min(coefficients, key=lambda e: (weights[e] / abs(coefficients[e]), e))
            if coefficients[e0] > 0:
                coefficients = {e: -c for e, c in coefficients.items()}
            f0 = weights[e0] / abs(coefficients[e0])
            for edge, coefficient in coefficients.items():
                weights[edge] += coefficient * f0
            logger.debug(f"Walk {path} (closing at index {closing}): removed {e0} (f0={f0})")
            current = current.with_weights(weights)
    return ensure_no_pendant_edges(current)


def fpm_components(f: FractionalMatching) -> list[tuple[tuple[int, ...], tuple[Edge, ...]]]:
    return connected_components(f.graph, f.support)


def is_canonical_fpm(f: FractionalMatching) -> bool:
    """Every support component is a weight-1 single edge or a weight-1/2 odd cycle."""
    if not f.is_perfect:
        return False
    for vertices, edges in fpm_components(f):
        if len(edges) == 1:
            if f.weight(edges[0]) != 1:
                return False
        elif is_cycle_component(vertices, edges) and len(vertices) % 2 == 1:
            if any(f.weight(e) != HALF for e in edges):
                return False
        else:
            return False
    return True


def canonicalize_fpm(f: FractionalMatching) -> FractionalMatching:
    """Eliminate even cycles, then isolate odd cycles."""
    if not f.is_perfect:
        raise PreconditionError("canonicalization needs a fractional perfect matching")
    reduced = isolate_odd_cycles(eliminate_even_cycles(f))
    if not is_canonical_fpm(reduced):
        raise InvariantViolation("reduced fractional perfect matching is not made of single edges and odd cycles")
    logger.debug(f"Canonical form keeps {len(reduced.support)} of {len(f.support)} support edges")
    return reduced
