from collections import deque
from typing import Iterable, Optional

import networkx as nx

from schemas.graph import Cycle, Edge, EdgeSet, Graph, VertexSet, canonical_edge, restricted_adjacency, vertices_of
from logging_config import get_logger

logger = get_logger(__name__)


def connected_components(g: Graph, restrict: Optional[Iterable[Edge]] = None) -> list[tuple[tuple[int, ...], tuple[Edge, ...]]]:
    """Components of G(F) that carry at least one edge, ordered by least vertex."""
    edges = g.restrict(restrict)
    h = nx.Graph()
    h.add_edges_from(sorted(edges))
    components = []
    for vertices in nx.connected_components(h):
        members = tuple(sorted(vertices))
        component_edges = tuple(sorted(e for e in edges if e[0] in vertices))
        components.append((members, component_edges))
    return sorted(components)


def is_cycle_component(vertices: tuple[int, ...], edges: tuple[Edge, ...]) -> bool:
    """A connected edge set forms a single cycle iff every vertex has degree 2."""
    if len(vertices) < 3 or len(edges) != len(vertices):
        return False
    adjacency = restricted_adjacency(edges)
    return all(len(adjacency[v]) == 2 for v in vertices)


def walk_cycle(edges: Iterable[Edge]) -> Cycle:
    """Vertex order of a connected 2-regular edge set."""
    adjacency = restricted_adjacency(edges)
    start = min(adjacency)
    order = [start]
    previous, current = start, adjacency[start][0]
    while current != start:
        order.append(current)
        previous, current = current, next(w for w in adjacency[current] if w != previous)
    return Cycle(vertices=tuple(order)).canonical()


def pendant_edges(g: Graph, restrict: Optional[Iterable[Edge]] = None) -> EdgeSet:
    """Edges of G(F) with one endpoint of degree 1 and the other of degree > 1."""
    edges = g.restrict(restrict)
    adjacency = restricted_adjacency(edges)
    pendant = set()
    for u, v in edges:
        degrees = sorted((len(adjacency[u]), len(adjacency[v])))
        if degrees[0] == 1 and degrees[1] > 1:
            pendant.add((u, v))
    return frozenset(pendant)


def _even_cycle_in_block(block: list[Edge]) -> Optional[Cycle]:
    adjacency = restricted_adjacency(block)
    if len(block) == len(adjacency):
        cycle = walk_cycle(block)
        return cycle if cycle.parity == "even" else None

    # Not a bare cycle: a base cycle plus one ear forms a theta, and a theta
    # always contains an even cycle.
    h = nx.Graph()
    h.add_edges_from(block)
    base = [u for u, _ in nx.find_cycle(h, source=min(adjacency))]
    if len(base) % 2 == 0:
        return Cycle(vertices=tuple(base)).canonical()

    on_base = set(base)
    base_edges = {canonical_edge(base[i], base[(i + 1) % len(base)]) for i in range(len(base))}
    ear = None
    for a in base:
        for b in adjacency[a]:
            if canonical_edge(a, b) not in base_edges:
                ear = _ear_from(adjacency, on_base, a, b)
                break
        if ear:
            break
    if ear is None:
        return None

    x, y = ear[0], ear[-1]
    start = base.index(x)
    rotated = base[start:] + base[:start]
    j = rotated.index(y)
    forward = rotated[: j + 1]
    backward = [x] + list(reversed(rotated[j:]))
    ear_length = len(ear) - 1
    arc = forward if (len(forward) - 1) % 2 == ear_length % 2 else backward
    vertices = arc + list(reversed(ear))[1:-1]
    return Cycle(vertices=tuple(vertices)).canonical()


def _ear_from(adjacency: dict[int, list[int]], on_base: set[int], a: int, b: int) -> Optional[list[int]]:
    """Path a, b, ..., t avoiding the base cycle internally, with t on the base and t != a."""
    if b in on_base:
        return [a, b]
    parent = {b: a}
    queue = deque([b])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if y == a or y in parent:
                continue
            parent[y] = x
            if y in on_base:
                path = [y]
                while path[-1] != a:
                    path.append(parent[path[-1]])
                return list(reversed(path))
            queue.append(y)
    return None


def find_even_cycle(g: Graph, restrict: Optional[Iterable[Edge]] = None) -> Optional[Cycle]:
    """An even cycle of G(F), or None.

    A graph has no even cycle iff each biconnected block is a single edge or
    an odd cycle; the first offending block (in canonical order) yields one.
    """
    edges = g.restrict(restrict)
    h = nx.Graph()
    h.add_edges_from(sorted(edges))
    blocks = sorted(sorted(canonical_edge(u, v) for u, v in block) for block in nx.biconnected_component_edges(h))
    for block in blocks:
        if len(block) < 3:
            continue
        cycle = _even_cycle_in_block(block)
        if cycle is not None:
            logger.debug(f"Even cycle {cycle.vertices} found among {len(edges)} edges")
            return cycle
    return None


def _odd_cycle_in_component(vertices: tuple[int, ...], edges: tuple[Edge, ...]) -> Optional[Cycle]:
    adjacency = restricted_adjacency(edges)
    root = vertices[0]
    depth = {root: 0}
    parent = {root: None}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if y not in depth:
                depth[y] = depth[x] + 1
                parent[y] = x
                queue.append(y)
    for u, w in edges:
        if depth[u] != depth[w]:
            continue
        left, right = [u], [w]
        while left[-1] != right[-1]:
            left.append(parent[left[-1]])
            right.append(parent[right[-1]])
        return Cycle(vertices=tuple(left + list(reversed(right[:-1])))).canonical()
    return None


def find_non_isolated_odd_cycle(g: Graph, restrict: Optional[Iterable[Edge]] = None) -> Optional[tuple[Cycle, int]]:
    """An odd cycle of G(F) that is not a whole component, with a vertex of degree >= 3 on it."""
    edges = g.restrict(restrict)
    adjacency = restricted_adjacency(edges)
    for vertices, component_edges in connected_components(g, edges):
        if is_cycle_component(vertices, component_edges):
            continue
        cycle = _odd_cycle_in_component(vertices, component_edges)
        if cycle is None:
            continue
        branch = min(v for v in cycle.vertices if len(adjacency[v]) >= 3)
        logger.debug(f"Non-isolated odd cycle {cycle.vertices} branches at {branch}")
        return cycle, branch
    return None


def is_edge_cover(g: Graph, f: Iterable[Edge]) -> bool:
    return vertices_of(g.restrict(f)) == frozenset(g.vertices)


def is_vertex_cover(g: Graph, restrict: Optional[Iterable[Edge]], s: Iterable[int]) -> bool:
    chosen: VertexSet = frozenset(s)
    return all(u in chosen or v in chosen for u, v in g.restrict(restrict))
