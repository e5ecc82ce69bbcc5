import random
from fractions import Fraction
from itertools import combinations, permutations

import networkx as nx
import pytest

from schemas.graph import Graph
from schemas.game import MixedProfile
from schemas.matching import FractionalMatching

GRAPHS = {
    "K2": (2, [(0, 1)]),
    "P3": (3, [(0, 1), (1, 2)]),
    "C3": (3, [(0, 1), (1, 2), (0, 2)]),
    "C4": (4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    "C6": (6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]),
    # two triangles joined by the bridge (2, 3)
    "TT6": (6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]),
    # vertex 3 carries four leaves; 0 joins 1 and 3; 2 hangs off 1
    "STAR8": (8, [(0, 1), (0, 3), (1, 2), (3, 4), (3, 5), (3, 6), (3, 7)]),
    "K2K2": (4, [(0, 1), (2, 3)]),
}

TT6_TEXT = "6 7\n0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n"


def make_graph(name: str) -> Graph:
    n, edges = GRAPHS[name]
    return Graph(vertex_count=n, edges=edges)


@pytest.fixture
def k2():
    return make_graph("K2")


@pytest.fixture
def p3():
    return make_graph("P3")


@pytest.fixture
def c3():
    return make_graph("C3")


@pytest.fixture
def c4():
    return make_graph("C4")


@pytest.fixture
def c6():
    return make_graph("C6")


@pytest.fixture
def tt6():
    return make_graph("TT6")


@pytest.fixture
def star8():
    return make_graph("STAR8")


@pytest.fixture
def k2k2():
    return make_graph("K2K2")


@pytest.fixture
def tt6_half_bridge(tt6):
    """A fractional perfect matching of TT6 whose support uses every edge."""
    q, h = Fraction(1, 4), Fraction(1, 2)
    return FractionalMatching(
        graph=tt6,
        weights={(0, 1): 3 * q, (4, 5): 3 * q, (0, 2): q, (1, 2): q, (3, 4): q, (3, 5): q, (2, 3): h},
    )


@pytest.fixture
def rng():
    return random.Random(20240611)


def atlas_graphs(max_nodes: int = 7, connected: bool = True) -> list[Graph]:
    """Every graph of the networkx atlas without isolated vertices, as a Graph."""
    graphs = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n < 2 or n > max_nodes or any(d == 0 for _, d in h.degree()):
            continue
        if connected and not nx.is_connected(h):
            continue
        graphs.append(Graph(vertex_count=n, edges=list(h.edges())))
    return graphs


def brute_force_min_edge_cover(g: Graph) -> int:
    for size in range(1, g.edge_count + 1):
        for chosen in combinations(g.edges, size):
            if {x for e in chosen for x in e} == set(g.vertices):
                return size
    return g.edge_count


def has_hamiltonian_cycle(g: Graph, block: tuple[int, ...]) -> bool:
    first, rest = block[0], block[1:]
    for order in permutations(rest):
        cycle = (first,) + order
        if all(g.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))):
            return True
    return False


def spans_by_edges_and_odd_cycles(g: Graph, vertices) -> bool:
    """Vertex-disjoint single edges and odd cycles of g covering exactly `vertices`, by enumeration.

    A fractional perfect matching exists on the induced subgraph iff such a
    spanning collection exists.
    """
    remaining = sorted(vertices)
    if not remaining:
        return True
    first, rest = remaining[0], remaining[1:]
    # one mate closes a single edge; an even number closes an odd cycle
    for size in [1] + list(range(2, len(rest) + 1, 2)):
        for mates in combinations(rest, size):
            if size == 1 and not g.has_edge(first, mates[0]):
                continue
            if size > 1 and not has_hamiltonian_cycle(g, (first,) + mates):
                continue
            if spans_by_edges_and_odd_cycles(g, [v for v in rest if v not in mates]):
                return True
    return False


def equal_blocks(vertices: list[int], size: int):
    if not vertices:
        yield []
        return
    first, rest = vertices[0], vertices[1:]
    for mates in combinations(rest, size - 1):
        remaining = [v for v in rest if v not in mates]
        for tail in equal_blocks(remaining, size):
            yield [(first,) + mates] + tail


def partitionable_by_brute_force(g: Graph, delta: int) -> bool:
    n = g.vertex_count
    if n % delta or n // delta < 2:
        return False
    return any(
        all(spans_by_edges_and_odd_cycles(g, block) for block in blocks)
        for blocks in equal_blocks(list(g.vertices), n // delta)
    )


def random_canonical_cover(rng: random.Random, n: int) -> list[tuple[int, ...]]:
    """Vertex-disjoint single edges and odd cycles spanning 0..n-1."""
    order = list(range(n))
    rng.shuffle(order)
    pieces = []
    while order:
        sizes = [s for s in (2, 3, 5) if s <= len(order) and len(order) - s != 1]
        size = rng.choice(sizes)
        pieces.append(tuple(order[:size]))
        order = order[size:]
    return pieces


def piece_weights(piece: tuple[int, ...]) -> dict[tuple[int, int], Fraction]:
    if len(piece) == 2:
        return {tuple(sorted(piece)): Fraction(1)}
    k = len(piece)
    return {tuple(sorted((piece[i], piece[(i + 1) % k]))): Fraction(1, 2) for i in range(k)}


def random_fpm(rng: random.Random, n: int, parts: int) -> FractionalMatching:
    """Convex combination of random spanning edge/odd-cycle covers, on the union of their edges."""
    raw = [rng.randint(1, 9) for _ in range(parts)]
    lambdas = [Fraction(r, sum(raw)) for r in raw]
    weights: dict[tuple[int, int], Fraction] = {}
    for lam in lambdas:
        for piece in random_canonical_cover(rng, n):
            for edge, w in piece_weights(piece).items():
                weights[edge] = weights.get(edge, Fraction(0)) + lam * w
    g = Graph(vertex_count=n, edges=list(weights))
    return FractionalMatching(graph=g, weights=weights)


def random_distribution(rng: random.Random, items) -> dict:
    chosen = rng.sample(list(items), rng.randint(1, len(items)))
    raw = {item: rng.randint(1, 5) for item in chosen}
    total = sum(raw.values())
    return {item: Fraction(w, total) for item, w in raw.items()}


def random_profile(rng: random.Random, g: Graph, alpha: int | None = None, delta: int | None = None) -> MixedProfile:
    alpha = alpha or rng.randint(1, 4)
    delta = delta or rng.randint(1, 4)
    return MixedProfile(
        graph=g,
        attacker_strategies=[random_distribution(rng, g.vertices) for _ in range(alpha)],
        defender_strategies=[random_distribution(rng, g.edges) for _ in range(delta)],
    )
