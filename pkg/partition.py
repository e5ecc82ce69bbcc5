from fractions import Fraction
from typing import Optional

from constants import PARTITION_SEARCH_BOUND, PARTITION_WORKERS
from exceptions import InvariantViolation, PreconditionError, SearchBoundExceeded
from matching import canonicalize_fpm, maximum_matching
from schemas.graph import Edge, Graph
from schemas.matching import FractionalMatching
from schemas.partition import EdgePartition, VertexPartition
from worker.partition_worker import run_partition_search, structure_edges
from logging_config import get_logger

logger = get_logger(__name__)


def _check_bound(what: str, g: Graph, bound: Optional[int]) -> None:
    limit = PARTITION_SEARCH_BOUND if bound is None else bound
    if g.vertex_count > limit:
        raise SearchBoundExceeded(what, g.vertex_count, limit)


def verify_partitionable(f: FractionalMatching, p: EdgePartition, delta: int) -> bool:
    """Check the delta-partitionable certificate (f, p) exactly."""
    if not f.is_perfect:
        raise PreconditionError("partitionability is defined for fractional perfect matchings only")
    foreign = p.edges - f.support
    if foreign:
        raise PreconditionError(f"partition edges {sorted(foreign)} lie outside the support of f")
    missing = f.support - p.edges
    if missing:
        raise PreconditionError(f"support edges {sorted(missing)} are in no partite")
    if p.delta != delta:
        return False
    target = Fraction(f.graph.vertex_count, 2 * delta)
    return all(sum((f.weight(e) for e in partite), Fraction(0)) == target for partite in p.partites)


def find_delta_partitionable(
    g: Graph, delta: int, bound: Optional[int] = None, workers: Optional[int] = None
) -> Optional[tuple[FractionalMatching, EdgePartition]]:
    """Search for delta vertex-disjoint unions of single edges and odd cycles, each on |V|/delta vertices, covering V.

    Weight 1 goes on single edges and 1/2 on cycle edges. Among all
    solutions the one with the least sorted edge list is returned; its
    structures are grouped into the least sorted tuple of partites.
    """
    if delta < 1:
        raise PreconditionError(f"delta must be at least 1, got {delta}")
    n = g.vertex_count
    if n % delta != 0:
        logger.debug(f"delta={delta} does not divide |V|={n}")
        return None
    _check_bound("delta-partitionable search", g, bound)
    if n // delta < 2:
        return None

    bins = run_partition_search(n, g.adjacency, delta, workers or PARTITION_WORKERS)
    if bins is None:
        logger.debug(f"No {delta}-partitionable fractional perfect matching on {n} vertices")
        return None

    weights: dict[Edge, Fraction] = {}
    partites = []
    for structures in bins:
        partite = []
        for structure in structures:
            weight = Fraction(1) if len(structure) == 2 else Fraction(1, 2)
            for edge in structure_edges(structure):
                weights[edge] = weight
                partite.append(edge)
        partites.append(sorted(partite))
    partition = EdgePartition(partites=sorted(partites))
    f = FractionalMatching(graph=g, weights=weights)
    if not verify_partitionable(f, partition, delta):
        raise InvariantViolation(f"search produced an invalid {delta}-partition")
    logger.debug(f"Found {delta}-partition with partites {partition.partites}")
    return f, partition


def partition_into_triangles(g: Graph, bound: Optional[int] = None) -> Optional[VertexPartition]:
    """Partition V into vertex triples that each span a triangle, by backtracking."""
    n = g.vertex_count
    if n % 3 != 0:
        raise PreconditionError(f"|V|={n} is not divisible by 3")
    _check_bound("partition into triangles", g, bound)

    uncovered = set(g.vertices)
    chosen: list[tuple[int, int, int]] = []

    def place() -> bool:
        if not uncovered:
            return True
        v = min(uncovered)
        candidates = [w for w in g.adjacency[v] if w in uncovered]
        for i, a in enumerate(candidates):
            for b in candidates[i + 1 :]:
                if not g.has_edge(a, b):
                    continue
                uncovered.difference_update((v, a, b))
                chosen.append((v, a, b))
                if place():
                    return True
                chosen.pop()
                uncovered.update((v, a, b))
        return False

    return tuple(chosen) if place() else None


def has_perfect_matching(g: Graph) -> bool:
    return g.vertex_count % 2 == 0 and 2 * len(maximum_matching(g)) == g.vertex_count


def refine_partition(f_prime: FractionalMatching, p: EdgePartition) -> EdgePartition:
    """Restrict each partite to E(f'), for f' equivalent to and contained in the partitioned f."""
    partites = []
    for index, partite in enumerate(p.partites, start=1):
        kept = [e for e in partite if e in f_prime.support]
        if not kept:
            raise InvariantViolation(f"partite E_{index} lost every edge under refinement")
        partites.append(kept)
    return EdgePartition(partites=partites)


def canonicalize_partitioned(f: FractionalMatching, p: EdgePartition) -> tuple[FractionalMatching, EdgePartition]:
    """Reduce f to single edges and odd cycles, carrying the partition along."""
    reduced = canonicalize_fpm(f)
    refined = refine_partition(reduced, p)
    if not verify_partitionable(reduced, refined, p.delta):
        raise InvariantViolation("refined partition lost delta-partitionability")
    return reduced, refined
