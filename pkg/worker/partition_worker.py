from multiprocessing import Pool
from typing import Optional

from pydantic import BaseModel, ConfigDict

from logging_config import get_logger

logger = get_logger(__name__)

# A structure is a vertex tuple: two vertices for a single edge, an odd
# number >= 3 for a cycle (closing edge implied).
Structure = tuple[int, ...]
EdgeList = tuple[tuple[int, int], ...]
Bins = list[list[Structure]]

# (sorted edges, structures) of a completion; edge lists compare lexicographically
Completion = tuple[EdgeList, tuple[Structure, ...]]
EMPTY: Completion = ((), ())


def neighbour_masks(adjacency: tuple[tuple[int, ...], ...]) -> list[int]:
    masks = []
    for neighbours in adjacency:
        mask = 0
        for w in neighbours:
            mask |= 1 << w
        masks.append(mask)
    return masks


def _mask_of(structure: Structure) -> int:
    mask = 0
    for v in structure:
        mask |= 1 << v
    return mask


def _members(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def structure_edges(structure: Structure) -> EdgeList:
    """Canonical edges of a single edge or of a cycle, sorted."""
    if len(structure) == 2:
        pairs = [structure]
    else:
        pairs = [(structure[i], structure[(i + 1) % len(structure)]) for i in range(len(structure))]
    return tuple(sorted((min(u, w), max(u, w)) for u, w in pairs))


def structures_through(v: int, uncovered: int, masks: list[int], max_size: int) -> list[Structure]:
    """Single edges, then odd cycles, through v inside the uncovered vertices."""
    if max_size < 2:
        return []
    edges = [(v, w) for w in _members(masks[v] & uncovered)]

    cycles: list[Structure] = []
    path = [v]

    def extend(used: int) -> None:
        tail = path[-1]
        if len(path) >= 3 and len(path) % 2 == 1 and masks[tail] >> v & 1 and path[1] < tail:
            cycles.append(tuple(path))
        if len(path) >= max_size:
            return
        for w in _members(masks[tail] & uncovered & ~used):
            path.append(w)
            extend(used | 1 << w)
            path.pop()

    if max_size >= 3:
        extend(1 << v)
    cycles.sort(key=lambda c: (len(c), c))
    return edges + cycles


def _place(fills: tuple[int, ...], fill: int, size: int) -> tuple[int, ...]:
    placed = list(fills)
    placed[placed.index(fill)] += size
    return tuple(sorted(placed))


class SubtreeSearch(BaseModel):
    """One top-level branch of the partition search: `first` placed in the first partite."""

    model_config = ConfigDict(frozen=True)

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    delta: int
    first: Structure

    @property
    def part_size(self) -> int:
        return self.vertex_count // self.delta


class _LeastCompletion:
    """Least completion (by sorted edge list) of every reachable (uncovered, fills) state.

    States covering the same vertices with the same multiset of partite fills
    have the same completions, so each is solved once.
    """

    def __init__(self, search: SubtreeSearch):
        self.masks = neighbour_masks(search.adjacency)
        self.part_size = search.part_size
        self.memo: dict[tuple[int, tuple[int, ...]], Optional[Completion]] = {}

    def viable(self, uncovered: int, fills: tuple[int, ...]) -> bool:
        if any(fill == self.part_size - 1 for fill in fills):
            return False
        return all(self.masks[u] & uncovered for u in _members(uncovered))

    def solve(self, uncovered: int, fills: tuple[int, ...]) -> Optional[Completion]:
        if uncovered == 0:
            return EMPTY
        key = (uncovered, fills)
        if key in self.memo:
            return self.memo[key]

        best: Optional[Completion] = None
        if self.viable(uncovered, fills):
            v = (uncovered & -uncovered).bit_length() - 1
            for structure in structures_through(v, uncovered, self.masks, self.part_size - fills[0]):
                size = len(structure)
                rest = uncovered & ~_mask_of(structure)
                for fill in sorted(set(fills)):
                    if fill + size > self.part_size:
                        break
                    tail = self.solve(rest, _place(fills, fill, size))
                    if tail is None:
                        continue
                    # structures are vertex-disjoint, so the merged edge list has no repeats
                    edges = tuple(sorted(structure_edges(structure) + tail[0]))
                    if best is None or edges < best[0]:
                        best = (edges, (structure,) + tail[1])
        self.memo[key] = best
        return best


def explore_subtree(search: SubtreeSearch) -> Optional[Completion]:
    solver = _LeastCompletion(search)
    fills = tuple(sorted([len(search.first)] + [0] * (search.delta - 1)))
    uncovered = ((1 << search.vertex_count) - 1) & ~_mask_of(search.first)
    tail = solver.solve(uncovered, fills)
    logger.debug(f"Subtree {search.first}: {len(solver.memo)} states, {'found' if tail else 'exhausted'}")
    if tail is None:
        return None
    return tuple(sorted(structure_edges(search.first) + tail[0])), (search.first,) + tail[1]


def group_structures(structures: tuple[Structure, ...], part_size: int) -> Optional[Bins]:
    """Group structures into partites of part_size vertices, least sorted partite tuple first.

    The partite holding the structure with the smallest edge leads; it takes
    further structures in order of their smallest edge whenever the rest can
    still be grouped.
    """
    ordered = sorted(structures, key=lambda s: structure_edges(s)[0])

    def group(remaining: list[Structure]) -> Optional[Bins]:
        if not remaining:
            return []
        head, rest = remaining[0], remaining[1:]

        def choose(start: int, chosen: list[Structure], size: int) -> Optional[Bins]:
            if size == part_size:
                tail = group([s for s in rest if s not in chosen])
                return None if tail is None else [[head] + chosen] + tail
            for i in range(start, len(rest)):
                if size + len(rest[i]) <= part_size:
                    found = choose(i + 1, chosen + [rest[i]], size + len(rest[i]))
                    if found is not None:
                        return found
            return None

        return choose(0, [], len(head))

    return group(ordered)


def run_partition_search(vertex_count: int, adjacency: tuple[tuple[int, ...], ...], delta: int, workers: int = 1) -> Optional[Bins]:
    """Explore every top-level branch, in parallel when workers > 1, and keep the least completion."""
    masks = neighbour_masks(adjacency)
    full = (1 << vertex_count) - 1
    part_size = vertex_count // delta
    searches = [
        SubtreeSearch(vertex_count=vertex_count, adjacency=adjacency, delta=delta, first=structure)
        for structure in structures_through(0, full, masks, part_size)
    ]
    logger.debug(f"Partition search: {len(searches)} top-level branches, {workers} worker(s)")

    if workers > 1 and len(searches) > 1:
        with Pool(processes=min(workers, len(searches))) as pool:
            results = pool.map(explore_subtree, searches)
    else:
        results = [explore_subtree(search) for search in searches]

    found = [result for result in results if result is not None]
    if not found:
        return None
    _, structures = min(found, key=lambda result: result[0])
    return group_structures(structures, part_size)
