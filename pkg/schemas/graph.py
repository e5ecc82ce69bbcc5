from functools import cached_property
from typing import Iterable, Literal, Optional

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Edge = tuple[int, int]
EdgeSet = frozenset[Edge]
VertexSet = frozenset[int]


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def vertices_of(edges: Iterable[Edge]) -> VertexSet:
    """Vertices_G(F): every endpoint of an edge in `edges`."""
    return frozenset(x for edge in edges for x in edge)


class Graph(BaseModel):
    """Simple undirected graph on vertices 0..vertex_count-1 with no isolated vertices.

    Edges are stored canonically (min endpoint first) and sorted, so every
    iteration over a graph is reproducible.
    """

    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(ge=0)
    edges: tuple[Edge, ...] = ()

    @field_validator("edges", mode="before")
    @classmethod
    def canonicalize_edges(cls, edges):
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            edge = canonical_edge(u, v)
            if edge in seen:
                raise ValueError(f"duplicate edge {edge}")
            seen.add(edge)
        return tuple(sorted(seen))

    @model_validator(mode="after")
    def check_vertices(self):
        if self.vertex_count > 2 * len(self.edges):
            raise ValueError(f"isolated vertices: {len(self.edges)} edges cannot touch all {self.vertex_count} vertices")
        for u, v in self.edges:
            if u < 0 or v >= self.vertex_count:
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.vertex_count - 1}")
        isolated = sorted(set(range(self.vertex_count)) - vertices_of(self.edges))
        if isolated:
            raise ValueError(f"isolated vertices {isolated}")
        return self

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> EdgeSet:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        neighbours = [[] for _ in self.vertices]
        for u, v in self.edges:
            neighbours[u].append(v)
            neighbours[v].append(u)
        return tuple(tuple(sorted(n)) for n in neighbours)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edge_set

    def restrict(self, edges: Optional[Iterable[Edge]] = None) -> EdgeSet:
        """Validate an edge subset of this graph; None stands for all edges."""
        if edges is None:
            return self.edge_set
        restricted = frozenset(canonical_edge(u, v) for u, v in edges)
        foreign = restricted - self.edge_set
        if foreign:
            raise ValueError(f"edges {sorted(foreign)} are not edges of the graph")
        return restricted

    def to_networkx(self, edges: Optional[Iterable[Edge]] = None) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.vertices)
        h.add_edges_from(sorted(self.restrict(edges)))
        return h


def restricted_adjacency(edges: Iterable[Edge]) -> dict[int, list[int]]:
    """Adjacency lists (sorted) of the subgraph G(F) induced by an edge set."""
    adjacency: dict[int, list[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    for neighbours in adjacency.values():
        neighbours.sort()
    return adjacency


class Cycle(BaseModel):
    """A cycle v_1..v_n (closing edge v_n v_1 implied)."""

    model_config = ConfigDict(frozen=True)

    vertices: tuple[int, ...]

    @field_validator("vertices")
    @classmethod
    def check_simple(cls, vertices):
        if len(vertices) < 3:
            raise ValueError(f"a cycle needs at least 3 vertices, got {len(vertices)}")
        if len(set(vertices)) != len(vertices):
            raise ValueError(f"cycle vertices {vertices} repeat")
        return vertices

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def parity(self) -> Literal["even", "odd"]:
        return "even" if self.length % 2 == 0 else "odd"

    @property
    def edges(self) -> tuple[Edge, ...]:
        """Edges in traversal order, starting with (v_1, v_2)."""
        n = self.length
        return tuple(canonical_edge(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n))

    def canonical(self) -> "Cycle":
        """Rotate to start at the least vertex, oriented towards its lesser neighbour."""
        start = self.vertices.index(min(self.vertices))
        rotated = self.vertices[start:] + self.vertices[:start]
        if rotated[1] > rotated[-1]:
            rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
        return Cycle(vertices=rotated)

    def is_cycle_of(self, edges: Iterable[Edge]) -> bool:
        available = set(edges)
        return all(edge in available for edge in self.edges)
