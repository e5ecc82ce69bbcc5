from functools import cached_property

from pydantic import BaseModel, ConfigDict, field_validator

from schemas.graph import Edge, EdgeSet, VertexSet, canonical_edge, vertices_of

VertexPartition = tuple[tuple[int, ...], ...]


class EdgePartition(BaseModel):
    """Partites E_1..E_delta: non-empty, pairwise vertex-disjoint edge sets."""

    model_config = ConfigDict(frozen=True)

    partites: tuple[tuple[Edge, ...], ...]

    @field_validator("partites", mode="before")
    @classmethod
    def canonicalize_partites(cls, partites):
        canonical = []
        for partite in partites:
            edges = tuple(sorted({canonical_edge(u, v) for u, v in partite}))
            if not edges:
                raise ValueError("partites must be non-empty")
            canonical.append(edges)
        return tuple(canonical)

    @field_validator("partites")
    @classmethod
    def check_vertex_disjoint(cls, partites):
        seen: set[int] = set()
        for index, partite in enumerate(partites, start=1):
            vertices = vertices_of(partite)
            shared = seen & vertices
            if shared:
                raise ValueError(f"partite E_{index} shares vertices {sorted(shared)} with an earlier partite")
            seen |= vertices
        return partites

    @property
    def delta(self) -> int:
        return len(self.partites)

    @cached_property
    def vertex_sets(self) -> tuple[VertexSet, ...]:
        return tuple(vertices_of(partite) for partite in self.partites)

    @cached_property
    def edges(self) -> EdgeSet:
        return frozenset(edge for partite in self.partites for edge in partite)
