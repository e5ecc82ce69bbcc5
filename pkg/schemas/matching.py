from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from schemas.graph import Edge, EdgeSet, Graph, canonical_edge


class FractionalMatching(BaseModel):
    """An exact-rational edge weighting f: E -> [0, 1] with every vertex sum at most 1.

    Only edges of positive weight are stored, so `weights` is exactly E(f).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: Graph
    weights: dict[Edge, Fraction]

    @field_validator("weights", mode="before")
    @classmethod
    def normalize_weights(cls, weights):
        normalized = {}
        for (u, v), weight in dict(weights).items():
            weight = Fraction(weight)
            if weight != 0:
                normalized[canonical_edge(u, v)] = weight
        return dict(sorted(normalized.items()))

    @model_validator(mode="after")
    def check_matching(self):
        for edge, weight in self.weights.items():
            if edge not in self.graph.edge_set:
                raise ValueError(f"{edge} is not an edge of the graph")
            if not 0 < weight <= 1:
                raise ValueError(f"weight {weight} of {edge} lies outside [0, 1]")
        for v, total in enumerate(self.vertex_sums):
            if total > 1:
                raise ValueError(f"vertex {v} has incident weight {total} > 1")
        return self

    def weight(self, edge: Edge) -> Fraction:
        return self.weights.get(canonical_edge(*edge), Fraction(0))

    @property
    def support(self) -> EdgeSet:
        return frozenset(self.weights)

    @property
    def range(self) -> frozenset[Fraction]:
        return frozenset(self.weights.values())

    @property
    def size(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @cached_property
    def vertex_sums(self) -> tuple[Fraction, ...]:
        sums = [Fraction(0)] * self.graph.vertex_count
        for (u, v), weight in self.weights.items():
            sums[u] += weight
            sums[v] += weight
        return tuple(sums)

    def vertex_sum(self, v: int) -> Fraction:
        return self.vertex_sums[v]

    @property
    def is_perfect(self) -> bool:
        return all(total == 1 for total in self.vertex_sums)

    def is_equivalent(self, other: "FractionalMatching") -> bool:
        return self.vertex_sums == other.vertex_sums

    def is_contained_in(self, other: "FractionalMatching") -> bool:
        return self.support <= other.support

    def with_weights(self, weights: Mapping[Edge, Fraction]) -> "FractionalMatching":
        return FractionalMatching(graph=self.graph, weights=weights)

    def restricted_to(self, edges: Iterable[Edge]) -> "FractionalMatching":
        keep = set(edges)
        return self.with_weights({e: w for e, w in self.weights.items() if e in keep})
