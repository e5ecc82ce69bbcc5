from fractions import Fraction
from functools import cached_property
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from schemas.graph import Edge, EdgeSet, Graph, VertexSet, canonical_edge


def _normalize_distribution(distribution, key):
    normalized = {}
    for item, probability in dict(distribution).items():
        probability = Fraction(probability)
        if probability < 0:
            raise ValueError(f"negative probability {probability} on {item}")
        if probability > 0:
            normalized[key(item)] = probability
    return dict(sorted(normalized.items()))


class MixedProfile(BaseModel):
    """sigma: one distribution over V per attacker and one over E per defender.

    Zero entries are dropped on construction, so every stored key lies in
    the player's support.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: Graph
    attacker_strategies: tuple[dict[int, Fraction], ...]
    defender_strategies: tuple[dict[Edge, Fraction], ...]

    @field_validator("attacker_strategies", mode="before")
    @classmethod
    def normalize_attackers(cls, strategies):
        return tuple(_normalize_distribution(s, int) for s in strategies)

    @field_validator("defender_strategies", mode="before")
    @classmethod
    def normalize_defenders(cls, strategies):
        return tuple(_normalize_distribution(s, lambda e: canonical_edge(*e)) for s in strategies)

    @model_validator(mode="after")
    def check_distributions(self):
        if not self.attacker_strategies or not self.defender_strategies:
            raise ValueError("a profile needs at least one attacker and one defender")
        for index, strategy in enumerate(self.attacker_strategies):
            if any(v not in self.graph.vertices for v in strategy):
                raise ValueError(f"attacker {index} plays a vertex outside the graph")
            if sum(strategy.values(), Fraction(0)) != 1:
                raise ValueError(f"attacker {index} distribution does not sum to 1")
        for index, strategy in enumerate(self.defender_strategies):
            if any(e not in self.graph.edge_set for e in strategy):
                raise ValueError(f"defender {index} plays an edge outside the graph")
            if sum(strategy.values(), Fraction(0)) != 1:
                raise ValueError(f"defender {index} distribution does not sum to 1")
        return self

    @property
    def alpha(self) -> int:
        return len(self.attacker_strategies)

    @property
    def delta(self) -> int:
        return len(self.defender_strategies)

    def attacker_support(self, a: int) -> VertexSet:
        return frozenset(self.attacker_strategies[a])

    def defender_support(self, d: int) -> EdgeSet:
        return frozenset(self.defender_strategies[d])

    @cached_property
    def attacker_supports(self) -> VertexSet:
        """Supports_sigma(A)."""
        return frozenset(v for strategy in self.attacker_strategies for v in strategy)

    @cached_property
    def defender_supports(self) -> EdgeSet:
        """Supports_sigma(D)."""
        return frozenset(e for strategy in self.defender_strategies for e in strategy)


class PureProfile(BaseModel):
    """s: one vertex per attacker, one edge per defender."""

    model_config = ConfigDict(frozen=True)

    graph: Graph
    attacker_choices: tuple[int, ...]
    defender_choices: tuple[Edge, ...]

    @field_validator("defender_choices", mode="before")
    @classmethod
    def canonicalize_choices(cls, choices):
        return tuple(canonical_edge(u, v) for u, v in choices)

    @model_validator(mode="after")
    def check_choices(self):
        if not self.attacker_choices or not self.defender_choices:
            raise ValueError("a profile needs at least one attacker and one defender")
        for v in self.attacker_choices:
            if v not in self.graph.vertices:
                raise ValueError(f"attacker vertex {v} is outside the graph")
        for edge in self.defender_choices:
            if edge not in self.graph.edge_set:
                raise ValueError(f"defender edge {edge} is not an edge of the graph")
        return self

    @property
    def alpha(self) -> int:
        return len(self.attacker_choices)

    @property
    def delta(self) -> int:
        return len(self.defender_choices)

    def attackers_on(self, v: int) -> int:
        """|A_s(v)|."""
        return sum(1 for choice in self.attacker_choices if choice == v)

    def defenders_on(self, v: int) -> int:
        """|D_s(v)|."""
        return sum(1 for edge in self.defender_choices if v in edge)

    def to_mixed(self) -> MixedProfile:
        return MixedProfile(
            graph=self.graph,
            attacker_strategies=tuple({v: 1} for v in self.attacker_choices),
            defender_strategies=tuple({edge: 1} for edge in self.defender_choices),
        )


class Violation(BaseModel):
    """A strictly improving unilateral deviation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    player: Literal["attacker", "defender"]
    index: int
    deviation: Union[int, Edge]
    current_utility: Fraction
    deviation_utility: Fraction

    @property
    def gain(self) -> Fraction:
        return self.deviation_utility - self.current_utility


class NeReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    is_ne: bool
    min_hit: Fraction
    defense_ratio: Optional[Fraction]
    is_defense_optimal: bool
    violations: tuple[Violation, ...] = ()
    total_defender_utility: Fraction
    defender_supports_edge_cover: bool
    attacker_supports_vertex_cover: bool
    maxhit_vertices: tuple[int, ...] = ()
    maxhitters: tuple[int, ...] = ()
    profile_classes: tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_verdict(self):
        if self.is_ne == bool(self.violations):
            raise ValueError("is_ne must hold exactly when there are no violations")
        if self.is_ne and (self.min_hit == 0 or self.defense_ratio != 1 / self.min_hit):
            raise ValueError("an equilibrium's defense ratio must equal 1/MinHit")
        return self

    def violations_of(self, player: str, index: int) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.player == player and v.index == index)
