from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

RegimeKind = Literal["few", "many", "too-many"]


class Regime(BaseModel):
    """Where delta sits against the thresholds |V|/2 and beta'(G)."""

    model_config = ConfigDict(frozen=True)

    kind: RegimeKind
    vertex_count: int = Field(ge=0)
    delta: int = Field(ge=1)
    beta_prime: int = Field(ge=0)

    @model_validator(mode="after")
    def check_kind(self):
        if self.delta >= self.beta_prime:
            expected = "too-many"
        elif 2 * self.delta <= self.vertex_count:
            expected = "few"
        else:
            expected = "many"
        if self.kind != expected:
            raise ValueError(f"delta={self.delta} with |V|={self.vertex_count}, beta'={self.beta_prime} is {expected}, not {self.kind}")
        return self

    @property
    def overlaps_few(self) -> bool:
        """True on perfect-matching graphs with delta = |V|/2 = beta'."""
        return self.kind == "too-many" and 2 * self.delta <= self.vertex_count
