from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

Subcommand = Literal["analyze", "min-edge-cover", "fpm", "reduce", "partition", "construct-ne", "verify-ne", "classify"]

REQUIRED_OPTIONS: dict[str, tuple[str, ...]] = {
    "partition": ("delta",),
    "construct-ne": ("alpha", "delta"),
    "verify-ne": ("profile_path",),
    "classify": ("delta",),
}


def _flag(option: str) -> str:
    return "--" + option.removesuffix("_path").replace("_", "-")


class Command(BaseModel):
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    graph_path: Path
    alpha: Optional[int] = Field(default=None, ge=1)
    delta: Optional[int] = Field(default=None, ge=1)
    profile_path: Optional[Path] = None
    matching_path: Optional[Path] = None
    bound: Optional[int] = Field(default=None, ge=0)
    pure: bool = False

    @model_validator(mode="after")
    def check_required_options(self):
        missing = [name for name in REQUIRED_OPTIONS.get(self.subcommand, ()) if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.subcommand} requires {', '.join(_flag(m) for m in missing)}")
        return self


class CommandResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    exit_status: int
    report: str = ""
    diagnostic: Optional[str] = None
