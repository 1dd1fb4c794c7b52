"""
Validated construction parameters.
"""

from enum import Enum
from math import comb
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .error_handler import ArgumentError


class Family(str, Enum):
    """Subspace families the workbench can build."""

    ANTISYMMETRIC_FULL = "antisym"
    ANTISYMMETRIC_SUBSPACE = "antisym-subspace"
    BELL_EXTENSION = "bell-extension"
    PARTHASARATHY = "parthasarathy"

    @property
    def uses_n(self) -> bool:
        return self in (Family.ANTISYMMETRIC_SUBSPACE, Family.BELL_EXTENSION)


def admissible_n(family: Family, d: int) -> tuple[int, int] | None:
    """Inclusive range of the size parameter n, or None when the family ignores it."""
    if family is Family.ANTISYMMETRIC_SUBSPACE:
        return 1, comb(d, 2) - 1
    if family is Family.BELL_EXTENSION:
        return 1, d // 2
    return None


class ConstructionSpec(BaseModel):
    """Parameters selecting one subspace W of C^d ⊗ C^d."""

    model_config = ConfigDict(frozen=True)

    family: Family
    d: int = Field(..., ge=2, description="Local dimension")
    n: int | None = Field(default=None, description="Subspace dimension or number of added Bell states")
    lambdas: list[tuple[float, float]] | None = Field(
        default=None, description="Parthasarathy node set G as (re, im) pairs"
    )
    phases: list[float] | None = Field(default=None, description="Bell-state phases, one per basis index")

    @field_validator("lambdas")
    @classmethod
    def validate_lambdas(cls, v: list[tuple[float, float]] | None) -> list[tuple[float, float]] | None:
        if v is not None and len(v) == 0:
            raise ValueError("lambdas cannot be empty")
        return v

    @model_validator(mode="after")
    def validate_family_ranges(self) -> "ConstructionSpec":
        bounds = admissible_n(self.family, self.d)
        if bounds is not None:
            low, high = bounds
            if self.n is None:
                raise ValueError(f"family {self.family.value} requires n")
            if not low <= self.n <= high:
                raise ValueError(f"n={self.n} outside [{low}, {high}] for family {self.family.value} at d={self.d}")
        if self.lambdas is not None and self.family is not Family.PARTHASARATHY:
            raise ValueError("lambdas only apply to the parthasarathy family")
        if self.lambdas is not None and len(self.lambdas) != 2 * self.d - 1:
            raise ValueError(f"lambdas must contain 2d-1 = {2 * self.d - 1} nodes, got {len(self.lambdas)}")
        if self.phases is not None:
            if self.family is not Family.BELL_EXTENSION:
                raise ValueError("phases only apply to the bell-extension family")
            if len(self.phases) != self.d:
                raise ValueError(f"phases must contain d = {self.d} values, got {len(self.phases)}")
        return self

    @property
    def nodes(self) -> list[complex] | None:
        if self.lambdas is None:
            return None
        return [complex(re, im) for re, im in self.lambdas]

    @property
    def label(self) -> str:
        suffix = f",n={self.n}" if self.n is not None else ""
        return f"{self.family.value}(d={self.d}{suffix})"

    @classmethod
    def build(cls, **fields: Any) -> "ConstructionSpec":
        """Validate fields, reporting failures as ArgumentError."""
        try:
            return cls(**fields)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first.get("loc", ())) or None
            raise ArgumentError(
                f"Invalid construction: {first.get('msg', str(e))}",
                argument=location,
                details={"errors": len(e.errors())},
            ) from e
