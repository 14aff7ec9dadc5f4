# equires/schemas/base.py

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from equires.config import settings
from equires.operations.poly import EPS_NAME, Poly, parse_poly


class RingMixin(BaseModel):
    """Schema version, truncation order and coordinates shared by every input document"""
    schema_version: Literal[1] = Field(1, alias="schema", examples=[1])
    m: int = Field(examples=[2])
    vars: List[str] = Field(min_length=1, examples=[["x", "y"]])

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    @field_validator("m")
    @classmethod
    def validate_m(cls, value: int) -> int:
        if value < 1 or value > settings.MAX_M:
            raise ValueError(f"m must lie in 1..{settings.MAX_M}, got {value}")
        return value

    @field_validator("vars")
    @classmethod
    def validate_vars(cls, value: List[str]) -> List[str]:
        if len(set(value)) != len(value):
            raise ValueError(f"Duplicate variable names in {value}")
        for name in value:
            if name == EPS_NAME:
                raise ValueError(f"'{EPS_NAME}' is reserved for the nilpotent parameter")
            if not name.isidentifier():
                raise ValueError(f"Invalid variable name {name!r}")
        return value

    def poly(self, text: str) -> Poly:
        return parse_poly(text, self.vars, self.m)


class EMember(BaseModel):
    """One hypersurface of E"""
    label: str = Field(min_length=1, examples=["H1"])
    equation: str = Field(min_length=1, examples=["x"])

    model_config = ConfigDict(extra="forbid")


class EMixin(RingMixin):
    """Optional list E of hypersurfaces with distinct labels"""
    E: List[EMember] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_members(self) -> "EMixin":
        labels = [h.label for h in self.E]
        if len(set(labels)) != len(labels):
            raise ValueError(f"Duplicate E labels in {labels}")
        for h in self.E:
            self.poly(h.equation)
        return self

    def members(self):
        return [(h.label, self.poly(h.equation)) for h in self.E]
