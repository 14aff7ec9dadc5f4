# equires/schemas/basic_object.py

from typing import List

from pydantic import Field, field_validator, model_validator

from equires.models.basic_object import BasicObject, IdTriple
from equires.operations.ideal import parse_ideal
from equires.schemas.base import EMixin


class IdealMixin(EMixin):
    ideal: List[str] = Field(min_length=1, examples=[["y^2", "x^3"]])

    @model_validator(mode="after")
    def validate_ideal(self) -> "IdealMixin":
        for text in self.ideal:
            self.poly(text)
        return self


class BasicObjectInput(IdealMixin):
    """Schema for basic_object.json: (A^n, I, b, E) over Q[eps]/(eps^m)"""
    b: int = Field(examples=[2])
    exceptional: List[str] = Field(default_factory=list)

    @field_validator("b")
    @classmethod
    def validate_b(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"b must be at least 1, got {value}")
        return value

    @model_validator(mode="after")
    def validate_exceptional(self) -> "BasicObjectInput":
        labels = {h.label for h in self.E}
        unknown = [lab for lab in self.exceptional if lab not in labels]
        if unknown:
            raise ValueError(f"Exceptional labels {unknown} are not E-members")
        return self

    def to_object(self) -> BasicObject:
        ideal = parse_ideal(self.ideal, self.vars, self.m)
        return BasicObject.create(ideal, self.b, self.members(), self.exceptional)


class IdTripleInput(IdealMixin):
    """Schema for idtriple.json: (A^n, I, E)"""

    def to_triple(self) -> IdTriple:
        return IdTriple.create(parse_ideal(self.ideal, self.vars, self.m), self.members())


class EmbeddedInput(EMixin):
    """Schema for embedded.json: a subvariety X of A^n and E"""
    X: List[str] = Field(min_length=1, examples=[["y^2 - x^3"]])

    @model_validator(mode="after")
    def validate_x(self) -> "EmbeddedInput":
        for text in self.X:
            self.poly(text)
        return self

    def to_triple(self) -> IdTriple:
        return IdTriple.create(parse_ideal(self.X, self.vars, self.m), self.members())
