# equires/schemas/__init__.py

from equires.schemas.basic_object import BasicObjectInput, EmbeddedInput, IdTripleInput
from equires.schemas.report import FailureOutput, ReportOutput, StepOutput, rational

__all__ = [
    "BasicObjectInput",
    "EmbeddedInput",
    "FailureOutput",
    "IdTripleInput",
    "ReportOutput",
    "StepOutput",
    "rational",
]
