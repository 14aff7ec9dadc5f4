# equires/schemas/report.py

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from equires.models.basic_object import BasicObject
from equires.resolution.driver import ResolutionTree, StepRecord
from equires.resolution.embedded import EmbeddedReport, PrincipalizationReport
from equires.resolution.equires import EquiresReport

TraceLevel = Literal["none", "steps", "full"]


def rational(value) -> str:
    """'p/q' for a rational, plain digits for an integer value."""
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def chart_ideals(obj: BasicObject) -> Dict[str, str]:
    return {cid: str(obj.ideal(cid)) for cid in sorted(obj.chart_ids())}


class StepOutput(BaseModel):
    j: int
    kind: str
    max_omega: str = Field(examples=["1"])
    max_t: List[Any] = Field(examples=[["1", 0]])
    gamma: Optional[List[str]] = None
    centers: Dict[str, str] = Field(default_factory=dict)
    ideals: Optional[Dict[str, str]] = None

    @classmethod
    def from_step(cls, step: StepRecord, obj: Optional[BasicObject] = None) -> "StepOutput":
        gamma = None if step.gamma is None else [rational(v) for v in step.gamma.as_tuple()]
        return cls(
            j=step.j,
            kind=step.kind,
            max_omega=rational(step.max_omega),
            max_t=[rational(step.max_t[0]), step.max_t[1]],
            gamma=gamma,
            centers=dict(sorted(step.centers.items())),
            ideals=None if obj is None else chart_ideals(obj),
        )


class FailureOutput(BaseModel):
    j: int
    clause: str
    message: str


class ReportOutput(BaseModel):
    """Schema for report.json"""
    schema_version: Literal[1] = Field(1, alias="schema")
    command: str
    e: Optional[int] = None
    ell: Optional[int] = None
    equisolvable: Optional[bool] = None
    failure: Optional[FailureOutput] = None
    flags: List[str] = Field(default_factory=list)
    steps: List[StepOutput] = Field(default_factory=list)
    centers: Optional[List[Dict[str, str]]] = None
    charts: Optional[Dict[str, str]] = None
    details: Optional[Dict[str, Any]] = None

    model_config = ConfigDict(populate_by_name=True)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True, indent=2)

    # ------------------------------------------------------------------
    # builders
    # ------------------------------------------------------------------
    @classmethod
    def from_tree(cls, command: str, tree: ResolutionTree, trace: TraceLevel = "steps") -> "ReportOutput":
        return cls(
            command=command,
            ell=tree.ell,
            steps=_steps(tree, trace),
            charts=chart_ideals(tree.objects[-1]) if trace == "full" else None,
        )

    @classmethod
    def from_equires(cls, command: str, report: EquiresReport, trace: TraceLevel = "steps") -> "ReportOutput":
        failure = None
        if report.failure is not None:
            failure = FailureOutput(j=report.failure.j, clause=report.failure.clause, message=report.failure.message)
        return cls(
            command=command,
            e=report.e,
            ell=report.ell,
            equisolvable=report.equisolvable,
            failure=failure,
            flags=[f"step {f.j} [{f.where}]: {f.message}" for f in report.flags],
            steps=_steps(report.tree, trace),
            centers=[dict(sorted(c.items())) for c in report.center_strings()],
            charts=chart_ideals(report.objects[-1]) if trace == "full" else None,
        )

    @classmethod
    def from_principalization(cls, result: PrincipalizationReport, trace: TraceLevel = "steps") -> "ReportOutput":
        out = cls.from_equires("principalize", result.equires, trace)
        out.details = {
            "monomial": result.monomial,
            "already_monomial": result.already_monomial,
            "equiprincipalizable": result.equiprincipalizable,
            "exponents": {cid: dict(sorted(exps.items())) for cid, exps in sorted(result.exponents.items())},
        }
        return out

    @classmethod
    def from_embedded(cls, result: EmbeddedReport, trace: TraceLevel = "steps") -> "ReportOutput":
        out = cls.from_equires("embedded", result.equires, trace)
        out.details = {
            "eta": result.eta,
            "codim": result.codim,
            "level": result.level,
            "resolved_over_A": result.resolved_over_A,
            "smooth": result.smooth,
            "snc": result.snc,
            "transversal": result.transversal,
            "strict": {cid: str(ideal) for cid, ideal in sorted(result.strict.items())},
        }
        return out


def _steps(tree: ResolutionTree, trace: TraceLevel) -> List[StepOutput]:
    if trace == "none":
        return []
    full = trace == "full"
    return [StepOutput.from_step(s, tree.objects[s.j] if full else None) for s in tree.steps]
