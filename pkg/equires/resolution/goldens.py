# equires/resolution/goldens.py

"""
Module: goldens.py

Named worked examples with their expected reports, and golden files from settings.GOLDEN_DIR.

Every golden builds its objects from scratch, runs the library operations it is about and
returns a flat JSON-friendly dict. A replay compares that dict with the stored expectation;
only the expected keys are compared, so a file golden may pin a subset of the report.

Functions:
- Golden.create(name) -> Golden
- list_goldens() -> List[str]
- replay(name) -> GoldenResult
- replay_many(names, jobs) -> List[GoldenResult]: independent replays, on a thread pool when jobs > 1

Usage:
>>> replay("ex6_10").matches
True
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from equires.config import settings
from equires.exceptions import BadInput
from equires.models.basic_object import ROOT_CHART, BasicObject, pre_equivalence_probe
from equires.models.chart import CenterSpec, ChartCenter, CoordinateChange
from equires.operations.delta import delta, delta_power
from equires.operations.ideal import Ideal, parse_ideal
from equires.operations.poly import Poly
from equires.operations.scalar import ArtinScalar
from equires.resolution.contact import check_adapted, inductive_object, is_strongly_permissible
from equires.resolution.equires import equiresolve
from equires.resolution.invariants import homogenized

logger = logging.getLogger(__name__)


def _eps_shift(var: str, value: Fraction, vars, m: int) -> CoordinateChange:
    """v' = v + value·ε."""
    h = Poly.eps(vars, m).scale(ArtinScalar.constant(value, m))
    return CoordinateChange(var, ArtinScalar.one(m), h)


def _lambda_key(value: Fraction) -> str:
    return str(value)


@dataclass
class GoldenResult:
    name: str
    actual: Dict[str, Any]
    expected: Dict[str, Any]

    @property
    def matches(self) -> bool:
        return not self.diff()

    def diff(self) -> List[str]:
        out = []
        for key, value in sorted(self.expected.items()):
            got = self.actual.get(key)
            if got != value:
                out.append(f"{key}: expected {value!r}, got {got!r}")
        return out

    def as_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "matches": self.matches, "actual": self.actual, "diff": self.diff()}


class Golden:
    """Base of the example corpus; subclasses implement run()."""

    name: str = ""
    description: str = ""
    expected: Dict[str, Any] = {}

    @classmethod
    def create(cls, name: str) -> "Golden":
        """
        Factory method for goldens: a built-in example by name, else a file NAME.json in
        settings.GOLDEN_DIR.
        """
        golden_classes = {
            "ex4_2": OrderComparisonGolden,
            "ex_nohay": NoLiftGolden,
            "ex4_6": PreEquivalenceGolden,
            "ex6_9": InductiveNotStrongGolden,
            "ex6_10": InductiveOnlyGolden,
            "ex8_6": SelectedLiftGolden,
        }
        golden_class = golden_classes.get(name.lower())
        if golden_class is not None:
            return golden_class()
        path = _golden_path(name)
        if path is None:
            raise BadInput(f"Unsupported golden: {name}")
        return FileGolden.load(path)

    def run(self) -> Dict[str, Any]:
        raise NotImplementedError  # pragma: no cover

    def replay(self) -> GoldenResult:
        actual = self.run()
        result = GoldenResult(self.name, actual, dict(self.expected))
        if result.matches:
            logger.info("golden %s matches", self.name)
        else:
            logger.warning("golden %s differs: %s", self.name, "; ".join(result.diff()))
        return result


class OrderComparisonGolden(Golden):
    name = "ex4_2"
    description = "(eps*x + y^2 + x^3, b=2) at the origin: fiber order 2 but order 1 over A"
    expected = {"order_at_point_fiber": 2, "nu": 1, "nu_fiber": 2, "in_sing": True, "permissible": False}

    def run(self) -> Dict[str, Any]:
        vars = ("x", "y")
        obj = BasicObject.create(parse_ideal(["eps*x + y^2 + x^3"], vars, 2), 2)
        origin = {v: Fraction(0) for v in vars}
        verdict = obj.is_permissible_center(CenterSpec.of({ROOT_CHART: ChartCenter((), vars)}))
        chart = verdict.charts[0]
        return {
            "order_at_point_fiber": obj.ideal(ROOT_CHART).order_at_point(origin, level="fiber"),
            "nu": chart.nu,
            "nu_fiber": chart.nu_fiber,
            "in_sing": chart.in_sing,
            "permissible": verdict.ok,
        }


class NoLiftGolden(Golden):
    name = "ex_nohay"
    description = "(x^2, eps*x), b=2: the fiber blows up V(x) but no center over A lifts it"
    expected = {"e": 0, "ell": 1, "equisolvable": False, "failure": "NO_PERMISSIBLE_LIFT"}

    def run(self) -> Dict[str, Any]:
        obj = BasicObject.create(parse_ideal(["x^2", "eps*x"], ("x",), 2), 2)
        report = equiresolve(obj)
        return {
            "e": report.e,
            "ell": report.ell,
            "equisolvable": report.equisolvable,
            "failure": None if report.failure is None else report.failure.clause,
        }


class PreEquivalenceGolden(Golden):
    """
    (x^2 + eps*x, 2) against (x^5, eps*x, 2) along the centers V(x + λε).

    x^2 + εx = (x + ε/2)^2 mod ε^2, so the first object is permissible at λ = 1/2 only;
    εx has order 1 along every V(x + λε), so the second never is.
    """

    name = "ex4_6"
    description = "permissibility verdicts of two objects along V(x + lambda*eps)"
    lambdas = (Fraction(0), Fraction(1, 2), Fraction(1))
    expected = {
        "verdicts": {
            "0": [False, False, True, True],
            "1/2": [True, False, True, True],
            "1": [False, False, True, True],
        },
        "pre_equivalent": False,
        "fibers_agree": True,
        "w_equivalent": False,
    }

    def run(self) -> Dict[str, Any]:
        vars, m = ("x",), 2
        first = BasicObject.create(parse_ideal(["x^2 + eps*x"], vars, m), 2)
        second = BasicObject.create(parse_ideal(["x^5", "eps*x"], vars, m), 2)
        sequences = [
            [CenterSpec.of({ROOT_CHART: ChartCenter((_eps_shift("x", lam, vars, m),), ("x",))})]
            for lam in self.lambdas
        ]
        probe = pre_equivalence_probe(first, second, sequences)
        verdicts = {}
        for step in probe.steps:
            key = _lambda_key(self.lambdas[step.sequence])
            verdicts[key] = [step.verdict, step.verdict_other, step.fiber_verdict, step.fiber_verdict_other]
        return {
            "verdicts": verdicts,
            "pre_equivalent": probe.pre_equivalent,
            "fibers_agree": probe.fibers_agree,
            "w_equivalent": probe.w_equivalent,
        }


class _InductiveGolden(Golden):
    """An object, a hypersurface V(z) and a center V(x) of the hypersurface."""

    generators: tuple = ()
    b: int = 1
    delta_generators: Optional[tuple] = None
    lower_generators: tuple = ()

    def run(self) -> Dict[str, Any]:
        vars, m = ("x", "z"), 2
        obj = BasicObject.create(parse_ideal(list(self.generators), vars, m), self.b)
        ideal = obj.ideal(ROOT_CHART)
        hyp = check_adapted(obj, ROOT_CHART, Poly.var("z", vars, m), "z")
        contacts = {ROOT_CHART: hyp}
        lower = inductive_object(obj, contacts, use_homogenized=False)
        lower_ideal = lower.ideal(ROOT_CHART)
        expected_lower = parse_ideal(list(self.lower_generators), ("x",), m)
        verdict = is_strongly_permissible(
            obj, lower, contacts, CenterSpec.of({ROOT_CHART: ChartCenter((), ("x",))})
        )
        chart = verdict.upper.charts[0]
        out = {
            "adapted": hyp.a1,
            "inductive_ideal": lower_ideal.equals(expected_lower),
            "index": lower.b,
            "nu": chart.nu,
            "nu_fiber": chart.nu_fiber,
            "b_permissible": verdict.upper.ok,
            "bz_permissible": verdict.lower.ok,
            "strongly_permissible": verdict.ok,
        }
        if self.delta_generators is not None:
            expected_delta = parse_ideal(list(self.delta_generators), vars, m)
            out["delta"] = delta_power(ideal, self.b - 1).equals(expected_delta)
        if len(lower_ideal.basis()) == 1:
            out["inductive_object"] = f"({lower_ideal.canonical()}, {lower.b})"
        return out


class InductiveNotStrongGolden(_InductiveGolden):
    name = "ex6_9"
    description = "V(x,z) is permissible for the object but not for its inductive object on V(z)"
    generators = ("z^2 + eps*x^2", "z^3 + x^3")
    b = 2
    delta_generators = ("z", "eps*x", "x^2")
    lower_generators = ("eps*x^2", "x^3")
    expected = {
        "adapted": True,
        "delta": True,
        "inductive_ideal": True,
        "index": 2,
        "nu": 2,
        "nu_fiber": 2,
        "b_permissible": True,
        "bz_permissible": False,
        "strongly_permissible": False,
    }


class InductiveOnlyGolden(_InductiveGolden):
    name = "ex6_10"
    description = "V(x) is permissible for the inductive object on V(z) but its lift is not"
    generators = ("x^5 + eps*x^2*z + z^4",)
    b = 4
    lower_generators = ("x^30",)
    expected = {
        "adapted": True,
        "inductive_ideal": True,
        "inductive_object": "((x^30), 24)",
        "index": 24,
        "nu": 3,
        "nu_fiber": 4,
        "b_permissible": False,
        "bz_permissible": True,
        "strongly_permissible": False,
    }


class SelectedLiftGolden(Golden):
    """(y^2, x^3), b=2: among the lifts V(y, x - λε) of the origin only λ = 0 survives."""

    name = "ex8_6"
    description = "(y^2, x^3), b=2 over m=2: one blow-up at the origin resolves over A"
    lambdas = (Fraction(-1), Fraction(0), Fraction(1))
    expected = {
        "delta": True,
        "homogenized": True,
        "inductive_object": "((x^3), 2)",
        "b_permissible": {"-1": True, "0": True, "1": True},
        "selected": ["0"],
        "e": 1,
        "ell": 1,
        "equisolvable": True,
        "center_is_origin": True,
        "sing_after_empty": True,
    }

    def run(self) -> Dict[str, Any]:
        vars, m = ("x", "y"), 2
        obj = BasicObject.create(parse_ideal(["y^2", "x^3"], vars, m), 2)
        ideal = obj.ideal(ROOT_CHART)
        hyp = check_adapted(obj, ROOT_CHART, Poly.var("y", vars, m), "y")
        contacts = {ROOT_CHART: hyp}
        lower = inductive_object(obj, contacts)
        permissible, selected = {}, []
        for lam in self.lambdas:
            shift = _eps_shift("x", -lam, ("x",), m)
            verdict = is_strongly_permissible(
                obj, lower, contacts, CenterSpec.of({ROOT_CHART: ChartCenter((shift,), ("x",))})
            )
            permissible[_lambda_key(lam)] = verdict.upper.ok
            if verdict.ok:
                selected.append(_lambda_key(lam))

        report = equiresolve(obj)
        origin = Ideal.of_vars(vars, vars, m)
        first = report.centers[0].get(ROOT_CHART) if report.centers else None
        return {
            "delta": delta(ideal).equals(parse_ideal(["y", "x^2"], vars, m)),
            "homogenized": homogenized(ideal, 2).equals(parse_ideal(["y^2", "x^2*y", "x^3"], vars, m)),
            "inductive_object": f"({lower.ideal(ROOT_CHART).canonical()}, {lower.b})",
            "b_permissible": permissible,
            "selected": selected,
            "e": report.e,
            "ell": report.ell,
            "equisolvable": report.equisolvable,
            "center_is_origin": first is not None and first.base_ideal(vars, m).equals(origin),
            "sing_after_empty": report.objects[-1].sing_is_empty(),
        }


# ----------------------------------------------------------------------
# golden files
# ----------------------------------------------------------------------
@dataclass
class FileGolden(Golden):
    """
    A JSON golden: {"name", "description"?, "command": "equires" | "resolve", "input": basic
    object document, "expected": {...}}.
    """

    name: str = ""
    description: str = ""
    command: str = "equires"
    document: Dict[str, Any] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def load(cls, path: Path) -> "FileGolden":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise BadInput(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        command = data.get("command", "equires")
        if command not in ("equires", "resolve"):
            raise BadInput(f"{path}: unsupported golden command {command!r}")
        return cls(
            data.get("name", path.stem),
            data.get("description", ""),
            command,
            data.get("input", {}),
            data.get("expected", {}),
        )

    def run(self) -> Dict[str, Any]:
        from equires.schemas.basic_object import BasicObjectInput

        obj = BasicObjectInput.model_validate(self.document).to_object()
        if self.command == "resolve":
            from equires.resolution.driver import resolve_fiber

            tree = resolve_fiber(obj)
            return {"ell": tree.ell, "decreasing": tree.is_decreasing()}
        report = equiresolve(obj)
        return {
            "e": report.e,
            "ell": report.ell,
            "equisolvable": report.equisolvable,
            "failure": None if report.failure is None else report.failure.clause,
            "centers": report.center_strings(),
        }


def _golden_dir() -> Optional[Path]:
    if not settings.GOLDEN_DIR:
        return None
    path = Path(settings.GOLDEN_DIR)
    return path if path.is_dir() else None


def _golden_path(name: str) -> Optional[Path]:
    directory = _golden_dir()
    if directory is None:
        return None
    path = directory / f"{name}.json"
    return path if path.is_file() else None


BUILTIN_GOLDENS = ("ex4_2", "ex_nohay", "ex4_6", "ex6_9", "ex6_10", "ex8_6")


def list_goldens() -> List[str]:
    names = list(BUILTIN_GOLDENS)
    directory = _golden_dir()
    if directory is not None:
        names += sorted(p.stem for p in directory.glob("*.json") if p.stem not in BUILTIN_GOLDENS)
    return names


def replay(name: str) -> GoldenResult:
    return Golden.create(name).replay()


def replay_many(names: Sequence[str], jobs: int = 1) -> List[GoldenResult]:
    """Replay several goldens; results keep the order of `names`."""
    if jobs < 1:
        raise BadInput(f"jobs must be at least 1, got {jobs}")
    goldens = [Golden.create(name) for name in names]
    if jobs == 1 or len(goldens) < 2:
        return [g.replay() for g in goldens]
    logger.info("replaying %d goldens on %d workers", len(goldens), jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda g: g.replay(), goldens))
