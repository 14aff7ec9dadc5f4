# tests/conftest.py

import json
import logging
import random
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

import pytest
from faker import Faker

from equires.config import settings
from equires.models.basic_object import BasicObject
from equires.operations.ideal import Ideal, parse_ideal
from equires.operations.poly import Poly, parse_poly

# ======================================================================================
# Logging Configuration
# ======================================================================================
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# ======================================================================================
# Random Data
# ======================================================================================
fake = Faker()
Faker.seed(12345)

SEED = 12345
VARS = ("x", "y")

logger.info(f"Test settings: MAX_M={settings.MAX_M}, MAX_DIM={settings.MAX_DIM}")


# ======================================================================================
# Helper Functions
# ======================================================================================
def random_poly_text(rng: random.Random, vars: Sequence[str], m: int, degree: int = 4, terms: int = 3) -> str:
    """A random polynomial over Q[eps]/(eps^m) as text; never the zero polynomial."""
    pieces = []
    for _ in range(terms):
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        k = rng.randrange(m)
        exps = [rng.randrange(degree + 1) for _ in vars]
        factors = [str(coeff)]
        if k:
            factors.append(f"eps^{k}")
        factors += [f"{v}^{e}" for v, e in zip(vars, exps) if e]
        pieces.append("*".join(factors))
    text = " + ".join(pieces)
    return text if not parse_poly(text, vars, m).is_zero() else f"{vars[0]}^{degree}"


def random_ideal(rng: random.Random, vars: Sequence[str] = VARS, m: int = 2, gens: int = 2) -> Ideal:
    """Random ideal with nonzero fiber (dim <= 2, deg <= 4, m <= 3)."""
    texts = [random_poly_text(rng, vars, m) for _ in range(gens)]
    ideal = parse_ideal(texts, vars, m)
    if ideal.fiber().is_zero():
        ideal = ideal.add_poly(Poly.var(vars[0], vars, m) ** 2)
    return ideal


def origin_permissible_object(rng: random.Random, vars: Sequence[str] = VARS, m: int = 2) -> BasicObject:
    """
    Random object (I, b) for which the origin is a permissible center.

    I is a random ideal, multiplied by the maximal ideal when it has order 0 at the origin; adding
    x^k with k = ν(I, 0) makes the fiber order equal to k, and b = k.
    """
    ideal = random_ideal(rng, vars, m)
    origin = {v: 0 for v in vars}
    if ideal.order_at_point(origin) == 0:
        ideal = ideal * Ideal.of_vars(vars, vars, m)
    k = ideal.order_at_point(origin)
    return BasicObject.create(ideal.add_poly(Poly.var(vars[0], vars, m) ** k), k)


def make_object(gens: List[str], b: int, vars: Sequence[str] = VARS, m: int = 2, E=(), exceptional=()) -> BasicObject:
    ideal = parse_ideal(gens, vars, m)
    members = [(label, parse_poly(text, vars, m)) for label, text in E]
    return BasicObject.create(ideal, b, members, exceptional)


def object_document(gens: List[str], b: int, vars: Sequence[str] = VARS, m: int = 2, E=()) -> Dict[str, Any]:
    return {
        "schema": 1,
        "m": m,
        "vars": list(vars),
        "ideal": list(gens),
        "b": b,
        "E": [{"label": label, "equation": eq} for label, eq in E],
    }


# ======================================================================================
# Fixtures
# ======================================================================================
@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


@pytest.fixture
def build_object() -> Callable[..., BasicObject]:
    return make_object


@pytest.fixture
def cusp_object() -> BasicObject:
    """(y^2, x^3), b=2 over Q[eps]/(eps^2)."""
    return make_object(["y^2", "x^3"], 2)


@pytest.fixture
def write_document(tmp_path: Path) -> Callable[[Dict[str, Any], str], Path]:
    def _write(document: Dict[str, Any], name: str = "input.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def fake_label() -> str:
    return fake.unique.lexify(text="H????").upper()


# ======================================================================================
# Command-line options
# ======================================================================================
def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run tests marked as slow"
    )


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="use --run-slow to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
