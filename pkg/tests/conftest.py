# tests/conftest.py
import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]  # корень репозитория
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from afgroupoid.bratteli import BratteliDiagram, dim_vector  # noqa: E402
from afgroupoid.dynsys import canonical_system  # noqa: E402
from afgroupoid.examples import car_diagram, gicar_diagram  # noqa: E402

DATA = ROOT / "data"


def make_random_diagram(seed: int, levels: int = 3, max_paths: int = 48) -> BratteliDiagram:
    """Случайная валидная диаграмма: до 3 вершин на уровне, ограниченное число путей"""
    rng = random.Random(seed)
    while True:
        matrices = []
        rows = 1
        for _ in range(levels):
            cols = rng.randint(1, 3)
            matrix = [[rng.choice((0, 0, 1, 1, 2, 3)) for _ in range(cols)] for _ in range(rows)]
            for j in range(cols):
                if not any(matrix[i][j] for i in range(rows)):
                    matrix[rng.randrange(rows)][j] = 1
            for i in range(rows):
                if not any(matrix[i]):
                    matrix[i][rng.randrange(cols)] = 1
            matrices.append(tuple(tuple(row) for row in matrix))
            rows = cols
        diagram = BratteliDiagram(edge_matrices=tuple(matrices))
        if sum(dim_vector(diagram, levels)) <= max_paths:
            return diagram


@pytest.fixture
def car():
    return car_diagram(4)


@pytest.fixture
def gicar():
    return gicar_diagram(5)


@pytest.fixture
def car_system(car):
    return canonical_system(car, 3)


@pytest.fixture
def random_diagrams():
    return [make_random_diagram(seed) for seed in range(20)]


@pytest.fixture
def deep_random_diagrams():
    return [make_random_diagram(seed, levels=4, max_paths=24) for seed in range(20)]


@pytest.fixture
def five_level_diagrams():
    return [make_random_diagram(seed, levels=5, max_paths=40) for seed in range(20)]


@pytest.fixture
def car_file(tmp_path):
    path = tmp_path / "car.diagram"
    path.write_text((DATA / "car.diagram").read_text(encoding="utf-8"), encoding="utf-8")
    return str(path)


@pytest.fixture
def data_dir():
    return DATA
