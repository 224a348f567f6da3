from __future__ import annotations

from pathlib import Path

import pytest

from syzmodel.instance import load_instance, load_instance_text
from syzmodel.polyhedra import LatticePolytope
from syzmodel.sigma import build_sigma
from syzmodel.subdivision import HeightFunction

ROOT = Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"
CORPUS = ("cubic_d2", "pyramid_d3", "simplex_d4")

CUBIC = [(-1, -1), (2, -1), (-1, 2)]
PYRAMID = [(0, 0, 1), (2, 0, -1), (-2, 0, -1), (0, 2, -1), (0, -2, -1)]
SIMPLEX4 = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]
RUNNING = {(0, 0): 2, (-1, -1): 0, (-1, 0): 1, (-1, 2): 1, (2, -1): 1}


def instance_json(vertices, seed=0, **extra) -> str:
    import json

    data = {"name": "t", "d": len(vertices[0]), "delta_vertices": [list(v) for v in vertices], "seed": seed}
    data.update(extra)
    return json.dumps(data)


@pytest.fixture(scope="session")
def corpus():
    return {name: load_instance(INSTANCES / f"{name}.json") for name in CORPUS}


@pytest.fixture(scope="session")
def sigmas(corpus):
    return {name: build_sigma(inst.S, inst.T) for name, inst in corpus.items()}


@pytest.fixture(scope="session")
def cubic_auto():
    """The planar pair with seeded generic heights on both sides."""
    return load_instance_text(instance_json(CUBIC))


@pytest.fixture(scope="session")
def running_lambda() -> HeightFunction:
    return HeightFunction(RUNNING)


@pytest.fixture(scope="session")
def cubic() -> LatticePolytope:
    return LatticePolytope.from_points(CUBIC)


@pytest.fixture(scope="session")
def pyramid() -> LatticePolytope:
    return LatticePolytope.from_points(PYRAMID)


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
