import random
from pathlib import Path

import pytest

from eukleia.kernel import AngleLit, angle_from_slope_vector

CORPUS_DIR = Path(__file__).resolve().parent.parent / "src" / "eukleia" / "corpus"


def ang(x: int, y: int) -> AngleLit:
    return angle_from_slope_vector(x, y)


def random_angle(rng: random.Random, bound: int = 50) -> AngleLit:
    while True:
        x = rng.randint(-bound, bound)
        y = rng.randint(1, bound)
        if x or y:
            return angle_from_slope_vector(x, y)


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR
