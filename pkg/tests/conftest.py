import numpy as np
import pytest

from geometry.matrices import Mat2


def random_metzler(rng: np.random.Generator, count: int) -> list[Mat2]:
    """Metzler matrices with diagonal in [-5, 5] and off-diagonals in (0, 5]"""
    diag = rng.uniform(-5.0, 5.0, size=(count, 2))
    off = 5.0 - rng.uniform(0.0, 5.0, size=(count, 2))
    return [Mat2(float(d[0]), float(o[0]), float(o[1]), float(d[1])) for d, o in zip(diag, off)]


def as_array(m: Mat2) -> np.ndarray:
    return np.array([[m.a11, m.a12], [m.a21, m.a22]])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def metzler_ensemble(rng: np.random.Generator) -> list[Mat2]:
    return random_metzler(rng, 10_000)


@pytest.fixture
def small_metzler_ensemble(rng: np.random.Generator) -> list[Mat2]:
    return random_metzler(rng, 200)
