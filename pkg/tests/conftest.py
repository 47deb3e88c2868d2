import warnings

import numpy as np
import pytest

import snaptf
from snaptf.loewner import TruncationRuleWarning


def make_realization(model, params, eps=1e-7):
    """Full pipeline helper: snapshots -> pencil -> truncated realization."""
    snaps = snaptf.SnapshotSet.from_model(model, params)
    partition = snaptf.alternating_partition(snaps.params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationRuleWarning)
        pencil = snaptf.build_pencil(snaps, partition)
        r = snaptf.truncation_rank(pencil, eps)
    return pencil, snaptf.realize(pencil, r)


def random_affine_model(rng):
    """Integer-valued affine model (exact float arithmetic) with random rank."""
    size = int(rng.integers(2, 9))
    n = size - 1
    while True:
        rank1 = int(rng.integers(1, size + 1))
        g1 = (
            rng.integers(-2, 3, size=(size, rank1))
            @ rng.integers(-2, 3, size=(rank1, size))
        ).astype(float)
        if np.any(g1):
            break
    g0 = rng.integers(-3, 4, size=(size, size)).astype(float)
    return snaptf.ParametricModel(n=n, n_i=1, n_o=1, gamma=(g0, g1))


def random_poly_model(rng, max_degree=4):
    """Integer-valued polynomial model of random degree <= max_degree."""
    size = int(rng.integers(2, 7))
    degree = int(rng.integers(0, max_degree + 1))
    gamma = [
        rng.integers(-3, 4, size=(size, size)).astype(float) for _ in range(degree + 1)
    ]
    while degree > 0 and not np.any(gamma[-1]):
        gamma[-1] = rng.integers(-3, 4, size=(size, size)).astype(float)
    return snaptf.ParametricModel(n=size - 1, n_i=1, n_o=1, gamma=tuple(gamma))


def random_partition(rng, n_p=None):
    """Alternating partition over distinct random integer sample points."""
    n_p = n_p or int(rng.integers(2, 9))
    points = rng.choice(np.arange(-12, 13), size=n_p, replace=False).astype(float)
    return snaptf.alternating_partition(points)


@pytest.fixture(scope="session")
def toy_model():
    return snaptf.builtin("toy")


@pytest.fixture(scope="session")
def toy_params():
    return np.linspace(0.0, 100.0, 4)


@pytest.fixture(scope="session")
def toy_pencil_realization(toy_model, toy_params):
    return make_realization(toy_model, toy_params)


@pytest.fixture(scope="session")
def toy_realization(toy_pencil_realization):
    return toy_pencil_realization[1]


@pytest.fixture(scope="session")
def poly_model():
    return snaptf.builtin("polynomial")


@pytest.fixture(scope="session")
def poly_params():
    return np.linspace(0.0, 100.0, 8)


@pytest.fixture(scope="session")
def poly_realization(poly_model, poly_params):
    return make_realization(poly_model, poly_params)[1]
