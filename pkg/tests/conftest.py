import numpy as np
import pytest

from criticalgabor import atom, gabor_transform, hermite_signal

T8 = 8.0
H64 = 1.0 / 64.0


@pytest.fixture(scope="session")
def hermites():
    return [hermite_signal(n) for n in range(4)]


@pytest.fixture(scope="session")
def e0():
    return atom((0, 0))


@pytest.fixture(scope="session")
def h2_field(hermites):
    return gabor_transform(hermites[2])


@pytest.fixture()
def rng():
    return np.random.default_rng(7)


def random_smooth(rng, count=1, orders=8, T=T8, h=H64):
    """Seeded unit-norm combinations of low hermites; smooth test family."""
    from criticalgabor import SampledSignal

    basis = [hermite_signal(n, T, h) for n in range(orders)]
    out = []
    for _ in range(count):
        a = rng.normal(size=(orders, 2)) @ np.array([1.0, 1.0j])
        a = a / np.linalg.norm(a)
        out.append(SampledSignal(T, h, sum(ai * b.values for ai, b in zip(a, basis))))
    return out
