import numpy as np
import pytest

from tailward import make_model


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def weibull12():
    return make_model("weibull(1,2)")


@pytest.fixture
def edge01():
    return make_model("edge(0,1)")


@pytest.fixture
def edge21():
    return make_model("edge(2,1)")


@pytest.fixture
def pareto12():
    return make_model("pareto(1,2)")


@pytest.fixture
def lognormal01():
    return make_model("lognormal(0,1)")
