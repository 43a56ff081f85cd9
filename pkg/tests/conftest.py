import math
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from maghodge.complex import from_cells  # noqa: E402
from maghodge.field import MagneticPotential  # noqa: E402
from maghodge.generators import gen_random  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SEED = 0xC0FFEE


def k3(theta=0.0):
    """Simple triangle a, b, c with alpha = theta on each side a->b->c->a."""
    T = from_cells("abc", [("a", "b"), ("b", "c"), ("a", "c")], [("a", "b", "c")])
    alpha = MagneticPotential.from_function(
        T, lambda u, v: theta if (u, v) in (("a", "b"), ("b", "c")) else -theta)
    return T.with_alpha(alpha.values), alpha


@pytest.fixture
def triangle():
    return k3()


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(params=[1, 2, 3, 4])
def random_complex(request):
    T, a = gen_random(request.param, 9, edge_density=0.45, face_density=0.7)
    return T, a


__all__ = ["k3", "SEED", "math"]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
