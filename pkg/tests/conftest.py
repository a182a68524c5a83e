import math

import numpy as np
import pytest

from ringvortex.radial_core import Profile, build_grid

LN2 = math.log(2.0)


def tent_values(r, a=1.0, b=1.0):
    """Closed-form tent (b/a) min(r, 2a - r), written out independently of the package."""
    return np.where(r <= a, b / a * r, b / a * (2 * a - r))


def random_profile(grid, rng, kind="rough"):
    if kind == "rough":
        vals = rng.normal(size=grid.N) * rng.uniform(0.1, 5.0)
    else:
        r = grid.interior / grid.R
        k = np.arange(1, 7)
        coef = rng.normal(size=k.size) / k**1.5
        vals = np.sin(np.pi * np.outer(r, k)) @ coef * rng.uniform(0.1, 5.0)
    return Profile.from_interior(grid, vals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def tent_grid():
    # R = 2 with a node at r = a = 1
    return build_grid(2.0, 4095)


@pytest.fixture(scope="session")
def tent(tent_grid):
    return Profile.from_function(tent_grid, tent_values)


# criterion id -> (passed, description, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(key):
        digits = "".join(c for c in key if c.isdigit())
        return int(digits), key

    for key in sorted(ACCEPTANCE, key=order):
        ok, desc, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key:>2}. {desc}: {detail}")
