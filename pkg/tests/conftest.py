import json
from pathlib import Path

import numpy as np
import pytest

from scroll_lab.cli import data_path
from scroll_lab.curvelab import PlaneQuartic
from scroll_lab.netlab import NetOfQuadrics, discriminant_quartic
from scroll_lab.scrollab import build_line_map, fit_scroll, random_bicanonical_quadric

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def quartic():
    return PlaneQuartic.load(data_path("example_quartic.json"))


@pytest.fixture(scope="session")
def generic_quadric(quartic):
    return random_bicanonical_quadric(quartic, 1)


@pytest.fixture(scope="session")
def generic_lm(generic_quadric, quartic):
    return build_line_map(generic_quadric, quartic, 120, 1)


@pytest.fixture(scope="session")
def generic_octic(generic_lm):
    return fit_scroll(generic_lm.lines(range(60)), 6, 1,
                      validation_lines=generic_lm.lines(range(60, 120)))


@pytest.fixture(scope="session")
def example_net():
    net = NetOfQuadrics.load(data_path("example_net.json"))
    discriminant_quartic(net)
    return net


@pytest.fixture(scope="session")
def gamma(example_net):
    from scroll_lab.netlab import gamma_samples
    return gamma_samples(example_net, 120, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())
