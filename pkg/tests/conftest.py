import numpy as np
import pytest

from hcsdr import SeedSpec, validate_dataset
from hcsdr.models import ModelSpec, gen_predictors, gen_response


def make_model_data(model="I", n=200, seed=0, kind="normal"):
    spec = ModelSpec.standard(model, kind)
    s = SeedSpec(seed, 0, ("test", model, kind, n))
    x = gen_predictors(kind, n, s)
    return validate_dataset(x, gen_response(x, spec, s)), spec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
