import math

import numpy as np
import pytest

from hcsdr.core import SeedSpec
from hcsdr.models import ModelSpec, UnknownModel, gen_predictors, gen_response, nonsparse_eta


def test_normal_moments():
    x = gen_predictors("normal", 10_000, SeedSpec(0))
    assert x.shape == (10_000, 10)
    assert np.all(np.abs(x.mean(axis=0)) < 0.05)
    assert np.all(np.abs(x.var(axis=0) - 1) < 0.1)


def test_nonnormal_moments():
    x = gen_predictors("nonnormal", 20_000, SeedSpec(1))
    assert abs(x[:, 2].mean() - 5) < 0.2
    assert abs(x[:, 0].mean() - 0.5) < 0.02  # rate 2
    assert abs(x[:, 1].mean() - 0.25) < 0.01  # rate 4
    xm = gen_predictors("nonnormal", 20_000, SeedSpec(1), exp_mean=True)
    assert abs(xm[:, 0].mean() - 2) < 0.1
    assert abs(xm[:, 1].mean() - 4) < 0.2


def test_generators_deterministic():
    a = gen_predictors("nonnormal", 50, SeedSpec(5, 2))
    assert np.array_equal(a, gen_predictors("nonnormal", 50, SeedSpec(5, 2)))
    spec = ModelSpec.standard("III")
    assert np.array_equal(gen_response(a, spec, SeedSpec(1)), gen_response(a, spec, SeedSpec(1)))


def _one_row_with_index(eta, value):
    e = np.asarray(eta, dtype=float)
    return (value * e / (e @ e))[None, :]


def test_link_formulas():
    spec = ModelSpec("I", ModelSpec.standard("I").eta, noise_sd=0.0)
    x = _one_row_with_index(spec.eta, 2.0)
    assert gen_response(x, spec, SeedSpec(0))[0] == pytest.approx(4.0)
    spec = ModelSpec("III", ModelSpec.standard("III").eta, noise_sd=0.0)
    x = _one_row_with_index(spec.eta, math.pi / 2)
    assert gen_response(x, spec, SeedSpec(0))[0] == pytest.approx(5.0)
    spec = ModelSpec("II", (1, 1, 1, 1, 1, 0, 0, 0, 0, 0), noise_sd=0.0)
    assert gen_response(np.zeros((1, 10)), spec, SeedSpec(0))[0] == 1.0


def test_nonsparse_eta():
    np.testing.assert_allclose(nonsparse_eta("I"), np.ones(10) / math.sqrt(10), rtol=1e-15)
    e2 = nonsparse_eta("II")
    assert sorted(np.round(e2 * math.sqrt(10), 12)) == [-1.0] * 5 + [1.0] * 5
    assert abs(np.linalg.norm(nonsparse_eta("III")) - 1) < 1e-12


def test_unknown_model():
    with pytest.raises(UnknownModel):
        ModelSpec.standard("IV")
    with pytest.raises(ValueError):
        gen_predictors("weird", 5, SeedSpec(0))
