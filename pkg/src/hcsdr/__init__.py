"""Single-index sufficient dimension reduction by maximizing an empirical
copula-based Hellinger correlation between ``X @ beta`` and ``Y``.

Typical use::

    >>> import numpy as np
    >>> from hcsdr import validate_dataset, fit_direction, SeedSpec
    >>> rng = np.random.default_rng(0)
    >>> x = rng.standard_normal((200, 4))
    >>> y = np.exp(x[:, 0] + x[:, 1]) + 0.1 * rng.standard_normal(200)
    >>> fit = fit_direction(validate_dataset(x, y), init="sir", seed=SeedSpec(1))
    >>> fit.direction.coords.round(2)  # doctest: +SKIP
    array([0.71, 0.71, 0.  , 0.  ])
"""
__version__ = "0.1.0"

from .core import (
    DataError,
    Dataset,
    DegenerateDirection,
    DomainError,
    FitResult,
    HcsdrError,
    NonFinite,
    NumericError,
    SeedSpec,
    ShapeMismatch,
    SphereAngles,
    TooFewCols,
    TooFewRows,
    UnitDirection,
    validate_dataset,
)
from .copula import (
    AffinityEstimate,
    PseudoSample,
    bhattacharyya_hat,
    closed_form_normal,
    clamp_b,
    h_map,
    hellinger_hat,
    nn_radii,
    rank_transform,
)
from .sphere import from_angles, to_angles
from .initializers import (
    LowSignalWarning,
    SingularCovariance,
    SliceSpec,
    dr_direction,
    random_direction,
    save_direction,
    sir_direction,
    whiten,
)
from .optimizer import (
    AnnealConfig,
    Objective,
    SimplexConfig,
    anneal,
    fit_best,
    fit_direction,
    nelder_mead,
    objective,
)
from .evaluation import (
    SmootherSpec,
    align_sign,
    local_quadratic_predict,
    projection_matrix,
    subspace_delta,
    test_mse,
)
from .models import ModelSpec, gen_predictors, gen_response
from .simulation import ExperimentGrid, ExperimentSummary, run_experiment, summary_csv

__all__ = [name for name, obj in list(globals().items())
           if not name.startswith("_") and not isinstance(obj, type(__import__("sys")))]
