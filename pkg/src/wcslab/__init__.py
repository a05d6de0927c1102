"""Numerical laboratory for semigroups of weighted composition operators on spaces of analytic functions in the unit disk."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    NumericalError,
    ValidationError,
    WcsLabError,
)
from .grids import Grids, Tolerances  # noqa: E402
from .means import SpaceSpec, Weight, norm  # noqa: E402
from .semiflow import Generator, boundary_model, dilation, make_generator  # noqa: E402
from .series import ClosedForm, PowerSeries, expand  # noqa: E402
from .verdict import CriterionVerdict, Verdict  # noqa: E402

__all__ = [
    "ClosedForm",
    "CriterionVerdict",
    "Generator",
    "Grids",
    "NumericalError",
    "PowerSeries",
    "SpaceSpec",
    "Tolerances",
    "ValidationError",
    "Verdict",
    "Weight",
    "WcsLabError",
    "__version__",
    "boundary_model",
    "dilation",
    "expand",
    "make_generator",
    "norm",
]
