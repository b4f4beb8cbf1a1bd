"""Cartan bundles, gauge groupoids and multiplicative forms as numeric checks."""
from .numkit import DEFAULT_TOL, Subspace, Tolerances
from .report import CheckReport
from .sampling import Sampler

__version__ = "0.1.0"

__all__ = ["DEFAULT_TOL", "Subspace", "Tolerances", "CheckReport", "Sampler", "__version__"]
