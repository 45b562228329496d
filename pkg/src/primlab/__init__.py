"""Erdős sums of primitive sets, layer sums gamma_k(z), strong-prime certificates and z-densities."""

__version__ = "0.1.0"

from ._core import BACKEND  # noqa: E402
from . import arith, density, errors, mertens, primsets, special, strongprime  # noqa: E402

__all__ = ["BACKEND", "arith", "density", "errors", "mertens", "primsets", "special", "strongprime",
           "__version__"]
