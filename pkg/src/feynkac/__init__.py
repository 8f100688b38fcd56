"""feynkac: transition densities, fundamental solutions, and exponential-
functional expectations for a catalog of one-dimensional diffusions, computed
by symmetry reduction, with an independent numerical verification harness."""

from . import errors, specfun, riccati, symmetry, catalog, verify

__version__ = "0.1.0"
__all__ = ["errors", "specfun", "riccati", "symmetry", "catalog", "verify",
           "__version__"]
