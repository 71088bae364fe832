"""Geometric calculus on parametric submanifolds of Euclidean space."""
__version__ = "0.1.0"

from .algebra import Multivector  # noqa: E402

__all__ = ["Multivector", "__version__"]
