"""
tubal-solve - low-tubal-rank tensor recovery by factorized gradient descent.
"""

__version__ = "0.1.0"

from .errors import TubalError

__all__ = ["TubalError", "__version__"]
