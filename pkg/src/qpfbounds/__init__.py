"""Success-probability analysis of quantum period finding and phase estimation."""

from ._backend import BACKEND
from .errors import CapacityError, DomainError, OverlapError

__version__ = "0.1.0"

__all__ = ["BACKEND", "CapacityError", "DomainError", "OverlapError", "__version__"]
