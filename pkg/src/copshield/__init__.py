"""Cops and robbers on graphs with small vertex covers.

Exact solving, a game engine with adversarial verification, protection
strategies with certificates, and the closed-form bounds they are measured
against.
"""

from .errors import CopShieldError
from .graph import Geodesic, Graph

__version__ = "0.1.0"

__all__ = ["CopShieldError", "Geodesic", "Graph", "__version__"]
