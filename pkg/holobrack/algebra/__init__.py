from .space import PhaseSpace, PhasePoint
from .poly import Poly
from .bracket import poisson_bracket, partial, evaluate

__all__ = ["PhaseSpace", "PhasePoint", "Poly", "poisson_bracket", "partial", "evaluate"]
