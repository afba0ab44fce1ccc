"""Exact arithmetic for n-complements of curve and surface pairs."""
from .core import ComplementsError, CoveringFailure, DomainError, MalformedInput, NoDecomposition
from .curves import CurvePair, classify, find_n_complement, is_n_complement
from .diophantine import CoveringProblem, RestrictionData, construct_covering_set, find_complementary_n
from .hyperstandard import GammaSpec, low_approx
from .rounding import round_coeff
from .surfaces import DivisorExpr, SurfaceModel, zariski_decompose

__version__ = "0.1.0"
