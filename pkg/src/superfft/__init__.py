"""Exact super linear algebra and invariant-theory checks for OSp and the periplectic group."""

from .grassmann import GPoly, RingSpec, gp_add, gp_divide_exact, gp_mul, parse_gpoly
from .superlinalg import SuperDim, SuperMatrix, berezinian

__version__ = "0.1.0"
