"""Numerical constants used throughout the package."""

import math

EULER_GAMMA = 0.5772156649015329

SQRT_PI = math.sqrt(math.pi)

# Double precision cannot honour tolerances below ~1e-13; accuracy
# exponents beyond this are clamped.
MAX_ACCURACY_EXPONENT = 13
