"""Almost primes represented by products of binary quadratic forms.

Exact local densities, lattice classes, the DHR sieve functions and a
desk-scale experiment runner.
"""

from .errors import SieveError
from .forms import FormSystem, QuadraticForm, build_system, g3_system, worked_system
from .localdensity import omega_closed, rho, rho_star
from .regions import Region

__all__ = [
    "FormSystem",
    "QuadraticForm",
    "Region",
    "SieveError",
    "build_system",
    "g3_system",
    "omega_closed",
    "rho",
    "rho_star",
    "worked_system",
]
__version__ = "0.1.0"
