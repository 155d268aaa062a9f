"""Exact computations with symbolic powers of ideals of fat points.

Submodules: :mod:`scalar` (fields), :mod:`poly` (forms), :mod:`linalg`
(echelon forms), :mod:`geometry` (points, schemes, special forms),
:mod:`engine` (graded components, invariants, containment certificates),
:mod:`asymptotics` (Waldschmidt constants and resurgence bounds) and
:mod:`cli` (scenario runner).
"""

from .scalar import cyclotomic_field, finite_field, prime_field, rational_field
from .geometry import FatScheme, Point
from .poly import Form

__version__ = "0.1.0"

__all__ = [
    "FatScheme",
    "Form",
    "Point",
    "cyclotomic_field",
    "finite_field",
    "prime_field",
    "rational_field",
    "__version__",
]
