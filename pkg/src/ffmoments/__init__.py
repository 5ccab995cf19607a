"""Moments of traces of Frobenius for families of order-r Dirichlet characters over F_q[T].

Three independent routes: exact enumeration over the family of r-th-power-free
moduli, a combinatorial q -> infinity limit, and weighted integrals over the
unitary group.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BadCongruence,
    BadInput,
    DivideByZeroPoly,
    EmptyFamily,
    NearSingularWeight,
    NotPowerFree,
    NotPrime,
    SingularSeries,
    TooLarge,
    TypeMismatch,
    ZeroElement,
)
from .estimate import Method, MomentEstimate  # noqa: E402
from .finite_field import FieldContext, FieldElement, embed_unity, make_context  # noqa: E402
from .partitions import DecompTuple, Partition  # noqa: E402
from .polyring import Factorization, Poly  # noqa: E402

__all__ = [
    "BadCongruence", "BadInput", "DivideByZeroPoly", "EmptyFamily", "NearSingularWeight", "NotPowerFree",
    "NotPrime", "SingularSeries", "TooLarge", "TypeMismatch", "ZeroElement", "Method", "MomentEstimate",
    "FieldContext", "FieldElement", "embed_unity", "make_context", "DecompTuple", "Partition", "Factorization",
    "Poly",
]
