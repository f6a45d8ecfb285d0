"""Optimal quadrature with endpoint derivatives in the Sobolev space L2^(m)(0,1).

>>> from optquad import build
>>> f = build(3, 8)
>>> round(float(sum(f.C)), 12)
1.0
"""

__version__ = "0.1.0"

from .errors import ParameterError, SingularSystemError
from .euler_frobenius import EulerFrobeniusPoly, RootSet, euler_polynomial, unit_disk_roots
from .optimal_system import SystemMatrix, SystemSolution, assemble, solve
from .formula import QuadratureFormula, build, build_with_parts
from .error_norm import ErrorNorm, Method, build_extremal, norm_sq_closed, norm_sq_direct, pair_with_functional
from .oracle import WienerHopfSolution, solve_full

__all__ = [
    "ParameterError",
    "SingularSystemError",
    "EulerFrobeniusPoly",
    "RootSet",
    "euler_polynomial",
    "unit_disk_roots",
    "SystemMatrix",
    "SystemSolution",
    "assemble",
    "solve",
    "QuadratureFormula",
    "build",
    "build_with_parts",
    "ErrorNorm",
    "Method",
    "build_extremal",
    "norm_sq_closed",
    "norm_sq_direct",
    "pair_with_functional",
    "WienerHopfSolution",
    "solve_full",
]
