"""Quantum SU(2) invariants of closed oriented 3-manifolds.

The package computes the level-r invariant of a closed oriented
3-manifold, possibly containing a colored framed trivalent graph, along
two independent routes:

  * a state sum over colorings of a shadow polyhedron (`shadow`), and
  * skein-theoretic evaluation of a surgery presentation (`surgery`).

Both routes rest on the same exact Kauffman bracket engine (`tl`) and
recoupling constants (`recoupling`), built over exact cyclotomic
arithmetic (`arith`).  Agreement of the two routes on overlapping inputs
is the package's main internal consistency check.
"""

from .arith import ComplexValue, LaurentFraction, LaurentScalar, RootContext

__version__ = "0.1.0"

__all__ = [
    "RootContext",
    "LaurentScalar",
    "LaurentFraction",
    "ComplexValue",
    "__version__",
]
