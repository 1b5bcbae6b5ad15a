"""Exact rigidity analysis of Einstein metrics as Ricci solitons.

Builds the Laplace eigenspace E(2 mu) on round spheres, complex projective
spaces and their products, evaluates the cubic obstruction
``int v^2 w dV`` exactly over the rationals, and assembles rigidity reports.
"""
from .manifolds import (
    EigenfunctionBasis,
    FubiniStudy,
    HermitianForm,
    Product,
    Sphere,
    build_E2mu,
    diagonalize,
    parse_manifold,
    spectrum_contains,
    weak_rigidity_check,
)
from .moments import (
    complex_monomial_moment,
    integrate,
    integrate_product,
    integrate_sphere,
    real_monomial_moment,
)
from .obstruction import (
    CubicGramTensor,
    RigidityReport,
    analyze,
    diagonal_criterion,
    gram_tensor,
    kernel_family,
    obstruction_check,
    obstruction_check_direct,
)
from .poly import (
    Gaussian,
    HarmonicSplit,
    Poly,
    Segment,
    flat_laplacian,
    harmonic_decompose,
    multiply,
    parse,
    serialize,
)
from .verify import (
    McConfig,
    gradient_identity_check,
    identity_suite,
    mc_integrate,
)

__version__ = "0.1.0"
