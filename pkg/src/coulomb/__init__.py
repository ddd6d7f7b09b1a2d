"""Exact computations of Coulomb branches of 3d N=4 gauge theories.

The abelian ring (with quantization, gradings and masses) comes from explicit
structure constants; Hilbert series come from the monopole formula, and the
Higgs side from Molien constant terms.
"""
from .abelian import (
    AlgebraElement,
    GradingSpec,
    TorusTheory,
    commutator,
    degree,
    delta_dimension,
    generic_fiber_witness,
    monopole_generator,
    multiply,
    poisson_bracket,
    topological_charge,
    with_masses,
)
from .errors import (
    ClosureError,
    CoulombError,
    DimensionError,
    DivergenceError,
    EmbeddingDegenerateError,
    IncompleteGeneratorsError,
    NonGenericPointError,
)
from .higgs import HiggsInput, duality_check, higgs_hilbert_series, invariant_count_series
from .lattice import DualSequence, IntMatrix, cokernel_charges, pairing, restrict_weights, smith_normal_form
from .monopole import (
    NonabelianTheory,
    QuiverData,
    algebra_hilbert_series,
    dressing_factor,
    monopole_delta,
    monopole_hilbert_series,
    quiver_to_theory,
)
from .presentation import Presentation, find_relations, graded_basis, reduce_presentation, verify_presentation
from .series import GradedSeries

__version__ = "0.1.0"
