"""Numerical laboratory for half-harmonic maps on the periodic line.

Exact Fourier multiplier calculus on a flat torus, Littlewood-Paley
decomposition and paraproducts, computable function-space norms, the
three-term commutators with their cancellation diagnostics, and a
sphere-constrained gradient flow with energy-decay diagnostics.
"""

from .spectral import (
    TorusGrid,
    ScalarField,
    VectorField,
    MatrixField,
    Spectrum,
    make_grid,
    analyze,
    synthesize,
    apply_multiplier,
    frac_laplacian,
    riesz,
    derivative,
    integral,
    mean,
    random_field,
)
from .dyadic import DyadicPartition, build_partition, block, low_pass, pi1, pi2, pi3, maximal
from .norms import (
    Region,
    sobolev,
    sobolev_total,
    neg_half_dual,
    gagliardo,
    bmo,
    besov_inf,
    hardy,
    local_l2_sq,
    localization_sides,
    poincare_ratio,
)
from .commutators import (
    wedge_matrix,
    dot_matrix,
    op_T,
    op_S,
    op_R3,
    op_S_tilde,
    anti_term,
    structure_residual,
    euler_residual_forms,
    estimate_ratios,
    EstimateRatios,
)
from .flow import (
    SphereField,
    FlowParams,
    FlowReport,
    l_energy,
    degree_map,
    perturb,
    random_unit_map,
    tangential_gradient,
    solve,
    el_residual,
    morrey_profile,
    fit_beta,
    annuli_constant,
    decay_exponent,
    seq_check,
)

__version__ = "0.1.0"
