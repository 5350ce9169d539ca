"""Nonclassicality invariants of Gaussian optical states under passive transformations."""

from .covariance import (
    MomentMatrices,
    QuadratureCM,
    from_quadrature,
    make_state,
    noisy_twin_beam,
    product,
    purity_check,
    reduce,
    squeezed_thermal,
    squeezed_vacuum,
    symplectic_eigenvalues,
    symplectic_form,
    thermal,
    to_quadrature,
    twin_beam,
    vacuum,
    validate_physical,
)
from .invariants import (
    InvariantReport2,
    InvariantReport3,
    d_minus,
    entanglement_invariant,
    gni_three_mode,
    gni_two_mode,
    lee_depth,
    local_determinant,
    log_negativity,
    simon_invariants,
)
from .passive import PassiveUnitary, apply, beam_splitter, compose, haar_random, phase_shifter

__version__ = "0.1.0"
