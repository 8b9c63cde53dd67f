"""Weierstrass zeta, its Eisenstein completion, and the theta/eta/E2 machinery
needed to check that the completion is doubly periodic."""

from .lattice import (
    DEFAULT_POLICY,
    LatticeVector,
    NotInUpperHalfPlane,
    PoleAtLatticePoint,
    TauParameter,
    TauTooCloseToRealAxis,
    TruncationPolicy,
    format_complex,
    make_tau,
    parse_complex,
    reduce_mod_lattice,
    shell_vectors,
    volume,
)
from .modular import (
    QSeriesTerms,
    dedekind_eta,
    eisenstein_e2,
    g2,
    g2_star,
    index_zero_quotient,
    jacobi_theta,
    raise_theta,
    theta_prime,
    theta_sigma_residual,
)
from .verify import IdentityCheck, SampleSpec, report_json, run_suite
from .weierstrass import (
    Scheme,
    ZetaHatDecomposition,
    quasi_periods,
    s_regularized_sum,
    sigma_product,
    wp_lattice,
    zeta_hat,
    zeta_lattice,
)

__version__ = "0.1.0"
