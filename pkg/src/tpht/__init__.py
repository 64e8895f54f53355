"""Totally positive Hessenberg-Toeplitz matrices: construction, LU dynamics, spectra and random-symbol ensembles."""

from ._jit import backend
from .errors import (
    ComplexSpectrum,
    DegenerateFactorization,
    ImagResidueTooLarge,
    NoConvergence,
    NumericalError,
    RepeatedEigenvalue,
    SingularBlock,
    SpectrumMismatch,
    VerificationFailed,
    ZeroLeadingMinor,
    ZeroPivot,
)
from .symbols import Symbol, elementary_symmetric, poly_power_truncated, symbol_eval
from .matrices import (
    HessBand,
    TPReport,
    companion_matrix,
    epsilon_lambda,
    is_totally_positive,
    one_norm_bound,
    tau_init,
    tpht_band,
    tpht_truncation,
)
from .factorization import (
    LUFactors,
    LusztigFactors3,
    chop_values,
    lu_closed_form,
    lu_doolittle,
    lu_dynamics_iterate,
    lu_dynamics_step,
    lusztig_factor_3,
    schur_complement,
)
from .spectra import (
    OscillationReport,
    SpectrumResult,
    check_oscillation,
    eigen_hessenberg,
    esd_average,
    esd_histogram,
    esd_moment,
    piecewise_nodes,
    sign_variations,
)
from .gs_asymptotics import GSLimit, bessel_I0, binom_mp_p, gs_average_quadrature, gs_moment_exact
from .ensemble import (
    DistSpec,
    EnsembleRun,
    MomentBounds,
    bernoulli_moment_law,
    expected_moment_lognormal,
    ks_distance,
    run_ensemble,
)
from .normal_forms import (
    NormalFormBundle,
    companion_to_epsilon_L,
    eigenfunction_factorized,
    epsilon_diagonalizer,
    to_companion_L,
)

__version__ = "0.1.0"
