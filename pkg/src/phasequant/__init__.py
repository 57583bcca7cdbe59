"""Phase-space quantization toolkit."""
__version__ = "0.1.0"

from .grid import (
    GridMismatchError,
    GridSpec,
    PhasePoint,
    PhaseSpaceField,
    Signal,
    fourier,
    inverse_fourier,
    l2_inner,
    phase_space_inner,
    sigma,
    symplectic_fourier,
)
from .transforms import (
    CohenMultiplier,
    born_jordan_distribution,
    cross_ambiguity,
    cross_wigner,
    direct_tau_wigner_oracle,
    marginals,
    rihaczek,
    tau_wigner,
    theta_multiplier,
    wigner,
)
from .quantizers import (
    GaussianSymbol,
    GridSymbol,
    HeisenbergParams,
    KineticPotential,
    Magnetic,
    Monomial,
    OperatorMatrix,
    PlaneWave,
    Quadratic,
    bj_to_weyl_symbol,
    build_op_bj,
    build_op_tau,
    build_op_weyl,
    heisenberg_matrix,
    kernel_tau_oracle,
    quantize_named,
    weak_matrix_element,
)
from .symbolic import NCPoly, OrderingRule, normal_form, order_monomial, render
from .signals import Gaussian, Hermite, chirp, two_gaussian
from .covariance import MetalinearElement, Residual
from .config import ConfigError, RunConfig, load_config
from .io import FormatError
from .verify import SUITES, run_suite
