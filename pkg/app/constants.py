"""
Application constants and enums.
"""
from enum import Enum, IntEnum
from typing import Final


# Environment variables
ENV_OUTPUT_DIR: Final[str] = "NRSPIN_OUTPUT_DIR"
ENV_LOG_LEVEL: Final[str] = "NRSPIN_LOG_LEVEL"
ENV_CONFIG_FILE: Final[str] = "NRSPIN_CONFIG"

DEFAULT_OUTPUT_DIR: Final[str] = "results"
DEFAULT_LOG_LEVEL: Final[str] = "INFO"
DEFAULT_SEED: Final[int] = 20240601

# Algebraic tolerances
TOL_EXACT: Final[float] = 1e-14
TOL_IDENTITY: Final[float] = 1e-12
TOL_ANTICOMMUTATOR: Final[float] = 1e-11
TOL_SPECTRUM_RELATIVE: Final[float] = 1e-10
TOL_DECOMPOSE: Final[float] = 1e-13

# Finite-difference oracles
FD_MOMENTUM_STEP: Final[float] = 1e-5
FD_TIME_STEP: Final[float] = 1e-3
TOL_GRADIENT: Final[float] = 1e-8
TOL_TRAJECTORY: Final[float] = 1e-7

# Dynamics
DEFAULT_DIM: Final[int] = 1
DEFAULT_POINTS_1D: Final[int] = 4096
DEFAULT_POINTS_3D: Final[int] = 64
DEFAULT_P_MAX: Final[float] = 8.0
DEFAULT_P_MAX_3D: Final[float] = 0.6
DEFAULT_SIGMA_P: Final[float] = 0.05
DEFAULT_T_MAX: Final[float] = 200.0
DEFAULT_T_MAX_3D: Final[float] = 64.0
DEFAULT_SAMPLES: Final[int] = 2048
DEFAULT_SAMPLES_3D: Final[int] = 256
MIN_ZBW_SAMPLES: Final[int] = 256
MIN_ZBW_PERIODS: Final[float] = 10.0
COVERAGE_SIGMAS: Final[float] = 6.0
RESOLUTION_POINTS: Final[float] = 2.0
MODE_CACHE_SIZE: Final[int] = 4
TOL_NORM: Final[float] = 1e-10
TOL_EHRENFEST: Final[float] = 1e-6
TOL_POSITION_CROSSCHECK: Final[float] = 1e-6
ALIASING_MASS: Final[float] = 1e-6
ALIASING_EDGE_FRACTION: Final[float] = 0.05
EHRENFEST_POINTS: Final[int] = 16
ZBW_ZERO_PADDING: Final[int] = 8
ZBW_AMPLITUDE_FLOOR: Final[float] = 1e-12
ZBW_PEAK_PROMINENCE: Final[float] = 10.0
ZBW_FREQUENCY_TOLERANCE: Final[float] = 0.02
ZBW_AMPLITUDE_TOLERANCE: Final[float] = 0.10
PAULI_AMPLITUDE_BOUND: Final[float] = 1e-10

# Lie algebra
TOL_CLOSURE: Final[float] = 1e-12
TOL_JACOBI: Final[float] = 1e-10
TOL_KILLING_ZERO: Final[float] = 1e-9
SO42_DIMENSION: Final[int] = 15

# Serialization
FLOAT_FORMAT: Final[str] = ".17g"
REPORT_TEMPLATE: Final[str] = "report.txt.j2"
REPORT_FILE: Final[str] = "{command}_report.txt"
SERIES_FILE: Final[str] = "{command}_{model}.csv"
SPECTRUM_FILE: Final[str] = "spectrum.csv"

# Random momentum batches for the identity suites
DEFAULT_P_BATCH: Final[int] = 100
DEFAULT_P_BATCH_RADIUS: Final[float] = 10.0
GRADIENT_BATCH: Final[int] = 20
ORACLE_BATCH: Final[int] = 20
ORACLE_MOMENTUM_RADIUS: Final[float] = 3.0
ORACLE_T_MAX: Final[float] = 100.0
SPECTRUM_POINTS: Final[int] = 65


class HamiltonianKind(str, Enum):
    """Free-particle model used for an evolution."""
    PAPER = "paper"
    DIRAC = "dirac"
    PAULI = "pauli"


class ModelSelection(str, Enum):
    """Model selection accepted on the command line."""
    PAPER = "paper"
    DIRAC = "dirac"
    PAULI = "pauli"
    ALL = "all"


class UnitSystem(str, Enum):
    """Unit system of a run."""
    NATURAL = "natural"
    CUSTOM = "custom"


class CheckStatus(str, Enum):
    """Outcome of a single verification check."""
    PASS = "pass"
    FAIL = "fail"
    REPORTED = "reported"


class ExitCode(IntEnum):
    """Process exit codes of the command-line tool."""
    OK = 0
    CHECK_FAILED = 1
    USAGE = 2
    IO = 3


class Command(str, Enum):
    """Sub-commands of the command-line tool."""
    ALGEBRA = "algebra"
    SPECTRUM = "spectrum"
    ZBW = "zbw"
    LIE = "lie"
    COMPARE = "compare"
    REPORT = "report"


# Error Messages
class ErrorMessages:
    """Error message constants."""
    GRID_TOO_SMALL = "grid too small: p_max={p_max} < |p0|+{sigmas}*sigma_p={needed}"
    GRID_TOO_COARSE = (
        "grid too coarse: sigma_p={sigma_p} spans fewer than {points} nodes of spacing {spacing}"
    )
    GRID_NOT_POWER_OF_TWO = "points per axis must be a power of two, got {n}"
    GRID_BAD_DIMENSION = "grid dimension must be 1 or 3, got {dim}"
    ZERO_SPINOR_WEIGHT = "spinor weight must be nonzero"
    NONPOSITIVE_WIDTH = "sigma_p must be positive, got {sigma_p}"
    NONPOSITIVE_CONSTANT = "physical constant {name} must be strictly positive, got {value}"
    NONFINITE_MOMENTUM = "momentum components must be finite, got {p}"
    NONFINITE_TIME = "time must be finite, got {t}"
    TIMES_NOT_INCREASING = "series times must be strictly increasing"
    TIMES_NOT_UNIFORM = "zitterbewegung analysis needs uniformly spaced times"
    TRANSVERSE_MOMENTUM_1D = "a 1D grid carries momentum along z only, got p0={p0}"
    TOO_FEW_SAMPLES = "zitterbewegung analysis needs at least {needed} samples, got {got}"
    TOO_FEW_PERIODS = "series spans {periods:.2f} periods at the peak frequency, needs {needed}"
    UNKNOWN_GENERATOR = "unknown generator {name!r}; known: {known}"
    NOT_A_REAL_FORM = "structure constants are not real (max |Im f| = {imag:.3e})"
    CLOSURE_FAILED = "closure failed for pair ({a}, {b}) with residual {residual:.3e}"
    BAD_CONFIG_LINE = "config line {line}: expected 'key = value', got {text!r}"
    UNKNOWN_CONFIG_KEY = "unknown config key {key!r}"
    INVALID_CONFIG = "invalid configuration: {detail}"
    CONFIG_NOT_FOUND = "config file not found: {path}"
    OUTPUT_NOT_WRITABLE = "cannot write output file {path}: {detail}"
    BAD_SERIES_FILE = "malformed series file {path}: {detail}"
    BAD_REPORT_FILE = "cannot read report file {path}: {detail}"
    BAD_REPORT_LINE = "report line {line} does not follow the schema: {text!r}"


# Success Messages
class SuccessMessages:
    """Success message constants."""
    ALL_CHECKS_PASSED = "all {count} checks passed"
    CHECKS_FAILED = "{failed} of {count} checks failed: {names}"
    SERIES_WRITTEN = "series written to {path}"
    REPORT_WRITTEN = "report written to {path}"


# Source quotations attached to each check
class References:
    """Short quotations locating each check."""
    CLIFFORD = "we use the metric signature g(+---)"
    GAMMA5 = "gamma_5 = gamma_0 gamma_1 gamma_2 gamma_3 in the Dirac representation"
    GAMMA_FACTOR = "where Gamma = -i beta gamma_5"
    HAMILTONIAN = "written now as the Hamiltonian operator"
    SQUARE = "If we square this equation"
    DISPERSION = "including its rest energy"
    VELOCITY = "velocity operator is given by the Heisenberg"
    ANTICOMMUTATOR = "where E = +sqrt(c^2 p^2 + m0^2 c^4)"
    VELOCITY_DERIVATIVE = "can be regarded as a differential equation"
    ETA = "Let us define the operator"
    ETA_EVOLUTION = "Solving for eta_i we get"
    TRAJECTORY = "can be integrated to yield"
    SCHRODINGER = "corresponding Schroedinger equation is written"
    REST_FRAME = "For the electron at rest (p_i = 0)"
    SO42 = "form a so(4,2) Lie algebra"
    PAULI = "the Pauli equation does not describe Zitterbewegung"
    ARTIFACT = "artifact plumbing"


# Adjudication notes attached to reports
class Adjudications:
    """Discrepancies between the printed formulas and the verified algebra."""
    OQ1 = (
        "{H, v_i} = 2 E p_i / m0 with E = sqrt(c^2 p^2 + m0^2 c^4) fails; the exact "
        "identity holds with E = sqrt(H^2) = m0 c^2 + p^2/2m0 (residual_exact vs residual_paper)."
    )
    OQ2 = (
        "The printed q_i(t) carries exp(2iHt/hbar) twice (once inside eta_i(t)) and a factor c; "
        "it does not differentiate to v_i(t). The corrected antiderivative "
        "E H^-1 p_i t/m0 - (i hbar/2) H^-1 (exp(2iHt/hbar) - 1) eta_i(0) is verified instead."
    )
    OQ3 = (
        "S_k = -(hbar/2) alpha_i alpha_j is anti-Hermitian; the Hermitian spin is "
        "S_k = (hbar/2) Sigma_k with Sigma_k = -i alpha_i alpha_j (cyclic)."
    )
    OQ4 = (
        "The listed operators close only over the complex numbers with their printed phases; "
        "the beta-adjoint real form (beta X^dagger beta = -X) is identified by matching the "
        "Killing signature of the canonical so(4,2) generators with metric diag(+,+,+,+,-,-)."
    )
    GAMMA5_PHASE = (
        "gamma^0 gamma^1 gamma^2 gamma^3 equals -i times the block-antidiagonal identity; "
        "gamma_5 is fixed as i gamma^0 gamma^1 gamma^2 gamma^3 so that Gamma is Hermitian."
    )
