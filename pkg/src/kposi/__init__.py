"""Sign-regular matrices, sign variations, and discrete-time k-positive systems."""
from .classify import (
    NOT_SR,
    SR_NOT_SSR,
    SSR,
    OrderClassification,
    SsrReport,
    VdpReport,
    Witness,
    classify_all,
    classify_order,
    verify_vdp,
)
from .core import compound, enumerate_sequences, minor, multiply, sequence_position
from .dynamics import TrajectoryTrace, WedgeTrace, perron, simulate, wedge, wedge_dynamics
from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateSpectrumError,
    DimensionError,
    KposiError,
    NotFoundError,
    ParseError,
    PreconditionError,
)
from .generators import (
    GeneratorSpec,
    fixture,
    gen_contractive_tp,
    gen_ssr_k_only,
    gen_totally_positive,
    generate,
)
from .signvar import ConeMembership, SignVarResult, cone_membership, s_minus, s_plus, sign_variations
from .spectral import SeparationCheck, SpectralSplit, hitting_time, spectral_split, verify_separation
from .tolerances import DEFAULT as DEFAULT_TOLERANCES
from .tolerances import ToleranceProfile

__version__ = "0.1.0"
