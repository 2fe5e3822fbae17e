"""Integer factorization by classically simulated heat diffusion on weighted Cayley graphs."""

__version__ = "0.1.0"

from .cayley import (
    CayleyGraph,
    PowerTable,
    RepetitionWitness,
    additive_model,
    build_cayley_graph,
    build_power_table,
    find_repetition,
    weight_alpha,
)
from .diffusion import (
    SpectralData,
    StepLedger,
    WalkState,
    fourier_coefficients,
    half_lazy_step,
    measure,
    run_walk,
    spectral_data,
    spectral_walk_oracle,
    verify_korobov_bound,
)
from .factor import (
    FactorOutcome,
    NoAnswer,
    Path,
    TrialReport,
    compute_s,
    exhaustive_success_rate,
    factor_once,
    factor_with_retries,
    higher_repetition_scan,
    lift_order,
    square_root_factor,
)
from .numtheory import (
    Residue,
    crt_profile,
    cyclic_power_order,
    gcd,
    mod_pow,
    order_bruteforce,
    p_success,
    screen_input,
    two_adic_split,
)
from .orderfind import (
    CandidateInterval,
    ErrorBound,
    MeasureSet,
    Mode,
    OrderFindConfig,
    OrderResult,
    candidate_interval,
    decode_order,
    find_order,
    required_steps,
    verify_candidates,
)
