"""Walsh-Hadamard analysis and coset-ring decomposition on F_2^n."""

from .fourier import (
    BACKEND,
    RealFn,
    Spectrum,
    convolve,
    indicator,
    inner,
    iwht,
    lp_norm,
    spec_lp_norm,
    wht,
)
from .gf2 import Ambient, AmbientMismatch, Subgroup, full, rref_span, trivial
from .spectral import (
    AlmostIntFn,
    NotAlmostInteger,
    SupportCertificate,
    a_norm,
    approx_hom_defect,
    coset_spectral_mass,
    find_spectral_support,
    is_spectrally_supported,
    pd_apply,
    pd_eval,
    psi,
    round_to_int,
)
from .additive import (
    ConcentrationParams,
    PointSet,
    SearchBudgetExceeded,
    SetStats,
    ZeroInSet,
    bogolyubov_subgroup,
    find_concentration_subgroup,
    is_arithmetically_connected,
    iterated,
    nu4,
    s_eta,
    set_stats,
    spec_set,
    sumset,
)
from .decompose import (
    CosetRingExpr,
    DecomposeParams,
    DecomposeReport,
    SignedCosetTerm,
    SubgroupTerm,
    coset_to_subgroups,
    decompose,
    evaluate,
    inductive_step,
    trivial_expr,
)

__version__ = "0.1.0"
