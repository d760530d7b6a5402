"""Index, eta-invariant and Nahm rank-profile toolkit for caloron boundary
data on the circle times R^3, with Chern-Weil quadrature verification."""

from .boundary import (
    BoundaryData,
    EigenvalueReduction,
    Line,
    fredholm_check,
    indicial_invertible,
    reduce_eigenvalue,
    shift,
    spectral_gap,
    validate,
)
from .callias import (
    IndexBreakdown,
    callias_index_mode,
    charge_closed_form,
    index_total,
    positive_subbundle_c1,
)
from .eta import (
    EtaReport,
    eta_index_identity,
    eta_bar_lim,
    eta_mu_closed,
    eta_mu_spectral,
    hurwitz_zeta_em,
)
from .errors import (
    ChernSumNonzero,
    NonPositivePeriod,
    NotFredholm,
    OnLattice,
    PatchBoundaryStencil,
    RankTooSmall,
    SupportCollision,
)
from .fields import (
    ClutchingMap,
    FieldConfig,
    clutching_degree_oracle,
    curvature_at,
    decay_report,
    make_clutching_map,
    make_monopole_pullback,
    make_twisted_caloron,
)
from .nahm import (
    NahmProfile,
    extend_profile,
    jump_points,
    profile_consistency_check,
    rank_profile,
)
from .quadrature import (
    GridSpec,
    NumericReport,
    boundary_face_integral,
    chern_simons_consistency,
    integrate_c1_sphere,
    integrate_ch_4d,
    integrate_degree_ball,
)

__version__ = "0.1.0"
