"""Regularized Brascamp-Lieb growth exponents and multilinear Kakeya simulation."""

from blr._core import (
    BLDatum,
    BasisSelection,
    CandidateOpts,
    GridSpec,
    GrowthFit,
    InvalidInput,
    LatticeFn,
    LedgerRow,
    LedgerSampling,
    LogLogFit,
    PerturbationSpec,
    RatioReport,
    ResourceError,
    SelectionFailed,
    MultiscaleLedger,
    StabilityReport,
    Subspace,
    SweepReport,
    SweepRow,
    Tube,
    TubeFamily,
    WitnessSet,
    __version__,
    bl_integral,
    bl_polytope_contains,
    bl_ratio,
    cell_swallowing_inflation,
    complement,
    delta_sweep,
    delta_sweep_pinned,
    empirical_blr,
    fit_growth,
    fit_loglog,
    gamma_of,
    gamma_sup,
    grassmann_distance,
    image_dim,
    inflate_family,
    kakeya_bound,
    locbd_exponent,
    matrix_rank,
    multiscale_ledger,
    multiscale_schedule,
    norm_window,
    nu_estimate,
    operator_norm,
    orthocomplement,
    overlap_integral,
    perturb,
    random_subspace,
    random_tube_family,
    select_basis,
    stability_scan,
    subspace_intersect,
    subspace_sum,
    tube_membership,
    validate,
    verify_locbd_exponent,
    witness,
    witness_fns,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
