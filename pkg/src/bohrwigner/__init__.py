"""Wigner-Weyl calculus on the Bohr compactification of the real line."""

from .cyl import (
    EPS_COEFF,
    EPS_FREQ,
    RATIONAL,
    REAL,
    CylCylDual,
    CylFunction,
    FrequencyKindError,
    SchemaError,
    add,
    build,
    build_dual,
    character,
    conjugate,
    conjugate_dual,
    dual_fourier,
    dual_slice,
    eval_real,
    fourier_coefficient,
    freq_eq,
    from_json,
    from_json_dict,
    inner_product,
    momentum,
    multiply,
    norm,
    parity,
    promote_to_real,
    scale,
    shift,
    tensor_delta,
    to_json,
    to_json_dict,
    zero,
)
from .duals import (
    CylDual,
    GaussianDual,
    QuadratureError,
    dual_action,
    embed_cyl,
    gaussian_from_json_dict,
    gaussian_to_json_dict,
    gaussian_wigner_pair_positive,
    reduction_action,
)
from .holonomy import (
    ConcavityError,
    ConvergenceReport,
    GraphPoint,
    MubarScheme,
    Regularization,
    SolutionSet,
    aps_adjoint_apply,
    aps_apply,
    aps_symbol,
    cap_value,
    convergence_check,
    cos_apply,
    critical_beta,
    e_adjoint_apply,
    e_apply,
    e_regularized_apply,
    eq_residual,
    graph_points_aps,
    graph_points_character,
    graph_points_e,
    holonomy_symbol,
    mubar,
    regularized_adjoint_solutions,
    regularized_solutions,
    regularized_symbol,
    sin_apply,
    solve_S,
    solve_S_adjoint,
    volume_coordinate,
    volume_inverse,
)
from .weyl import (
    PowerIterationError,
    Symbol,
    SymbolContractError,
    adjoint,
    finite_section_norm,
    finite_symbol,
    form_via_wigner,
    matrix_element,
    quantize_apply,
    schur_norm_bound,
    section_frequencies,
    symbol_character,
    symbol_momentum,
    symbol_symmetric,
)
from .wigner import (
    DistributionalWigner,
    WignerData,
    hermitian_conjugate,
    momentum_marginal,
    overlap,
    pair,
    position_marginal,
    realization,
    realization_value,
    wigner,
    wigner_dual,
)

__version__ = "0.1.0"
