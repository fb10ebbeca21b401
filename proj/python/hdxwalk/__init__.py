from ._hdxwalk import (
    AffineUGInstance,
    Complex,
    HDWalk,
    HdxError,
    build_complex,
    canonical_walk,
    complete_complex,
    decompose,
    ell2_profile,
    ellinf_profile,
    expander_fallback_check,
    expansion,
    expansion_lower_bound,
    gamma,
    hd_walk,
    identity_walk,
    iterated_link_rounding,
    kernel_basis,
    laziness,
    link,
    link_expansion_profile,
    link_faces,
    link_indicator,
    load_complex,
    local_expectation,
    lower_walk_power,
    monotonicity_check,
    norm_ratio,
    orthogonality_report,
    parse_walk_spec,
    plant_instance,
    punctured_complete_complex,
    pure_walk_lambda,
    random_baseline,
    save_complex,
    save_instance,
    skeleton_lambda2,
    sparsified_complex,
    st_rank,
    stripping_report,
    swap_walk,
    swap_walk_ajt,
    swap_walk_direct,
    tightness_fixture_bm,
    ug_value,
    variance_identity_check,
    vertex_expansion_deviation,
    walk_graph,
    walk_lambdas,
)

__all__ = [name for name in dir() if not name.startswith("_")]
