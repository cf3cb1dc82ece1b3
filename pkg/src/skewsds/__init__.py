"""skewsds: classification of skew-symmetric supplementary difference sets
and certification of the circulant D-optimal designs they induce."""

__version__ = "0.1.0"

from .core import (
    DifferenceProfile,
    GroupElement,
    InfeasibleParameters,
    ParameterError,
    SdsPair,
    SdsParams,
    SubsetZv,
    apply_group,
    are_equivalent,
    canonical_form,
    derive_params,
    diff_profile,
    is_sds,
    is_skew,
    units,
)
from .search import (
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    ClassificationResult,
    ProfileKeyedRecord,
    classify,
    classify_all,
    enumerate_canonical_B,
    enumerate_skew_A,
    estimate_nodes,
    match_pairs,
)
from .matrices import (
    CirculantMatrix,
    DesignMatrix,
    GramCertificate,
    SignRow,
    build_design,
    design_is_skew,
    exact_determinant,
    row_is_skew,
    row_to_subset,
    subset_to_row,
    verify_c1c3,
    verify_gram_pair,
)
from .doptimal import (
    CertifiedDesign,
    DoptParams,
    classify_dopt,
    ehlich_bound,
    feasible_dopt_params,
    sds_to_dopt,
    sum_two_squares,
)
from .constructions import (
    hadamard_design_check,
    is_difference_set,
    qr_skew_sds,
)
from .fixtures import load_table3, pair_to_record, record_to_pair, table3_pair, table3_pairs

__all__ = [
    "DifferenceProfile",
    "GroupElement",
    "InfeasibleParameters",
    "ParameterError",
    "SdsPair",
    "SdsParams",
    "SubsetZv",
    "apply_group",
    "are_equivalent",
    "canonical_form",
    "derive_params",
    "diff_profile",
    "is_sds",
    "is_skew",
    "units",
    "DEFAULT_NODE_BUDGET",
    "BudgetExceeded",
    "ClassificationResult",
    "ProfileKeyedRecord",
    "classify",
    "classify_all",
    "enumerate_canonical_B",
    "enumerate_skew_A",
    "estimate_nodes",
    "match_pairs",
    "CirculantMatrix",
    "DesignMatrix",
    "GramCertificate",
    "SignRow",
    "build_design",
    "design_is_skew",
    "exact_determinant",
    "row_is_skew",
    "row_to_subset",
    "subset_to_row",
    "verify_c1c3",
    "verify_gram_pair",
    "CertifiedDesign",
    "DoptParams",
    "classify_dopt",
    "ehlich_bound",
    "feasible_dopt_params",
    "sds_to_dopt",
    "sum_two_squares",
    "hadamard_design_check",
    "is_difference_set",
    "qr_skew_sds",
    "load_table3",
    "pair_to_record",
    "record_to_pair",
    "table3_pair",
    "table3_pairs",
]
