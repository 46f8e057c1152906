"""kzfusion: exact intertwiner-prefix construction for affine sl2.

Public surface: exact scalars and linear algebra, structure-constant Lie
algebras with a validated sl2 instance, weight modules and their tensor
Casimir analysis, generalized Verma modules with Sugawara operators, the
degree recursion with obstruction scans and singular-vector candidates, and
the sl2 fusion-rule decision procedures.
"""

from .errors import (
    CriticalLevelError,
    CutoffExceededError,
    DimensionMismatchError,
    DomainError,
    ExtensionMismatchError,
    KzFusionError,
    NonRationalError,
    ObstructionError,
    UnsupportedShapeError,
    WindowEscapeError,
)
from .exact import (
    GENERIC_LEVEL,
    ExactMatrix,
    ExactScalar,
    GenericLevel,
    eigenspace,
    in_positive_multiples,
    is_generic,
    parse_scalar,
    scalar,
    solve_linear,
)
from .fusion import (
    FusionVerdict,
    admissible_weights,
    appears_in_resolution,
    check_doubly_infinite,
    check_finite,
    check_mixed,
    dense_fusion_check,
    garland_lepowsky,
)
from .gmodules import (
    GHom,
    ModuleVector,
    TensorModule,
    WeightModule,
    casimir_matrix,
    decompose,
    expected_hom_dim,
    hom_space,
    pair_casimir,
)
from .kz import (
    IntertwinerPrefix,
    ObstructionReport,
    build_prefix,
    build_prefix_contragredient,
    candidate_diagnostics,
    compare_with_canonical_pairing,
    kz_residual,
    obstruction_scan,
    singular_candidate,
    verify_commcomp,
    VermaTarget,
    ContragredientTarget,
)
from .liealg import (
    SimpleLieAlgebra,
    adjoint_probe,
    check_lemma1,
    check_lemma2,
    load_algebra,
    sl2,
)
from .verma import (
    ContragredientModule,
    GeneralizedVermaModule,
    GradedVector,
    canonical_pairing,
    contravariant_gram,
    contravariant_pairing,
    contravariant_radical,
    conformal_weight_from_casimir,
    sl2_conformal_weight,
)

__version__ = "0.1.0"
