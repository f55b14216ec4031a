"""Exact-arithmetic engine for non-associative Hopf algebras built from
Lie algebra triples: construction, divisions, hyporeductive and
pseudoreductive structure operations, triple algebras, and executable
verification of their defining identities."""

from .lie import (
    LieAlgebra,
    Subspace,
    Triple,
    TripleError,
    check_hyporeductive,
    check_lie,
    check_pseudoreductive,
    core,
    generated_subalgebra,
    normalizer,
    tau_inn,
    tau_red,
    triples_equivalent,
)
from .hall import FreeLie, PresentedLie, free_lie_hall, presented_quotient
from .freena import (
    FreeNAElement,
    associator,
    evaluate_su_bracket,
    evaluate_su_phi,
    na_delta,
    na_mul,
    p_map,
    su_bracket,
    su_phi,
)
from .envelope import (
    CoalgMorphism,
    DegreeOverflowError,
    PBWElement,
    UnivEnv,
    UTau,
    UTauElement,
    check_divisions,
    check_monoalternative,
    check_power_identity,
    coalg_inverse,
    exp_star,
    sigma_section,
)
from .operators import InnerOperatorData, inner_operator_triple, right_mult_matrix
from .hypo import (
    CircStructure,
    ROperatorCache,
    check_hypospecial,
    check_r_commutator_identity,
    check_r_diagonal_vanishes,
    circ_build,
    hyporeductivity_bracket_check,
)
from .pseudo import (
    BulletPrimitives,
    BulletStructure,
    bernoulli,
    bullet_general,
    bullet_primitives,
    check_bol,
    check_bullet_bracket_identity,
    check_pseudospecial,
    flow_check,
)
from .hta import (
    HTA,
    crosscheck_su,
    envelope_E,
    hta_from_triple,
    integrate_hta,
    resolve_star_convention,
    sabinin_ops,
)

__version__ = "0.1.0"
