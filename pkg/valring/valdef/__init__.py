from .extension import (
    ExtensionPlan,
    build_extension_formula,
    field_for_plan,
    hstar_at,
    make_plan,
    maximal_ideal_formula,
    plan_for_field,
    uniformizer_set,
    validate_plan,
    verify_extension_formula,
)
from .membership import (
    EllConstant,
    MembershipCertificate,
    choose_ell,
    decide_OK,
    main_formula,
    main_formula_for,
    oracle_OK,
    verify_certificate,
)

__all__ = [
    "ExtensionPlan", "build_extension_formula", "field_for_plan", "hstar_at", "make_plan", "maximal_ideal_formula",
    "plan_for_field", "uniformizer_set", "validate_plan", "verify_extension_formula", "EllConstant",
    "MembershipCertificate", "choose_ell", "decide_OK", "main_formula", "main_formula_for", "oracle_OK",
    "verify_certificate",
]
