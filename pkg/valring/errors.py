class ValringError(Exception):
    """Base error. `code` is machine-readable, `exit_code` is what the CLI returns."""
    code = "error"
    exit_code = 2

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code

    def to_dict(self) -> dict:
        return {"error": self.code, "detail": self.detail}


class UsageError(ValringError):
    code = "usage"
    exit_code = 64


class InputError(ValringError):
    code = "input"
    exit_code = 65


# ---- fields ----
class MalformedDescriptor(UsageError):
    code = "malformed_descriptor"


class MalformedLiteral(UsageError):
    code = "malformed_literal"


class NotIrreducible(InputError):
    code = "not_irreducible"


class NotEisenstein(InputError):
    code = "not_eisenstein"


class InsufficientPrecision(InputError):
    code = "insufficient_precision"


class NotIntegral(ValringError):
    code = "not_integral"


class FieldMismatch(ValringError):
    code = "field_mismatch"


class DivisionByZero(ValringError):
    code = "division_by_zero"


class CriterionFails(ValringError):
    code = "criterion_fails"


class NotValuedField(ValringError):
    code = "not_valued_field"


# ---- predicates ----
class NotExact(ValringError):
    code = "not_exact"


class Unsupported(ValringError):
    code = "unsupported"


class NotUnit(ValringError):
    code = "not_unit"


class BaseSetInapplicable(ValringError):
    code = "base_set_inapplicable"


class SEllUndecided(ValringError):
    code = "s_ell_undecided"


# ---- decompose ----
class TooLarge(UsageError):
    code = "too_large"


class NoDecomposition(ValringError):
    code = "no_decomposition"


class ResidueNotCovered(ValringError):
    code = "residue_not_covered"


class BadParameter(ValringError):
    code = "bad_parameter"


class InvariantViolation(ValringError):
    code = "invariant_violation"


# ---- valdef ----
class MissingScanFixture(ValringError):
    code = "missing_scan_fixture"


class MethodInapplicable(ValringError):
    code = "method_inapplicable"


class InvalidPlan(InputError):
    code = "invalid_plan"


# ---- formula ----
class FormulaSyntaxError(UsageError):
    code = "syntax_error"

    def __init__(self, detail: str, position: int | None = None):
        super().__init__(detail)
        self.position = position

    def to_dict(self) -> dict:
        return {"error": self.code, "detail": self.detail, "position": self.position}


class ScopeError(UsageError):
    code = "scope_error"


class MissingBinding(ValringError):
    code = "missing_binding"
