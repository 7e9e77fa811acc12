"""Exception hierarchy. Every error carries a stable ``code`` used in reports."""


class QTorusError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in sorted(self.details.items())}
        return out


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


class ModeMismatch(QTorusError):
    code = "MODE_MISMATCH"


class DivisionByZero(QTorusError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class InvalidMinimalPolynomial(QTorusError):
    code = "INVALID_MINIMAL_POLYNOMIAL"


class DependentBasis(QTorusError):
    code = "DEPENDENT_BASIS"


class NonpositiveInput(QTorusError):
    code = "NONPOSITIVE_INPUT"


class PresentationMismatch(QTorusError):
    code = "PRESENTATION_MISMATCH"


class IllegalPower(QTorusError):
    code = "ILLEGAL_POWER"


class NonIntegerExponent(QTorusError):
    code = "NON_INTEGER_EXPONENT"


class NotInGroup(QTorusError):
    code = "NOT_IN_GROUP"


class ArityMismatch(QTorusError):
    code = "ARITY_MISMATCH"


class MixedArity(QTorusError):
    code = "MIXED_ARITY"


class ShapeMismatch(QTorusError):
    code = "SHAPE_MISMATCH"


class ClassLimitExceeded(QTorusError):
    code = "CLASS_LIMIT_EXCEEDED"


class SearchSpaceTooLarge(QTorusError):
    code = "SEARCH_SPACE_TOO_LARGE"


class UnsupportedVariety(QTorusError):
    code = "UNSUPPORTED_VARIETY"


class NonRationalTorus(QTorusError):
    code = "NON_RATIONAL_TORUS"


class NotASubgroup(QTorusError):
    code = "NOT_A_SUBGROUP"


class InvalidInput(QTorusError):
    code = "INVALID_INPUT"


class ParseError(QTorusError):
    code = "PARSE_ERROR"

    def __init__(self, message="", line=None, column=None, **details):
        if line is not None:
            details["line"] = line
            details["column"] = column
        super().__init__(message, **details)
        self.line = line
        self.column = column


class DivisibleGroupWarning(UserWarning):
    """Coset constraints are vacuous in a divisible group."""
