class AnalysisError(Exception):
    """Base class for every failure the pipeline reports to the user."""

    code = "ANALYSIS_ERROR"

    def __init__(self, message, position=None, **details):
        super().__init__(message)
        self.message = message
        self.position = position
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": self.message}
        if self.position is not None:
            out["position"] = self.position
        return out


# poly-core
class NegativeBaseFractionalPower(AnalysisError):
    code = "NEGATIVE_BASE_FRACTIONAL_POWER"


class NegativeExponentResult(AnalysisError):
    code = "NEGATIVE_EXPONENT_RESULT"


class FractionalExponentLinearSub(AnalysisError):
    code = "FRACTIONAL_EXPONENT_LINEAR_SUB"


class ZeroPolynomial(AnalysisError):
    code = "ZERO_POLYNOMIAL"


class DenominatorLimitExceeded(AnalysisError):
    code = "DENOMINATOR_LIMIT_EXCEEDED"


# parser
class ParseError(AnalysisError):
    code = "SYNTAX_ERROR"


class NegativeExponent(ParseError):
    code = "NEGATIVE_EXPONENT"


class FractionalYExponent(ParseError):
    code = "FRACTIONAL_Y_EXPONENT"


class DivisionByVariable(ParseError):
    code = "DIVISION_BY_VARIABLE"


# newton / realroots
class EdgeNotOfPolygon(AnalysisError):
    code = "EDGE_NOT_OF_POLYGON"


class EndpointIsRoot(AnalysisError):
    code = "ENDPOINT_IS_ROOT"


# adapt / classify
class CriticalPointViolation(AnalysisError):
    code = "CRITICAL_POINT_VIOLATION"


class IrrationalShiftRequired(AnalysisError):
    code = "IRRATIONAL_SHIFT_REQUIRED"

    def __init__(self, message, interval=None, **details):
        super().__init__(message, **details)
        self.interval = interval

    def to_dict(self):
        out = super().to_dict()
        if self.interval is not None:
            out["interval"] = [str(self.interval[0]), str(self.interval[1])]
        return out


class StepBudgetExhausted(AnalysisError):
    code = "STEP_BUDGET_EXHAUSTED"


class GenericityNotFound(AnalysisError):
    code = "GENERICITY_NOT_FOUND"


class NotGenericAdapted(AnalysisError):
    code = "NOT_GENERIC_ADAPTED"


# slivers
class CoverageFailure(AnalysisError):
    code = "COVERAGE_FAILURE"


class ExceptionalInput(AnalysisError):
    code = "EXCEPTIONAL_INPUT"


class SearchBudgetExhausted(AnalysisError):
    code = "SEARCH_BUDGET_EXHAUSTED"


# verify
class EmptyRegion(AnalysisError):
    code = "EMPTY_REGION"


class DegenerateMeasure(AnalysisError):
    code = "DEGENERATE_MEASURE"


class QuadratureUnderResolved(AnalysisError):
    code = "QUADRATURE_UNDER_RESOLVED"


class OneSidedShiftRequired(AnalysisError):
    code = "ONE_SIDED_SHIFT_REQUIRED"
