"""Exception types raised across the package."""


class OTExtSumError(Exception):
    """Base class for all package errors."""


class EmptyDocument(OTExtSumError):
    pass


class AllSentencesEmpty(OTExtSumError):
    pass


class EmptySelection(OTExtSumError):
    pass


class ParseError(OTExtSumError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionMismatch(ParseError):
    pass


class MissingToken(OTExtSumError, KeyError):
    pass


class ZeroNormVector(OTExtSumError):
    pass


class InfeasibleMarginals(OTExtSumError):
    pass


class MissingDuals(OTExtSumError):
    pass


class NonConvergence(OTExtSumError):
    """Sinkhorn stopped at ``max_iters`` above tolerance.

    The partially converged plan is kept on ``plan`` so callers can still
    use it.
    """

    def __init__(self, violation, plan=None):
        self.violation = violation
        self.plan = plan
        super().__init__(f"sinkhorn did not converge (marginal violation {violation:.3e})")


class NonConvergenceWarning(UserWarning):
    pass


class MissingReference(OTExtSumError, KeyError):
    pass
