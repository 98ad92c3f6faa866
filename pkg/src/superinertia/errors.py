"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class AnalysisError(Exception):
    exit_code = 1


class InputParseError(AnalysisError, ValueError):
    exit_code = 2


class UltrametricViolation(AnalysisError, ValueError):
    exit_code = 3

    def __init__(self, message, triple=None, values=None):
        super().__init__(message)
        self.triple = triple
        self.values = values


class SplitDegeneracyViolation(AnalysisError, ValueError):
    exit_code = 4

    def __init__(self, message, pair=None, margin=None):
        super().__init__(message)
        self.pair = pair
        self.margin = margin


class VerdictFailure(AnalysisError):
    """An internal cross-check disagreed (dual routes, oracle, identities)."""

    exit_code = 5
