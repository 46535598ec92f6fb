"""Exception hierarchy. Every error carries a stable ``code`` used in CLI reports."""


class PosrepError(Exception):
    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class InputError(PosrepError, ValueError):
    code = "invalid_input"


class CurveError(InputError):
    code = "invalid_curve"


class UnknownAlternative(InputError, KeyError):
    code = "unknown_alternative"

    def __str__(self):
        return self.message


class AlternativeMismatch(InputError):
    code = "alternative_mismatch"


class EmptyGrid(InputError):
    code = "empty_grid"


class EmptyTable(InputError):
    code = "empty_table"


class IncompleteTable(InputError):
    code = "incomplete_table"


class MissingAnchor(InputError):
    code = "missing_anchor"


class TypeNotPosRepresentable(InputError):
    code = "type_not_pos_representable"


class TypeNotRepresentable(InputError):
    code = "type_not_representable"


class ZeroWeightAgent(InputError):
    code = "zero_weight_agent"


class TooManyVariables(InputError):
    code = "too_many_variables"


class BudgetExceeded(PosrepError):
    code = "budget_exceeded"
