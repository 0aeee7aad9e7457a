"""
Engine exceptions and their CLI exit codes
"""


class MallebError(Exception):
    """Base class for engine errors"""
    exit_code = 1


class ParseError(MallebError):
    """Malformed group expression, cycle notation, table file or base spec"""
    exit_code = 2


class ValidationError(MallebError):
    """Input parsed but violates a mathematical requirement"""
    exit_code = 2


class PreconditionError(MallebError):
    """Operation called outside its domain"""
    exit_code = 2


class GroupSizeError(MallebError):
    """Group order exceeds the materialization cap"""
    exit_code = 3

    def __init__(self, constructor, cap, order=None):
        self.constructor = constructor
        self.cap = cap
        self.order = order
        if order is None:
            message = f"{constructor} exceeds element cap {cap}"
        else:
            message = f"{constructor} has order {order} > element cap {cap}"
        super().__init__(message)


class ContractError(MallebError):
    """Violated invariant between engine components"""
    exit_code = 1


class ModulusError(ContractError):
    """Minimal elements have orders not dividing the pair modulus"""


class MethodUnavailable(MallebError):
    """Cross-check method skipped because of a cap"""
    exit_code = 1


class VerificationFailed(MallebError):
    """A verify-paper check did not reproduce its expected value"""
    exit_code = 1
