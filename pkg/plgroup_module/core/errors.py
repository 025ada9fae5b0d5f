# plgroup_module/core/errors.py
"""
Exceptions raised by the PL group toolkit
"""

EXIT_INVALID_INPUT = 2
EXIT_CERTIFICATE_REJECTED = 3
EXIT_BUDGET_EXCEEDED = 4


class PLGroupError(Exception):
    """Base exception for every failure the toolkit reports"""

    exit_code = EXIT_INVALID_INPUT

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self):
        if self.details:
            extra = ", ".join(f"{key}={value}" for key, value in sorted(self.details.items()))
            return f"{self.message} ({extra})"
        return self.message

    def to_dict(self):
        """Machine-readable form used by the CLI"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": {key: str(value) for key, value in sorted(self.details.items())},
        }


class InputFormatError(PLGroupError):
    """Malformed JSON or rational string"""


class EndpointError(PLGroupError):
    """Breakpoint list does not start at (0,0) or end at (1,1)"""


class MonotonicityError(PLGroupError):
    """Breakpoint coordinates are not strictly increasing"""


class DomainError(PLGroupError):
    """Point outside [0,1]"""


class NotAnOrbital(PLGroupError):
    """Interval is not an orbital of the element"""


class PointOutside(PLGroupError):
    """Point does not lie in the given orbital"""


class NoOrbital(PLGroupError):
    """Points do not share an orbital of the element"""


class WrongDirection(PLGroupError):
    """Element moves points the other way on the orbital"""


class IdentityInput(PLGroupError):
    """Operation needs a non-trivial element"""


class PreconditionError(PLGroupError):
    """Inputs violate a stated precondition"""


class NestingError(PreconditionError):
    """Two orbitals interlock instead of nesting"""

    def __init__(self, message, pair=None, **details):
        super().__init__(message, **details)
        self.pair = pair


class NotExemplary(PreconditionError):
    """Tower fails the exemplary conditions"""


class NoInconsistentOrbital(PreconditionError):
    """No group orbital is realized inconsistently"""


class VerificationError(PLGroupError):
    """A constructed object failed its own postcondition"""


class CertificateRejected(PLGroupError):
    """An independently re-checked certificate is invalid"""

    exit_code = EXIT_CERTIFICATE_REJECTED


class BudgetExceeded(PLGroupError):
    """A search or escalation loop hit its configured cap"""

    exit_code = EXIT_BUDGET_EXCEEDED

    def __init__(self, message, trace=None, **details):
        super().__init__(message, **details)
        self.trace = trace

    def to_dict(self):
        data = super().to_dict()
        if self.trace is not None:
            data["trace"] = self.trace.to_dict()
        return data


class SearchExhausted(PLGroupError):
    """Word search ended without a witness"""

    exit_code = EXIT_BUDGET_EXCEEDED

    def __init__(self, message, best_point=None, **details):
        super().__init__(message, **details)
        self.best_point = best_point

    def to_dict(self):
        data = super().to_dict()
        if self.best_point is not None:
            data["best_point"] = f"{self.best_point.numerator}/{self.best_point.denominator}"
        return data
