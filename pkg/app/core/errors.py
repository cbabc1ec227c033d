from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_GUARD = 3


class SelectisError(ValueError):
    exit_code = EXIT_INPUT

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = dict(detail or {})

    def to_payload(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "detail": self.detail,
        }


class InputError(SelectisError):
    exit_code = EXIT_INPUT


class RingMismatch(InputError):
    pass


class NonUnitInverse(InputError):
    pass


class NonInvertibleConjugator(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class WrongDimension(InputError):
    pass


class InvalidOrder(InputError):
    pass


class NotAHomomorphism(InputError):
    pass


class OutOfRangeVector(InputError):
    pass


class MissingFrobenius(InputError):
    pass


class InconsistentInstance(InputError):
    pass


class SizeGuardExceeded(SelectisError):
    exit_code = EXIT_GUARD
