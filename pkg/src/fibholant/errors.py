"""Exception hierarchy shared by every module of the package."""


class HolantError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class SignatureError(HolantError, ValueError):
    """Malformed signature, count vector or assignment."""


class BasisError(HolantError, ValueError):
    """Orthogonal basis invariant violated."""


class InvalidParams(HolantError, ValueError):
    """Recurrence parameters fail their algebraic constraints."""


class NotFibonacci(HolantError):
    """Signature data is not a generalized Fibonacci gate."""


class Underdetermined(HolantError):
    """Recurrence system does not pin down every parameter."""


class GridError(HolantError, ValueError):
    """Structural or validation failure of a signature grid."""


class MergeViolation(HolantError):
    """An intermediate gate lost the Fibonacci property (strict mode)."""


class EnumerationCapExceeded(HolantError):
    """Brute-force enumeration would exceed the configured term cap."""


class DocumentError(HolantError, ValueError):
    """Invalid grid/params document."""
