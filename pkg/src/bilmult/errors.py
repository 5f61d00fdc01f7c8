"""Exception hierarchy for the bilmult package.

Everything raised on purpose derives from BilmultError so the CLI can map
domain failures to exit code 1 while genuine bugs still surface as ordinary
tracebacks.
"""


class BilmultError(Exception):
    """Base class for all domain errors raised by bilmult."""


class NotPrime(BilmultError):
    """Requested prime field characteristic is composite (or < 2)."""


class TooLarge(BilmultError):
    """Parameter exceeds a documented size cap."""


class DivisionByZero(BilmultError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class DimensionMismatch(BilmultError):
    """Vector or matrix dimensions do not match the ambient field structure."""


class ParameterTooLarge(BilmultError):
    """Search or enumeration parameters outside the supported range."""


class TooFewPoints(BilmultError):
    """Evaluation-interpolation needs more distinct points than the field has."""


class UnsupportedTruncation(BilmultError):
    """Truncated-product algorithm requested for an unsupported term count."""


class FieldMismatch(BilmultError):
    """Two decompositions or fields that must agree structurally do not."""


class NoRootFound(BilmultError):
    """Internal error: an irreducible polynomial had no root in a field of
    matching cardinality (impossible for valid inputs)."""


class UnsupportedBase(BilmultError):
    """Tower family requested over a base field it is not defined for."""


class OutOfRange(BilmultError):
    """Step selection requested for an extension degree below the regime the
    selection argument (or the embedded table) covers."""


class NotApplicable(BilmultError):
    """No rule of the requested kind applies to the given parameters."""


class MissingAq(BilmultError):
    """An Ihara-constant lower bound is required but not known or supplied."""


class ParseError(BilmultError):
    """Malformed JSON input."""


class ValidationError(BilmultError):
    """Structurally valid JSON that violates a decomposition invariant."""
