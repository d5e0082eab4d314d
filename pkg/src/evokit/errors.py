"""Exception types shared across the toolkit."""


class EvokitError(Exception):
    """Base class for all toolkit errors."""


class NonPrimeModulus(EvokitError):
    """Requested prime-field modulus is not prime (or out of range)."""


class EvenCharacteristic(EvokitError):
    """Characteristic 2 is rejected everywhere."""


class DivisionByZero(EvokitError, ZeroDivisionError):
    """Exact division by the zero scalar."""


class FieldMismatch(EvokitError):
    """Two values from different fields were combined."""


class DimensionMismatch(EvokitError):
    """Vector/matrix/algebra dimensions do not agree."""


class SingularMatrix(EvokitError):
    """A matrix required to be invertible is singular."""


class NotNilpotentError(EvokitError):
    """Operation defined only for nilpotent algebras."""


class ZeroGramEntry(EvokitError):
    """A diagonal Gram coefficient is zero (form would be degenerate)."""


class ZeroVectorU(EvokitError):
    """The distinguished vector of the two-tail family must be nonzero."""


class ZeroC(EvokitError):
    """The shortcut coefficient of the ma2 table must be nonzero."""


class BadShape(EvokitError):
    """Builder parameters have inconsistent sizes."""


class PatternViolation(EvokitError):
    """A coefficient sits outside the allowed block pattern."""


class IncompatibleChains(EvokitError):
    """Annihilator chains have different dimension profiles."""


class NonCoordinateChain(EvokitError):
    """An annihilator chain is not spanned by standard basis vectors."""


class BudgetExceeded(EvokitError):
    """Search space exceeds the configured enumeration budget."""


class InfiniteFieldUnsupported(EvokitError):
    """Exhaustive search requires a finite field."""


class ParseError(EvokitError):
    """Malformed algebra file or parameter JSON."""
