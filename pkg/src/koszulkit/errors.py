"""Exception hierarchy shared by all koszulkit modules."""


class KoszulkitError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class NotPrimeError(KoszulkitError, ValueError):
    pass


class DimensionMismatchError(KoszulkitError, ValueError):
    pass


class FieldMismatchError(KoszulkitError, ValueError):
    pass


class AlphabetMismatchError(KoszulkitError, ValueError):
    pass


class IndexOutOfRangeError(KoszulkitError, IndexError):
    pass


class PrecisionError(KoszulkitError, ValueError):
    """A p-adic quantity does not carry enough digits for the requested computation."""


class NotInD2Error(KoszulkitError, ValueError):
    """A relation has a nonzero linear Magnus term, so it does not lie in D_2(F)."""


class DegenerateRelationSpanError(KoszulkitError, ValueError):
    pass


class ModelOutOfScopeError(KoszulkitError):
    """The requested (p, q, variant) combination has no quadratic model here."""


class UnsupportedSpecError(KoszulkitError):
    pass


class InvalidSpecError(KoszulkitError, ValueError):
    pass


class NonMonicError(KoszulkitError, ValueError):
    pass


class ResourceLimitError(KoszulkitError):
    pass


class WordSyntaxError(ValueError):
    """Raised by the word parser; the CLI maps it to exit code 2."""


class SpecFormatError(ValueError):
    """A JSON document does not match the expected schema (CLI exit code 2)."""
