"""Exception hierarchy with stable machine-readable error codes."""


class NeceError(Exception):
    """Base class; `code` is stable across releases and suitable for scripting."""

    code = "E_GENERIC"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class DocumentSyntaxError(NeceError):
    code = "E_SYNTAX"


class DanglingRefError(NeceError):
    code = "E_DANGLING_REF"


class DuplicateError(NeceError):
    code = "E_DUPLICATE"


class SpanError(NeceError):
    code = "E_SPAN"


class DuplicateLemmaError(NeceError):
    code = "E_DUP_LEMMA"


class BadRowError(NeceError):
    code = "E_BAD_ROW"


class EmptyCorpusError(NeceError):
    code = "E_EMPTY_CORPUS"


class EmptyChainError(NeceError):
    code = "E_EMPTY_CHAIN"


class DegenerateTableError(NeceError):
    code = "E_DEGENERATE"


class BelowMinCountError(NeceError):
    code = "E_BELOW_MIN_COUNT"


class MismatchedItemsError(NeceError):
    code = "E_MISMATCHED_ITEMS"


class LengthMismatchError(NeceError):
    code = "E_LENGTH_MISMATCH"


class BadCsvError(NeceError):
    code = "E_BAD_CSV"
