"""Exception types shared across the toolkit.

Domain errors carry the contract name they enforce; the CLI maps them onto
stable exit codes (see capkv.cli).
"""


class CapkvError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(CapkvError):
    """Operands have incompatible shapes."""


class NotPositiveDefinite(CapkvError):
    """Cholesky factorization hit a non-positive pivot, even after jitter."""


class EmptySequence(CapkvError):
    """An aggregate was requested over zero items."""


class DegenerateAnchor(CapkvError):
    """The mean key vanished, so cosine dissimilarity is undefined."""


class EmptyWindow(CapkvError):
    """No observation-window queries were supplied."""


class EmptyCache(CapkvError):
    """The cache holds no entries."""


class EmptySubset(CapkvError):
    """A retained-index set must be nonempty."""


class BudgetExceedsCache(CapkvError):
    """Requested budget is larger than the number of cached entries."""


class DegenerateRanks(CapkvError):
    """Rank correlation is undefined because one variable is constant."""


class PolicyUnsupportedInStreaming(CapkvError):
    """The policy needs inputs the decode-phase simulator cannot provide."""


class CombinatorialExplosion(CapkvError):
    """Exhaustive enumeration would exceed the configured subset cap."""


class KvpkFormatError(CapkvError):
    """Base class for cache-file format violations."""


class BadMagic(KvpkFormatError):
    """File does not start with the KVPK magic bytes."""


class VersionUnsupported(KvpkFormatError):
    """File declares a version, flag, or dtype this reader does not handle."""


class TruncatedPayload(KvpkFormatError):
    """File ends before the declared payload is complete."""


class ShapeMismatch(KvpkFormatError):
    """Declared sizes disagree with the actual payload."""
