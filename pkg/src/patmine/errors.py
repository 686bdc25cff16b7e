"""Exception types shared across the toolkit."""


class PatmineError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(PatmineError):
    """Input file does not provide a mapped column."""


class EmptyScopeError(PatmineError):
    """An operation was asked to run on an empty record scope."""


class EmptyVocabularyError(PatmineError):
    """No term survives tokenization and frequency filtering."""


class DegenerateClusteringError(PatmineError):
    """Clustering collapsed (coincident centroids), quality index undefined."""


class DegenerateSeriesError(PatmineError):
    """Cumulative series is constant; a growth curve cannot be fitted."""


class ArtifactMismatchError(PatmineError):
    """Intermediate artifacts were produced from different corpora."""
