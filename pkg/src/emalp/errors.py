class MalpError(Exception):
    """Base class for all library errors."""
