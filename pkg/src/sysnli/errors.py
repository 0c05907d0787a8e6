"""Exception hierarchy shared across the toolkit."""


class SysnliError(Exception):
    """Base class for all toolkit errors."""


class UniverseViolationError(SysnliError):
    """An extension contains elements outside the declared universe."""


class ParseError(SysnliError):
    """Token sequence does not match the sentence template."""


class UnknownSymbolError(ParseError):
    """A token is not in any lexical category."""

    def __init__(self, token, message=None):
        self.token = token
        super().__init__(message or f"unknown symbol: {token!r}")


class MissingExtensionError(SysnliError):
    """A sentence symbol has no extension in the given world."""


class InfeasibleConstraintsError(SysnliError):
    """No world satisfies the extension constraints (domain too small)."""


class ComplexityGuardError(SysnliError):
    """The requested enumeration exceeds the configured work cap."""


class TableInstabilityError(SysnliError):
    """A skeleton's relation differs across domain sizes."""

    def __init__(self, unstable_keys):
        self.unstable_keys = list(unstable_keys)
        super().__init__(
            "relation unstable across domain sizes for skeleton(s): "
            + ", ".join(self.unstable_keys)
        )


class MissingSkeletonError(SysnliError):
    """Pair skeleton absent from the relation table."""

    def __init__(self, key):
        self.key = key
        super().__init__(f"skeleton not in table: {key}")


class MissingTargetError(SysnliError):
    """A probe target pair is absent from the dataset (closure not run)."""


class ExhaustionError(SysnliError):
    """Requested sample count exceeds the distinct pairs available."""


class JoinError(SysnliError):
    """Predictions reference item ids absent from the scored item set."""


class ConfigError(SysnliError):
    """Invalid generation or inventory configuration."""
