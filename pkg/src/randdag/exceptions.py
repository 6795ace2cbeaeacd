class InputError(ValueError):
    """A graph, vertex or file handed to the library is not acceptable."""


class ConfigError(ValueError):
    """A chain configuration admits no valid state or is malformed."""


class OracleLimitError(ValueError):
    """Exhaustive enumeration was requested above the hard vertex cap."""
