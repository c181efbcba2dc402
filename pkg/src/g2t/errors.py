"""Exception hierarchy shared across the package."""


class G2TError(Exception):
    """Base class for every error raised by this package."""


class InputError(G2TError):
    """A file or in-memory input is malformed or inconsistent."""


class ConfigError(G2TError):
    """A configuration value lies outside its documented range."""


class DegenerateGraphError(G2TError):
    """The pipeline reached a state with too little graph structure to continue."""
