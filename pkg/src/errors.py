"""Exception hierarchy shared by the library and the CLI.

Library code raises these and never handles them; the CLI maps the class to
an exit code (InputError -> 1, ContractError -> 2).
"""


class UdgCliqueError(Exception):
    """Base class for every error raised by this package."""


class InputError(UdgCliqueError, ValueError):
    """The caller handed us something we cannot work with."""


class GenerationError(InputError):
    """An instance generator could not satisfy its distance margins."""


class NormalizationError(InputError):
    """No rotation made the anchor strictly leftmost with distinct coordinates."""


class ContractError(UdgCliqueError, AssertionError):
    """An internal invariant failed. Always indicates a solver bug."""
