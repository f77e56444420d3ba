"""Exception hierarchy shared by the services, the CLI and the HTTP API.

Each class carries the process exit code the CLI reports for it.
"""


class MagicLabError(Exception):
    exit_code = 1


class InputError(MagicLabError, ValueError):
    """Unparseable or invalid input: specs, files, monomials, dimensions."""
    exit_code = 2


class ResourceCapError(MagicLabError):
    """A configured size cap would be exceeded; raised before allocating."""
    exit_code = 3


class SingularGramError(InputError):
    """Gram matrix is rank deficient, so no Weingarten inverse exists."""

    def __init__(self, message: str, rank: int = 0, size: int = 0):
        super().__init__(message)
        self.rank = rank
        self.size = size


class VerificationError(MagicLabError):
    exit_code = 1


class MonomialDefectError(MagicLabError):
    """An existence guarantee of the monomial calculus was not met."""
    exit_code = 1
