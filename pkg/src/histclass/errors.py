"""Exception types raised by the library."""


class HistClassError(ValueError):
    """Base class for invalid inputs and infeasible runs."""


class NoCicsError(HistClassError):
    """Raised when Cic selection yields nothing to score with."""

    def __init__(self, msg="no candidate indicator columns"):
        super().__init__(msg)
