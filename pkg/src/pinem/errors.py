"""Exception hierarchy.

Validation problems (bad physical inputs) derive from ``ValueError``; numerical
problems (grid too small, search did not bracket) derive from ``RuntimeError``.
The CLI maps the first family to exit code 2 and the second to exit code 3.
"""


class PinemError(Exception):
    """Base class for all library errors."""


class ParameterError(PinemError, ValueError):
    """A physical parameter is outside its allowed range."""


class NumericalError(PinemError, RuntimeError):
    """Base class for discretisation and search failures."""


class CoverageError(NumericalError):
    """The grid does not cover the support of the state or its sidebands."""


class ResolutionError(NumericalError):
    """The grid required for the requested accuracy exceeds the size cap."""

    def __init__(self, message, required_samples=None):
        super().__init__(message)
        self.required_samples = required_samples


class CostError(NumericalError):
    """A requested map exceeds the cost guard."""


class SearchError(NumericalError):
    """A one-dimensional search could not bracket an extremum."""
