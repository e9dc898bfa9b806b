"""Exception types shared across the toolkit."""


class DesignBenchError(Exception):
    """Base class for all toolkit-specific errors."""


class InvalidDesign(DesignBenchError):
    """Treatment/control counts or experiment layout are unusable."""


class SingularGram(DesignBenchError):
    """A cross-product matrix is numerically rank deficient.

    Typically signals too few units in an arm for the number of
    regressors, or collinear covariates.
    """


class LeverageOne(DesignBenchError):
    """A unit has leverage numerically equal to one.

    Leave-one-out quantities are undefined for such a unit.
    """


class TooLarge(DesignBenchError):
    """An exhaustive enumeration would exceed the configured cap."""


class Unsupported(DesignBenchError):
    """Requested moment pattern has no registered closed form."""


class DegenerateObjective(DesignBenchError):
    """Worst-case error objective is identically zero for this design."""


class ConfigError(DesignBenchError):
    """A simulation configuration file or value is invalid."""


class ParseError(DesignBenchError):
    """An input data file could not be parsed."""


class MissingValue(DesignBenchError):
    """Selected data columns contain missing values."""


class NonBinaryTreatment(DesignBenchError):
    """The treatment column contains values other than 0 and 1."""
