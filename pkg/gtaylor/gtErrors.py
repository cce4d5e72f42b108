"""
Exception hierarchy for PyGTaylor
"""


class GeneralizedTaylorError(Exception):
    """Root of every error raised by the package"""


class ArgumentError(GeneralizedTaylorError, ValueError):
    """Invalid arguments: short jets, mismatched points, out-of-domain values"""


class CapabilityError(GeneralizedTaylorError):
    """A coefficient derivative order is needed but not available"""


class NumericalError(GeneralizedTaylorError):
    """Root of numerical failures (CLI exit code 3)"""


class EvaluationError(NumericalError):
    """A function produced a non-finite value

    :param what: Name of the quantity being evaluated
    :type what: str
    :param point: Point of evaluation
    :type point: float
    :param value: Offending value
    :type value: float
    """

    def __init__(self, what, point, value=None):
        self.what = what
        self.point = point
        self.value = value
        super().__init__("{} is not finite at x={!r} (got {!r})".format(what, point, value))


class StiffnessError(NumericalError):
    """Adaptive step fell below the configured minimum"""


class ResourceError(NumericalError):
    """Step or panel budget exhausted"""


class AccuracyError(NumericalError):
    """Quadrature stopped above tolerance

    :param value: Best value obtained
    :type value: float
    :param estimate: Error estimate of that value
    :type estimate: float
    """

    def __init__(self, message, value, estimate):
        self.value = value
        self.estimate = estimate
        super().__init__("{} (value={!r}, estimate={!r})".format(message, value, estimate))


class StepSizeError(NumericalError):
    """Marching scheme cannot proceed with the requested grid"""


class UnknownProblemError(GeneralizedTaylorError, KeyError):
    """Catalogue lookup failure

    :param name: Requested name
    :type name: str
    :param available: Names that do exist
    :type available: list
    """

    def __init__(self, name, available):
        self.name = name
        self.available = list(available)
        super().__init__(name)

    def __str__(self):
        return "unknown problem {!r}; available: {}".format(self.name, ", ".join(self.available))


class SchemaError(GeneralizedTaylorError):
    """Problem file violates its schema

    :param path: File being read
    :type path: str
    :param line: 1-based line the message refers to (None when unknown)
    :type line: int
    """

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        self.message = message
        super().__init__(message)

    def __str__(self):
        if self.line is None:
            return "{}: {}".format(self.path, self.message)
        return "{}:{}: {}".format(self.path, self.line, self.message)
