"""
Exception hierarchy for the elastic simulator
"""


class ElasticError(Exception):
    """Base class for every error raised by the simulator."""


class InvalidInputError(ElasticError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(InvalidInputError):
    """A configuration value breaks a model invariant."""


class DegenerateWindowError(ElasticError, ValueError):
    """A timing window carries no useful work, which points to a measurement bug."""


class InvalidMergeError(ElasticError, ValueError):
    """Two timing windows cannot be accumulated together."""


class SingularityError(ElasticError, ValueError):
    """The core estimate is undefined because 1 - 1/CE vanishes."""


class OutOfModelError(ElasticError, ValueError):
    """The efficiency prediction has no meaning for the given inputs."""


class CapacityError(ElasticError, ValueError):
    """A resize asks for more cores than the cluster holds."""


class ProtocolError(ElasticError):
    """An event arrived in a phase that does not accept it."""


class ConsistencyError(ElasticError):
    """Timings disagree with the controller's view of the allocation."""


class SequencingError(ElasticError):
    """Trace records arrived out of step order."""
