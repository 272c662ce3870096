from .errors import (
    ElasticError,
    InvalidInputError,
    ConfigurationError,
    DegenerateWindowError,
    InvalidMergeError,
    SingularityError,
    OutOfModelError,
    CapacityError,
    ProtocolError,
    ConsistencyError,
    SequencingError,
)
