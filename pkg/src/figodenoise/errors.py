"""Exception types shared across the package."""


class FigoError(Exception):
    """Base class for all package-specific errors."""


class InvalidChannelError(FigoError):
    """The induced channel matrix is rank deficient (densities/quantizer
    do not yield an invertible discrete channel)."""


class InsufficientDataError(FigoError):
    """A kernel density estimate was requested for a symbol with no samples."""


class EncodingError(FigoError):
    """A DNA sequence contains a base that the wash cycle never emits."""


class FormatError(FigoError):
    """A data file failed to parse."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TrainingDivergedError(FigoError):
    """Network training produced a non-finite loss."""


class ComplexityCapError(FigoError):
    """A tuple-enumeration denoiser would exceed the configured size cap."""


class NumericalUnderflowError(FigoError):
    """Forward/backward recursion hit an all-zero emission row."""


class ConfigError(FigoError):
    """An experiment configuration file is invalid."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
