"""Exception types raised by the library."""


class DimensionError(ValueError):
    """Shapes or parameter counts do not match."""


class NotHadamardError(ValueError):
    """An operation that requires a complex Hadamard matrix got something else."""


class NotDephasedError(ValueError):
    pass


class UnsuitablePairError(ValueError):
    pass


class VerificationError(RuntimeError):
    """A constructed family failed the symbolic Hadamard check."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
