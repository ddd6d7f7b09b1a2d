class CoulombError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(CoulombError, ValueError):
    pass


class DivergenceError(CoulombError):
    """A graded piece is infinite: some nonzero coweight has non-positive
    monopole dimension.  ``witness`` is such a coweight."""

    def __init__(self, witness, delta=None, message=None):
        self.witness = tuple(witness)
        self.delta = delta
        if message is None:
            message = f"positivity fails: delta({list(self.witness)}) = {delta}"
        super().__init__(message)


class EmbeddingDegenerateError(CoulombError, ValueError):
    pass


class ClosureError(CoulombError):
    """The shift-operator product left the span of the monopole basis."""


class NonGenericPointError(CoulombError, ValueError):
    def __init__(self, matter_index, covector, point):
        self.matter_index = matter_index
        self.covector = tuple(covector)
        self.point = point
        super().__init__(
            f"point is not generic: hyperplane <{list(self.covector)}, w> + m_{matter_index} = 0 "
            f"(matter index {matter_index}) vanishes"
        )


class IncompleteGeneratorsError(CoulombError):
    def __init__(self, missed):
        self.missed = list(missed)
        super().__init__(f"generators do not span {len(self.missed)} basis element(s), e.g. {self.missed[:3]}")
