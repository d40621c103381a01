"""Exception types shared across the package."""


class ChainDesignError(Exception):
    """Base class for all library errors."""


class ChainPreservationError(ChainDesignError):
    """A permutation mapped some partition class to a non-class."""


class NonIntegralYError(ChainDesignError):
    """A uniform-sequence entry came out non-integral.

    Carries the first offending index and its exact rational value.
    """

    def __init__(self, index, value):
        super().__init__(f"y_{index} = {value} is not an integer")
        self.index = index
        self.value = value


class InfeasibleError(ChainDesignError):
    """The divisibility conditions reject the requested parameters."""


class NotUniformError(ChainDesignError):
    """A point set meets two same-level classes in different sizes.

    Carries the witness level and the two offending classes with counts.
    """

    def __init__(self, level, class_a, count_a, class_b, count_b):
        super().__init__(
            f"level {level}: class {class_a} meets in {count_a} points, "
            f"class {class_b} in {count_b}"
        )
        self.level = level
        self.class_a = class_a
        self.count_a = count_a
        self.class_b = class_b
        self.count_b = count_b


class EnumerationCapError(ChainDesignError):
    """Block enumeration refused: the exact block count exceeds the cap."""

    def __init__(self, block_count, cap):
        super().__init__(f"block count {block_count} exceeds cap {cap}")
        self.block_count = block_count
        self.cap = cap


class OrbitCapError(ChainDesignError):
    """Orbit closure stopped early; carries the partial size found."""

    def __init__(self, partial_size, cap):
        super().__init__(f"orbit exceeded cap {cap} (found {partial_size} so far)")
        self.partial_size = partial_size
        self.cap = cap


class InternalConsistencyError(ChainDesignError):
    """Two routes that must agree did not; signals a bug, not bad input."""
