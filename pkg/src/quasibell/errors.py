"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    pass


class TruncationError(ValueError):
    """The Fock cutoff drops more probability than the caller allows."""

    def __init__(self, deficit, tolerance, label=None):
        self.deficit = deficit
        self.tolerance = tolerance
        self.label = label
        where = "" if label is None else f" for label {label}"
        super().__init__(
            f"truncation deficit {deficit:.3e}{where} exceeds tolerance {tolerance:.3e}"
        )


class DegenerateStateError(ValueError):
    """An odd quasi-Bell state was requested at alpha = beta = 0."""


class BasisUndefinedError(ValueError):
    """The pair {|a>, |-a>} is linearly dependent (label at or near zero)."""


class CriticalCaseError(ValueError):
    """e * theta * B = 1: the effective mass vanishes."""


class UnsupportedError(ValueError):
    """Requested quantity has no closed form for the given inputs."""
