"""Parameter types for the surface families."""

import math
from dataclasses import dataclass


class BuilderParameterError(ValueError):
    """Raised for parameters outside a family's range."""


@dataclass(frozen=True)
class NgonParams:
    """Regular n-gon with opposite sides glued, unit side length."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 8 or self.n % 2 != 0:
            raise BuilderParameterError(
                f"regular n-gon surfaces need an even n >= 8, got {self.n}"
            )

    @property
    def labels(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class BouwMollerParams:
    """Bouw-Moller surface S_{m,n}.

    ``normalized`` divides every length by sin(π/m) so the shortest side is 1.
    """

    m: int
    n: int
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.m < 2 or self.n < 2 or (self.m, self.n) == (2, 2):
            raise BuilderParameterError(
                f"Bouw-Moller surfaces need m, n >= 2 and (m, n) != (2, 2), "
                f"got ({self.m}, {self.n})"
            )

    @property
    def d(self) -> int:
        return math.gcd(self.m, self.n)

    @property
    def scale(self) -> float:
        return 1.0 / math.sin(math.pi / self.m) if self.normalized else 1.0
