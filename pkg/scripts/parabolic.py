"""
Parabolic Slopes
Slopes of Schubert positions for rational flag weights and the generic-flag
semistability test
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from horn import enumerate_essential_positions
from partitions import IndexSet, InvalidInputError, Partition, partition_from_index_set


@dataclass(frozen=True)
class ParabolicWeights:
    """s nonincreasing rational sequences of length m."""

    m: int
    weights: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        weights = tuple(tuple(Fraction(x) for x in seq) for seq in self.weights)
        object.__setattr__(self, 'weights', weights)
        if self.m < 1:
            raise InvalidInputError(f"Need m >= 1, got {self.m}")
        if len(weights) < 3:
            raise InvalidInputError(f"Need at least 3 weight sequences, got {len(weights)}")
        for seq in weights:
            if len(seq) != self.m:
                raise InvalidInputError(f"Weight sequence {seq} does not have length {self.m}")
            if any(a < b for a, b in zip(seq, seq[1:])):
                raise InvalidInputError(f"Weight sequence {seq} is not nonincreasing")

    @property
    def s(self) -> int:
        return len(self.weights)

    def shifted(self, c) -> 'ParabolicWeights':
        c = Fraction(c)
        return ParabolicWeights(self.m, tuple(tuple(x + c for x in seq) for seq in self.weights))

    def scaled(self, c) -> 'ParabolicWeights':
        c = Fraction(c)
        return ParabolicWeights(self.m, tuple(tuple(x * c for x in seq) for seq in self.weights))

    @classmethod
    def parse(cls, text: str) -> 'ParabolicWeights':
        """'1/2,0:1,0:1,0', one comma-separated sequence per factor."""
        found = []
        for tok in text.split(':'):
            try:
                found.append(tuple(Fraction(x) for x in tok.split(',')))
            except (ValueError, ZeroDivisionError):
                raise InvalidInputError(f"Malformed weights '{tok}'")
        return cls(len(found[0]), tuple(found))

    @classmethod
    def from_partitions(cls, lams: Sequence[Partition], m: int) -> 'ParabolicWeights':
        return cls(m, tuple(lam.padded(m) for lam in lams))

    @classmethod
    def from_index_sets(cls, H: Sequence[IndexSet], q: int) -> 'ParabolicWeights':
        """λ(H^p) in Gr(m, q+m) as weights: q + a - H^p_a."""
        m = len(H[0])
        return cls(m, tuple(partition_from_index_set(Hp, q + m, m).padded(m) for Hp in H))


def slope(E: Sequence[IndexSet], W: ParabolicWeights) -> Fraction:
    """(1/e) Σ_p Σ_{a∈E^p} λ^p_a."""
    if len(E) != W.s:
        raise InvalidInputError(f"Expected {W.s} position sets, got {len(E)}")
    e = len(E[0])
    if e == 0:
        raise InvalidInputError("Slope of the zero subspace is undefined")
    for Ep in E:
        if len(Ep) != e or Ep.ambient != W.m:
            raise InvalidInputError(f"{Ep} is not an {e}-subset of [{W.m}]")
    total = sum(seq[a - 1] for Ep, seq in zip(E, W.weights) for a in Ep)
    return Fraction(total) / e


def full_slope(W: ParabolicWeights) -> Fraction:
    return slope((IndexSet.full(W.m),) * W.s, W)


def first_destabilizing_position(W: ParabolicWeights) -> Optional[Tuple[IndexSet, ...]]:
    """
    First achievable position with slope above the ambient slope.

    For general flags a position is realized by some subspace exactly when
    its Schubert product in Gr(e, m) is nonzero, and the slope of a subspace
    depends only on its position.
    """
    ambient = full_slope(W)
    for e in range(1, W.m):
        for E in enumerate_essential_positions(W.m, e, W.s):
            if slope(E, W) > ambient:
                return E
    return None


def generic_semistable(W: ParabolicWeights) -> bool:
    if W.m == 1:
        return True
    return first_destabilizing_position(W) is None
