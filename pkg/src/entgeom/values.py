"""Exact entropy values: a nonnegative rational multiple of log p."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class EntropyValue:
    coefficient: Fraction
    base_prime: int

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.coefficient < 0:
            raise ValueError("entropy coefficient must be nonnegative")

    @property
    def nats(self) -> float:
        return float(self.coefficient) * math.log(self.base_prime)

    def __add__(self, other: EntropyValue) -> EntropyValue:
        if other.coefficient == 0:
            return self
        if self.coefficient == 0:
            return other
        if other.base_prime != self.base_prime:
            raise ValueError("cannot add entropies with different base primes exactly")
        return EntropyValue(self.coefficient + other.coefficient, self.base_prime)

    def scaled(self, k: int | Fraction) -> EntropyValue:
        return EntropyValue(self.coefficient * k, self.base_prime)

    def exact(self) -> str:
        c = self.coefficient
        if c == 0:
            return "0"
        return f"{c} · log {self.base_prime}"

    def __str__(self) -> str:
        return f"{self.exact()} = {self.nats:.6f} nats"


def zero(p: int) -> EntropyValue:
    return EntropyValue(Fraction(0), p)
