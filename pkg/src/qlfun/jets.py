"""First-order Taylor jets (value, d/ds coefficient) over any field-like
value type that supports +, -, *, /.  Mixing a jet with a plain value
treats the plain value as a constant (derivative exactly zero)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


def _zero_like(x):
    zl = getattr(x, "zero_like", None)
    if zl is not None:
        return zl()
    return type(x)(0)


@dataclass(frozen=True)
class SJet:
    val: Any
    der: Any

    @classmethod
    def constant(cls, value) -> "SJet":
        return cls(value, _zero_like(value))

    @classmethod
    def variable(cls, value, one) -> "SJet":
        """Jet of the independent variable itself: derivative one."""
        return cls(value, one)

    def _lift(self, other) -> "SJet":
        if isinstance(other, SJet):
            return other
        return SJet(other, _zero_like(self.val))

    def __add__(self, other):
        o = self._lift(other)
        return SJet(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __neg__(self):
        return SJet(-self.val, -self.der)

    def __sub__(self, other):
        o = self._lift(other)
        return SJet(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        o = self._lift(other)
        return SJet(o.val - self.val, o.der - self.der)

    def __mul__(self, other):
        o = self._lift(other)
        return SJet(self.val * o.val, self.der * o.val + self.val * o.der)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        q = self.val / o.val
        return SJet(q, (self.der - q * o.der) / o.val)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = SJet(self.val / self.val, _zero_like(self.val)) if k == 0 else self
        # repeated squaring keeps jet ops minimal
        if k == 0:
            return out
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            base = base * base
            k >>= 1
        return result
