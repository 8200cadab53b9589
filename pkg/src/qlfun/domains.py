"""Value domains: the shared field-with-log contract that lets the
q-Bernoulli machinery run over C (double precision) and over Q_p
(tracked precision) with one code path.

q parameters are carried in an exact form per domain - a complex number
on the archimedean side, a Fraction on the p-adic side - so that integer
powers q^k stay exact and the p-adic convergence disk |q-1|_p < p^(-1/(p-1))
is decidable exactly.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import DirichletCharacter
from .errors import DomainValidationError
from .padic import (
    PadicNumber,
    PrecisionPolicy,
    fraction_valuation,
    is_odd_prime,
    padic_log,
)


class ValueDomain(ABC):
    """Field operations a value domain must provide beyond the arithmetic
    operators already defined on its value type."""

    @abstractmethod
    def from_int(self, n: int): ...

    @abstractmethod
    def from_fraction(self, x: Fraction): ...

    @abstractmethod
    def embed_q(self, q): ...

    @abstractmethod
    def q_power(self, q, k: int):
        """Exact integer power of an exact q parameter."""

    @abstractmethod
    def log(self, v): ...

    @abstractmethod
    def negligible(self, v) -> bool:
        """True when v is below the domain's truncation threshold."""

    @abstractmethod
    def chi_value(self, chi: DirichletCharacter, a: int): ...

    @abstractmethod
    def validate_q(self, q) -> None: ...


@dataclass(frozen=True)
class ComplexDomain(ValueDomain):
    """Double-precision complex arithmetic; truncation threshold `tol`."""

    tol: float = 1e-15

    def from_int(self, n: int) -> complex:
        return complex(n)

    def from_fraction(self, x: Fraction) -> complex:
        return complex(x.numerator / x.denominator)

    def embed_q(self, q) -> complex:
        return complex(q)

    def q_power(self, q, k: int) -> complex:
        return complex(q) ** k

    def log(self, v: complex) -> complex:
        import cmath

        return cmath.log(v)

    def negligible(self, v: complex) -> bool:
        return abs(v) < self.tol

    def chi_value(self, chi: DirichletCharacter, a: int) -> complex:
        return chi.eval_complex(a)

    def validate_q(self, q) -> None:
        if not abs(complex(q)) < 1:
            raise DomainValidationError("complex q must satisfy |q| < 1")


@dataclass(frozen=True)
class PadicDomain(ValueDomain):
    """Q_p values at a fixed odd prime under a precision policy.  Exact q
    parameters are Fractions; embedded values are PadicNumbers with
    rel_prec = policy.target_abs_prec."""

    prime: int
    policy: PrecisionPolicy = field(default_factory=PrecisionPolicy)

    def __post_init__(self) -> None:
        if not is_odd_prime(self.prime):
            raise DomainValidationError(f"{self.prime} is not an odd prime")

    def with_target(self, target_abs_prec: int) -> "PadicDomain":
        if target_abs_prec <= self.policy.target_abs_prec:
            return self
        return PadicDomain(self.prime,
                           PrecisionPolicy(target_abs_prec,
                                           self.policy.max_terms,
                                           self.policy.min_abs_prec))

    def from_int(self, n: int) -> PadicNumber:
        return PadicNumber.from_int(n, self.prime, self.policy.target_abs_prec)

    def from_fraction(self, x: Fraction) -> PadicNumber:
        return PadicNumber.from_fraction(x, self.prime, self.policy.target_abs_prec)

    def embed_q(self, q) -> PadicNumber:
        self.validate_q(q)
        return self.from_fraction(Fraction(q))

    def q_power(self, q, k: int) -> Fraction:
        return Fraction(q) ** k

    def log(self, v: PadicNumber) -> PadicNumber:
        return padic_log(v)

    def negligible(self, v: PadicNumber) -> bool:
        return v.valuation_lower_bound() >= self.policy.target_abs_prec

    def chi_value(self, chi: DirichletCharacter, a: int) -> PadicNumber:
        return chi.eval_padic(a, self.prime, self.policy)

    def validate_q(self, q) -> None:
        q = Fraction(q)
        if q == 1:
            return  # q = 1 is the degenerate center of the disk
        if fraction_valuation(q - 1, self.prime) < 1:
            raise DomainValidationError(
                f"q must satisfy |q-1|_p < p^(-1/(p-1)); v_p(q-1) >= 1 required")
