"""Finite-precision arithmetic in Q_p for a fixed odd prime.

Elements are stored as p^valuation * unit with the unit kept modulo
p^rel_prec, so the element is known modulo p^(valuation + rel_prec).
Addition can cancel leading digits; a sum indistinguishable from zero at
the shared precision becomes a zero marker that remembers the O(p^N)
bound.  Values are immutable and arithmetic never claims more digits than
the operands justify (dividing by an element of valuation w costs w digits
of absolute precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .errors import DomainValidationError, PrecisionUnderflowError

# Window used when an operation needs digits for an exact (infinitely
# precise) value and no context supplies one.
_EXACT_WINDOW = 64

_PRIMALITY_CACHE: dict[int, bool] = {}


def is_odd_prime(p: int) -> bool:
    if p not in _PRIMALITY_CACHE:
        ok = p > 2 and p % 2 == 1 and all(p % d for d in range(3, int(p**0.5) + 1, 2))
        _PRIMALITY_CACHE[p] = ok
    return _PRIMALITY_CACHE[p]


def int_valuation(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def fraction_valuation(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working-precision contract: results good modulo p^target_abs_prec,
    series capped at max_terms, operations may not return fewer than
    min_abs_prec certain digits."""

    target_abs_prec: int = 30
    max_terms: int = 600
    min_abs_prec: int = 1

    def __post_init__(self) -> None:
        if not (self.target_abs_prec > self.min_abs_prec >= 1):
            raise DomainValidationError(
                "require target_abs_prec > min_abs_prec >= 1, got "
                f"{self.target_abs_prec}/{self.min_abs_prec}"
            )
        if self.max_terms < 1:
            raise DomainValidationError("max_terms must be >= 1")

    def bump(self, extra: int) -> "PrecisionPolicy":
        """Same policy with extra digits of absolute-precision head-room."""
        if extra <= 0:
            return self
        return PrecisionPolicy(self.target_abs_prec + extra,
                               self.max_terms, self.min_abs_prec)


@dataclass(frozen=True)
class PadicNumber:
    """p^valuation * unit with unit known modulo p^rel_prec.

    Zero (exact, or known only to O(p^abs_prec)) is marked by
    valuation=None, unit=0, rel_prec=0; abs_prec is +inf for exact zero.
    For nonzero values abs_prec == valuation + rel_prec always holds.
    """

    prime: int
    valuation: int | None
    unit: int
    rel_prec: int
    abs_prec: int | float

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, p: int, abs_prec: int | float = inf) -> "PadicNumber":
        return cls(p, None, 0, 0, abs_prec)

    @classmethod
    def from_int(cls, n: int, p: int, rel_prec: int) -> "PadicNumber":
        return cls.from_fraction(Fraction(n), p, rel_prec)

    @classmethod
    def from_fraction(cls, x: Fraction | int, p: int, rel_prec: int) -> "PadicNumber":
        if rel_prec < 1:
            raise PrecisionUnderflowError("rel_prec must be >= 1")
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        num, den = x.numerator, x.denominator
        vn = int_valuation(num, p) if num % p == 0 else 0
        vd = int_valuation(den, p) if den % p == 0 else 0
        mod = p**rel_prec
        unit = (num // p**vn) * pow(den // p**vd, -1, mod) % mod
        v = vn - vd
        return cls(p, v, unit, rel_prec, v + rel_prec)

    @classmethod
    def _from_scaled_int(cls, value: int, p: int, window: int,
                         shift: int = 0) -> "PadicNumber":
        """Element p^shift * value with value an integer known mod p^window."""
        value %= p**max(0, window)
        if value == 0:
            return cls.zero(p, window + shift)
        v = int_valuation(value, p)
        rel = window - v
        if rel < 1:
            return cls.zero(p, window + shift)
        unit = (value // p**v) % p**rel
        return cls(p, v + shift, unit, rel, v + shift + rel)

    # -- predicates / views --------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    def valuation_lower_bound(self) -> int | float:
        """v_p of the element if nonzero, else the O(p^N) knowledge bound."""
        return self.abs_prec if self.is_zero else self.valuation

    def lifted_int(self, floor_val: int, window: int) -> int:
        """Integer c with self = p^floor_val * c mod p^(floor_val + window)."""
        if self.is_zero:
            return 0
        if self.valuation < floor_val:
            raise ValueError("floor_val above element valuation")
        return (self.unit * self.prime ** (self.valuation - floor_val)) % (
            self.prime ** max(0, window)
        )

    def unit_mod(self, k: int) -> int:
        if self.is_zero:
            return 0
        if k > self.rel_prec:
            raise PrecisionUnderflowError(
                f"unit requested mod p^{k}, only {self.rel_prec} digits retained")
        return self.unit % self.prime**k

    def digits(self) -> list[int]:
        """Base-p digits of the unit, least significant first, length rel_prec."""
        out, u = [], self.unit
        for _ in range(self.rel_prec):
            u, d = divmod(u, self.prime)
            out.append(d)
        return out

    def truncated(self, abs_prec: int | float) -> "PadicNumber":
        """Forget digits beyond p^abs_prec."""
        if abs_prec >= self.abs_prec:
            return self
        if self.is_zero:
            return PadicNumber.zero(self.prime, abs_prec)
        rel = int(abs_prec) - self.valuation
        if rel < 1:
            return PadicNumber.zero(self.prime, abs_prec)
        return PadicNumber(self.prime, self.valuation,
                           self.unit % self.prime**rel, rel, int(abs_prec))

    def zero_like(self) -> "PadicNumber":
        return PadicNumber.zero(self.prime)

    def __str__(self) -> str:
        if self.is_zero:
            return f"O({self.prime}^{self.abs_prec})"
        return (f"{self.unit}*{self.prime}^{self.valuation}"
                f" + O({self.prime}^{self.abs_prec})")

    # -- coercion --------------------------------------------------------

    def _coerce(self, other, for_add: bool):
        """Lift an exact int/Fraction next to self with enough digits that
        the operation's precision is limited by self, not the constant."""
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise DomainValidationError("mixed primes")
            return other
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        x = Fraction(other)
        if x == 0:
            return PadicNumber.zero(self.prime)
        v = fraction_valuation(x, self.prime)
        if for_add:
            bound = self.abs_prec if self.abs_prec != inf else _EXACT_WINDOW
            rel = max(1, int(bound) - v)
        else:
            rel = max(1, self.rel_prec, _EXACT_WINDOW if self.is_zero else 1)
        return PadicNumber.from_fraction(x, self.prime, rel)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other, for_add=True)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(self.prime, min(self.abs_prec, other.abs_prec))
        if self.is_zero:
            return other.truncated(self.abs_prec)
        if other.is_zero:
            return self.truncated(other.abs_prec)
        prec = int(min(self.abs_prec, other.abs_prec))
        floor = min(self.valuation, other.valuation)
        window = prec - floor
        s = self.lifted_int(floor, window) + other.lifted_int(floor, window)
        return PadicNumber._from_scaled_int(s, self.prime, window, shift=floor)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.prime, self.valuation,
                           (-self.unit) % self.prime**self.rel_prec,
                           self.rel_prec, self.abs_prec)

    def __sub__(self, other):
        other = self._coerce(other, for_add=True)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other, for_add=False)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            bound = self.valuation_lower_bound() + other.valuation_lower_bound()
            return PadicNumber.zero(self.prime, bound)
        rel = min(self.rel_prec, other.rel_prec)
        unit = (self.unit * other.unit) % self.prime**rel
        v = self.valuation + other.valuation
        return PadicNumber(self.prime, v, unit, rel, v + rel)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other, for_add=False)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by (indistinguishable-from-)zero p-adic")
        if self.is_zero:
            return PadicNumber.zero(self.prime, self.abs_prec - other.valuation)
        rel = min(self.rel_prec, other.rel_prec)
        if rel < 1:
            raise PrecisionUnderflowError("no digits left after division")
        mod = self.prime**rel
        unit = (self.unit * pow(other.unit % mod, -1, mod)) % mod
        v = self.valuation - other.valuation
        return PadicNumber(self.prime, v, unit, rel, v + rel)

    def __rtruediv__(self, other):
        lifted = self._coerce(other, for_add=False)
        if lifted is NotImplemented:
            return NotImplemented
        return lifted / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / self.__pow__(-k)
        result = PadicNumber.from_int(1, self.prime, max(1, self.rel_prec))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def padic_from_rational(num: int, den: int, p: int,
                        policy: PrecisionPolicy) -> PadicNumber:
    """Embed num/den into Q_p with policy.target_abs_prec retained digits."""
    if den == 0:
        raise DomainValidationError("denominator must be nonzero")
    if not is_odd_prime(p):
        raise DomainValidationError(f"{p} is not an odd prime")
    return PadicNumber.from_fraction(Fraction(num, den), p, policy.target_abs_prec)


def _log_floor(n: int, p: int) -> int:
    """floor(log_p n) + 1, an upper bound for v_p(m) over all m <= n-ish scales."""
    b = 0
    while p**b <= n:
        b += 1
    return b


def padic_log(x: PadicNumber) -> PadicNumber:
    """Principal branch log(1+t) = sum (-1)^(n+1) t^n / n, for |x-1|_p < 1."""
    t = x - 1
    if t.is_zero:
        return PadicNumber.zero(x.prime, t.abs_prec)
    if t.valuation < 1:
        raise DomainValidationError("padic_log requires |x-1|_p < 1")
    p = x.prime
    target = t.abs_prec
    vt = t.valuation
    acc = PadicNumber.zero(p, target)
    power = t
    n = 1
    # All terms from index n on have valuation >= n*vt - log_p(n), which is
    # increasing in n because vt >= 1; stop once that certified floor
    # clears the target.
    while n * vt - _log_floor(n, p) < target:
        term = power / n if n % 2 else -(power / n)
        acc = acc + term
        n += 1
        power = power * t
    return acc


def padic_exp(x: PadicNumber) -> PadicNumber:
    """exp on its convergence disk: requires v_p(x) >= 1 for odd p."""
    p = x.prime
    if x.is_zero:
        window = _EXACT_WINDOW if x.abs_prec == inf else int(x.abs_prec)
        return PadicNumber.from_int(1, p, window)
    if x.valuation < 1:
        raise DomainValidationError("padic_exp requires v_p(x) >= 1")
    target = int(x.abs_prec)
    vx = x.valuation
    acc = PadicNumber.from_int(1, p, target)
    term = PadicNumber.from_int(1, p, target)
    n = 1
    # v_p(x^n/n!) >= n*vx - (n-1)/(p-1), increasing in n since vx >= 1.
    while (n * vx) - (n - 1 + p - 2) // (p - 1) < target:
        term = term * x / n
        acc = acc + term
        n += 1
    return acc.truncated(target)


def teichmuller(a: int | PadicNumber, p: int | None = None,
                policy: PrecisionPolicy | None = None) -> PadicNumber:
    """The (p-1)-st root of unity congruent to a mod p, via x -> x^p iteration."""
    if isinstance(a, PadicNumber):
        p = a.prime
        if a.is_zero or a.valuation != 0:
            raise DomainValidationError("teichmuller needs a p-adic unit")
        n_digits = a.rel_prec if policy is None else policy.target_abs_prec
        a0 = a.unit_mod(1)
    else:
        if p is None:
            raise DomainValidationError("prime required for integer input")
        if not is_odd_prime(p):
            raise DomainValidationError(f"{p} is not an odd prime")
        if a % p == 0:
            raise DomainValidationError("teichmuller undefined when p divides a")
        n_digits = (policy or PrecisionPolicy()).target_abs_prec
        a0 = a % p
    mod = p**n_digits
    x = a0 % mod
    for _ in range(n_digits + 2):
        nxt = pow(x, p, mod)
        if nxt == x:
            break
        x = nxt
    return PadicNumber(p, 0, x, n_digits, n_digits)


def angle(a: int, p: int, policy: PrecisionPolicy | None = None) -> PadicNumber:
    """<a> = a / teichmuller(a), the part of a congruent to 1 mod p."""
    policy = policy or PrecisionPolicy()
    w = teichmuller(a, p, policy)
    return PadicNumber.from_int(a, p, policy.target_abs_prec) / w


def padic_log_extended(x: PadicNumber | int, p: int | None = None,
                       policy: PrecisionPolicy | None = None) -> PadicNumber:
    """Iwasawa branch on all of Q_p^x: log p = 0, and the Teichmuller factor
    of the unit part is a root of unity with log 0, so
    log x = padic_log(unit / teichmuller(unit))."""
    if isinstance(x, int):
        if p is None:
            raise DomainValidationError("prime required for integer input")
        policy = policy or PrecisionPolicy()
        x = PadicNumber.from_int(x, p, policy.target_abs_prec)
    if x.is_zero:
        raise DomainValidationError("log of zero")
    unit_part = PadicNumber(x.prime, 0, x.unit, x.rel_prec, x.rel_prec)
    w = teichmuller(unit_part)
    return padic_log(unit_part / w)


def padic_pow_s(u: PadicNumber, s):
    """u^s = exp(s log u) for u = 1 mod p, s in the analyticity disk
    (v_p(s) >= 0).  An SJet exponent propagates d/ds u^s = log(u) u^s
    into the derivative slot."""
    from .jets import SJet  # keeps the module dependency one-way

    if u.is_zero or u.valuation != 0 or (u - 1).valuation_lower_bound() < 1:
        raise DomainValidationError("padic_pow_s requires u = 1 mod p")
    lg = padic_log(u)
    if isinstance(s, SJet):
        base = _pow_s_value(u, s.val, lg)
        return SJet(base, s.der * lg * base)
    return _pow_s_value(u, s, lg)


def _pow_s_value(u: PadicNumber, s, lg: PadicNumber) -> PadicNumber:
    if not isinstance(s, PadicNumber):
        s = u._coerce(s, for_add=False)
    if not s.is_zero and s.valuation < 0:
        raise DomainValidationError("exponent outside the analyticity disk")
    return padic_exp(s * lg)
