"""Dirichlet characters mod f with exact root-of-unity values.

A character is stored as an exponent table: chi(a) = zeta_m^e(a) on units,
zero elsewhere, with m the exact order.  Values can be realized in C
(zeta_m -> exp(2 pi i/m)) or in Q_p (zeta_m -> omega(g)^((p-1)/m) for the
smallest primitive root g mod p; requires m | p-1).
"""

from __future__ import annotations

import cmath
from functools import lru_cache
from math import gcd, lcm, pi

from .errors import DomainValidationError, UnsupportedCharacterError
from .padic import PadicNumber, PrecisionPolicy, is_odd_prime, teichmuller


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def smallest_primitive_root(p: int) -> int:
    if not is_odd_prime(p):
        raise DomainValidationError(f"{p} is not an odd prime")
    factors = set()
    m = p - 1
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise RuntimeError("unreachable: no primitive root found")


@lru_cache(maxsize=None)
def _teichmuller_root_unit(p: int, n_digits: int) -> int:
    """Unit of omega(g) mod p^n_digits for the smallest primitive root g."""
    g = smallest_primitive_root(p)
    w = teichmuller(g, p, PrecisionPolicy(target_abs_prec=max(2, n_digits)))
    return w.unit_mod(n_digits)


class DirichletCharacter:
    """Character mod `modulus` of exact order `order`; `exponents` maps each
    unit residue to e(a) in Z/order."""

    __slots__ = ("modulus", "order", "exponents", "_conductor")

    def __init__(self, modulus: int, order: int, exponents: dict[int, int]):
        if modulus < 1:
            raise DomainValidationError("modulus must be positive")
        units = ({0} if modulus == 1 else
                 {a for a in range(modulus) if gcd(a, modulus) == 1})
        if set(exponents) != units:
            raise DomainValidationError("exponent table must cover exactly the units")
        # normalize to the exact order
        g = order
        for e in exponents.values():
            g = gcd(g, e)
        if g > 1:
            order //= g
            exponents = {a: e // g for a, e in exponents.items()}
        exponents = {a: e % order for a, e in exponents.items()}
        if exponents[1 % modulus] != 0:
            raise DomainValidationError("chi(1) must be 1")
        for a, ea in exponents.items():
            for b, eb in exponents.items():
                if (ea + eb - exponents[(a * b) % modulus]) % order:
                    raise DomainValidationError("table is not multiplicative")
        self.modulus = modulus
        self.order = order
        self.exponents = dict(exponents)
        self._conductor: int | None = None

    # -- identity ---------------------------------------------------------

    def _key(self):
        return (self.modulus, self.order, tuple(sorted(self.exponents.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, DirichletCharacter) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.modulus}, order {self.order})"

    # -- evaluation ---------------------------------------------------------

    def exponent(self, a: int) -> int | None:
        """e(a) with chi(a) = zeta_order^e(a), or None when chi(a) = 0."""
        return self.exponents.get(a % self.modulus)

    def eval_complex(self, a: int) -> complex:
        e = self.exponent(a)
        if e is None:
            return 0j
        m = self.order
        if m == 1:
            return 1 + 0j
        if m == 2:
            return complex(1 if e == 0 else -1)
        if m == 4:
            return (1j) ** e
        return cmath.exp(2j * pi * e / m)

    def eval_padic(self, a: int, p: int, policy: PrecisionPolicy) -> PadicNumber:
        if (p - 1) % self.order:
            raise UnsupportedCharacterError(
                f"order {self.order} does not divide p-1 = {p - 1}")
        e = self.exponent(a)
        if e is None:
            return PadicNumber.zero(p)
        n = policy.target_abs_prec
        mod = p**n
        root = _teichmuller_root_unit(p, n)
        val = pow(root, ((p - 1) // self.order) * e, mod)
        return PadicNumber(p, 0, val, n, n)

    # -- structure ----------------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def conductor(self) -> int:
        if self._conductor is None:
            f = self.modulus
            for d in _divisors(f):
                if all(self.exponents[a] == 0
                       for a in self.exponents
                       if a % d == 1 % d):
                    self._conductor = d
                    break
        return self._conductor

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive(self) -> "DirichletCharacter":
        """The primitive character inducing this one."""
        d = self.conductor
        if d == self.modulus:
            return self
        table: dict[int, int] = {}
        residues = [0] if d == 1 else [b for b in range(d) if gcd(b, d) == 1]
        for b in residues:
            a = b
            while gcd(a, self.modulus) != 1:
                a += d
            table[b] = self.exponents[a % self.modulus]
        return DirichletCharacter(d, self.order, table)

    def extend(self, modulus: int) -> "DirichletCharacter":
        """Induce to a multiple of the modulus (zero off the new units)."""
        if modulus % self.modulus:
            raise DomainValidationError("can only extend to a multiple")
        if modulus == self.modulus:
            return self
        table = {a: self.exponents[a % self.modulus]
                 for a in range(modulus) if gcd(a, modulus) == 1}
        return DirichletCharacter(modulus, self.order, table)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = lcm(self.modulus, other.modulus)
        a_ext, b_ext = self.extend(M), other.extend(M)
        L = lcm(self.order, other.order)
        table = {a: ((a_ext.exponents[a] * (L // self.order))
                     + (b_ext.exponents[a] * (L // other.order))) % L
                 for a in a_ext.exponents}
        return DirichletCharacter(M, L, table)

    def __pow__(self, k: int) -> "DirichletCharacter":
        m = self.order
        table = {a: (e * k) % m for a, e in self.exponents.items()}
        return DirichletCharacter(self.modulus, m, table)


# -- constructors ------------------------------------------------------------


def character_from_table(f: int, generator_images: dict[int, int],
                         m: int) -> DirichletCharacter:
    """Expand generator images into a full character table mod f.

    The images must define a homomorphism into Z/m and the given residues
    must generate the full unit group, or an error is raised.
    """
    if m < 1:
        raise DomainValidationError("order must be positive")
    units = [0] if f == 1 else [a for a in range(f) if gcd(a, f) == 1]
    known: dict[int, int] = {1 % f: 0}
    for a in generator_images:
        if f > 1 and gcd(a, f) != 1:
            raise DomainValidationError(f"generator {a} is not a unit mod {f}")
    frontier = True
    while frontier:
        frontier = False
        for g, eg in generator_images.items():
            for a, ea in list(known.items()):
                b = (a * g) % f
                eb = (ea + eg) % m
                if b in known:
                    if known[b] != eb:
                        raise DomainValidationError(
                            "generator images are not a homomorphism")
                else:
                    known[b] = eb
                    frontier = True
    if len(known) != len(units):
        raise DomainValidationError("given residues do not generate the unit group")
    return DirichletCharacter(f, m, known)


def trivial_character(modulus: int = 1) -> DirichletCharacter:
    table = ({0: 0} if modulus == 1 else
             {a: 0 for a in range(modulus) if gcd(a, modulus) == 1})
    return DirichletCharacter(modulus, 1, table)


def quadratic_character(f: int) -> DirichletCharacter:
    """The quadratic character mod f (Legendre symbol for odd prime f, the
    nontrivial character mod 4 for f = 4)."""
    if f == 4:
        return DirichletCharacter(4, 2, {1: 0, 3: 1})
    if not is_odd_prime(f):
        raise DomainValidationError("quadratic_character supports odd primes and 4")
    table = {a: 0 if pow(a, (f - 1) // 2, f) == 1 else 1 for a in range(1, f)}
    return DirichletCharacter(f, 2, table)


def teichmuller_character(p: int) -> DirichletCharacter:
    """omega as a character mod p: omega(g^k) = zeta_(p-1)^k."""
    g = smallest_primitive_root(p)
    table = {}
    x, k = 1, 0
    for _ in range(p - 1):
        table[x] = k
        x = (x * g) % p
        k += 1
    return DirichletCharacter(p, p - 1, table)


def character_from_spec(text: str) -> DirichletCharacter:
    """Parse `f=<int> m=<int> map=a1:e1,a2:e2,...` (map may be empty for the
    trivial character)."""
    fields: dict[str, str] = {}
    for tok in text.replace(",", " , ").split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            fields[k.strip()] = v.strip()
    try:
        f = int(fields["f"])
        m = int(fields["m"])
    except (KeyError, ValueError) as exc:
        raise DomainValidationError(f"bad character spec {text!r}") from exc
    images: dict[int, int] = {}
    map_text = fields.get("map", "")
    if map_text:
        for pair in map_text.split(","):
            pair = pair.strip()
            if not pair:
                continue
            a_s, e_s = pair.split(":")
            images[int(a_s)] = int(e_s)
    return character_from_table(f, images, m)


# -- twisting --------------------------------------------------------------


class TwistedCharacter:
    """chi_n = chi * omega^(-n), stored with modulus lcm(f, p) and exposing
    its own conductor and primitive version."""

    __slots__ = ("base", "twist_n", "prime", "composite", "primitive")

    def __init__(self, base: DirichletCharacter, n: int, p: int):
        if not is_odd_prime(p):
            raise DomainValidationError(f"{p} is not an odd prime")
        self.base = base
        self.twist_n = n
        self.prime = p
        omega = teichmuller_character(p)
        self.composite = base * (omega ** (-n % (p - 1)))
        self.primitive = self.composite.primitive()

    @property
    def conductor(self) -> int:
        return self.primitive.modulus

    @property
    def order(self) -> int:
        return self.primitive.order

    def eval_padic(self, a: int, policy: PrecisionPolicy) -> PadicNumber:
        """Value on the composite modulus (zero when gcd(a, lcm(f,p)) > 1)."""
        return self.composite.eval_padic(a, self.prime, policy)

    def value_at_p(self, policy: PrecisionPolicy) -> PadicNumber:
        """chi_n(p) through the primitive character; zero iff p | conductor."""
        return self.primitive.eval_padic(self.prime, self.prime, policy)


def twist(chi: DirichletCharacter, n: int, p: int) -> TwistedCharacter:
    return TwistedCharacter(chi, n, p)


def chi_eval_complex(chi: DirichletCharacter, a: int) -> complex:
    return chi.eval_complex(a)


def chi_eval_padic(chi: DirichletCharacter, a: int, p: int,
                   policy: PrecisionPolicy) -> PadicNumber:
    return chi.eval_padic(a, p, policy)
