"""Complex-side q-zeta and q-L functions.

The defining series (|q| < 1, weight h) is

    sum_{n>=0} chi(n) q^{hn} (n+x)^{-s}
        - (h log q/(s-1)) sum_{n>=0} chi(n) q^{hn} (n+x)^{-(s-1)},

geometrically convergent for every s when h >= 1, and convergent for
Re(s) > 1 when h = 0.  The continuation path re-expresses the tail of each
residue class through the q-Bernoulli binomial series; that series
terminates exactly at s = 1-k and is asymptotic otherwise, so a block of
leading terms is summed directly first, pushing the expansion argument far
enough out that the truncated tail meets the budget tolerance.  Splitting
off leading terms is exact at every s (it only re-groups the defining
series), so the terminating values are unchanged.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import ceil, log

from .characters import DirichletCharacter, trivial_character
from .domains import ComplexDomain
from .errors import DomainValidationError, SeriesBudgetError
from .qbernoulli import QBernoulliCache, _DEFAULT_CACHE

_COMPLEX_DOMAIN = ComplexDomain()


@dataclass(frozen=True)
class SeriesBudget:
    max_n: int = 500_000
    tail_tol: float = 1e-11
    m_max: int = 72

    def __post_init__(self) -> None:
        if self.max_n < 1 or self.m_max < 1 or not self.tail_tol > 0:
            raise DomainValidationError("budget fields must be positive")


_DEFAULT_BUDGET = SeriesBudget()


def _check_s(s) -> complex:
    s = complex(s)
    if s == 1:
        raise DomainValidationError("pole at s = 1")
    return s


def _chi_weight(chi: DirichletCharacter | None, n: int) -> complex:
    if chi is None:
        return 1 + 0j
    return chi.eval_complex(n)


def _direct_two_series(s: complex, x: float, q: complex, h: int,
                       budget: SeriesBudget,
                       chi: DirichletCharacter | None, start: int) -> complex:
    """sum_{n>=start} chi(n) q^{hn} [(n+x)^{-s} - coef (n+x)^{-(s-1)}]
    with coef = h log q / (s-1)."""
    if start + x <= 0:
        raise DomainValidationError("series argument n + x must stay positive")
    sigma = s.real
    if h == 0:
        return _direct_h0(s, x, budget, chi, start)
    qh = q**h
    r = abs(qh)
    if r >= 1:
        raise DomainValidationError("|q^h| < 1 required for the direct series")
    lg = cmath.log(q)
    coef = h * lg / (s - 1)
    total = 0j
    w = qh**start
    # tau_n decreases monotonically once n + x clears the polynomial growth
    n_env = x + max(0.0, 1 - sigma) / (-log(r)) + 1
    for n in range(start, start + budget.max_n):
        c = _chi_weight(chi, n)
        base = n + x
        if c != 0:
            total += c * w * (base ** (-s) - coef * base ** (1 - s))
        tau = abs(w) * (base ** (-sigma) + abs(coef) * base ** (1 - sigma))
        if n >= n_env:
            r_eff = r * (1 + 1 / base) ** max(0.0, 1 - sigma)
            if r_eff < 1 and tau * r_eff / (1 - r_eff) < budget.tail_tol:
                return total
        w *= qh
    raise SeriesBudgetError("term budget exhausted before tail bound met")


def _direct_h0(s: complex, x: float, budget: SeriesBudget,
               chi: DirichletCharacter | None, start: int) -> complex:
    """h = 0 branch: plain (character-weighted) Hurwitz sum, Re(s) > 1."""
    sigma = s.real
    if sigma <= 1:
        raise DomainValidationError("h = 0 direct series needs Re(s) > 1")
    total = 0j
    if chi is None or chi.order == 1 and chi.modulus == 1:
        # monotone positive terms: partial sum + integral tail correction,
        # leaving an error of about (N+x)^(-sigma)/2
        n = start
        while True:
            base = n + x
            if 0.5 * base ** (-sigma) < budget.tail_tol:
                total += base ** (1 - s) / (s - 1)
                return total
            total += base ** (-s)
            n += 1
            if n - start > budget.max_n:
                raise SeriesBudgetError("term budget exhausted (h = 0 tail)")
    # mean-zero character: sum whole periods; period sums decay like N^(-sigma-1)
    f = chi.modulus
    n = start
    small = 0
    while n - start <= budget.max_n:
        period = 0j
        for _ in range(f):
            c = chi.eval_complex(n)
            if c != 0:
                period += c * (n + x) ** (-s)
            n += 1
        total += period
        scale = (n + x) / (f * max(sigma - 1, 1.0))
        if abs(period) * scale < budget.tail_tol:
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise SeriesBudgetError("term budget exhausted (character tail)")


def q_hurwitz_zeta(s, x: float, q: complex, h: int,
                   budget: SeriesBudget | None = None) -> complex:
    """zeta_q^(h)(s, x): both defining series summed to the budget tolerance."""
    s = _check_s(s)
    if x <= 0:
        raise DomainValidationError("x must be positive")
    budget = budget or _DEFAULT_BUDGET
    return _direct_two_series(s, x, complex(q), h, budget, None, start=0)


def q_l_direct(s, chi: DirichletCharacter, q: complex, h: int,
               budget: SeriesBudget | None = None) -> complex:
    """Character q-L series summed from n = 1."""
    s = _check_s(s)
    budget = budget or _DEFAULT_BUDGET
    return _direct_two_series(s, 0.0, complex(q), h, budget, chi, start=1)


def q_l_hurwitz(s, x: float, chi: DirichletCharacter, q: complex, h: int,
                budget: SeriesBudget | None = None) -> complex:
    """Hurwitz-type character series summed from n = 0 (chi(0) = 0 unless the
    conductor is 1, in which case x > 0 keeps the first term finite)."""
    s = _check_s(s)
    if x <= 0:
        raise DomainValidationError("x must be positive")
    budget = budget or _DEFAULT_BUDGET
    return _direct_two_series(s, x, complex(q), h, budget, chi, start=0)


def partial_zeta(s, a: float, f: int, q: complex, h: int,
                 budget: SeriesBudget | None = None) -> complex:
    """Residue-class zeta H(s, a | f) = f^(-s) q^(ha) zeta_{q^f}^{(h)}(s, a/f);
    a may carry a real shift (0 < a <= f + 1)."""
    s = _check_s(s)
    if not 0 < a <= f + 1:
        raise DomainValidationError("need 0 < a <= f (+ shift)")
    budget = budget or _DEFAULT_BUDGET
    q = complex(q)
    zeta = _direct_two_series(s, a / f, q**f, h, budget, None, start=0)
    return f ** (-s) * q ** (h * a) * zeta


def _is_terminating(s: complex) -> bool:
    return s.imag == 0 and s.real <= 0 and float(s.real).is_integer()


def q_l_continuation(s, x: float, chi: DirichletCharacter, q: complex, h: int,
                     m_max: int | None = None, head_terms: int | None = None,
                     budget: SeriesBudget | None = None,
                     cache: QBernoulliCache | None = None) -> complex:
    """Analytic continuation through the q-Bernoulli binomial series.

    Each residue class a mod f contributes
        chi(a) q^(h a') (a'+x)^(1-s)/((s-1) f)
            * sum_m C(1-s, m) (f/(a'+x))^m B_{m, q^f}
    after a' = a + head*f leading indices are summed directly.  At
    s = 1-k the inner sum terminates at m = k and the value is exact for
    every head count."""
    s = _check_s(s)
    if x <= 0:
        raise DomainValidationError("x must be positive")
    budget = budget or _DEFAULT_BUDGET
    m_max = m_max if m_max is not None else budget.m_max
    cache = cache or _DEFAULT_CACHE
    chi = chi.primitive()
    f = chi.modulus
    q = complex(q)
    lg = cmath.log(q)
    coef = h * lg / (s - 1)
    terminating = _is_terminating(s)
    if head_terms is None:
        head_terms = 0 if terminating else max(1, ceil(30 / f))
    total = 0j
    if f == 1:
        total += x ** (-s) - coef * x ** (1 - s)  # the n = 0 term
    for n in range(1, head_terms * f + 1):
        c = chi.eval_complex(n)
        if c != 0:
            base = n + x
            total += c * q ** (h * n) * (base ** (-s) - coef * base ** (1 - s))
    b_values = cache.numbers(_COMPLEX_DOMAIN, q**f, h, m_max)
    for a in range(1, f + 1):
        c = chi.eval_complex(a)
        if c == 0:
            continue
        shifted = a + head_terms * f
        z = shifted + x
        w = c * q ** (h * shifted) * z ** (1 - s) / ((s - 1) * f)
        ratio = f / z
        inner_tol = budget.tail_tol * 0.05 / max(abs(w), 1e-300)
        binom = 1 + 0j
        rp = 1 + 0j
        inner = 0j
        prev_mag = None
        grew = 0
        for m in range(m_max + 1):
            term = binom * rp * b_values[m]
            inner += term
            mag = abs(term)
            binom *= (1 - s - m) / (m + 1)
            rp *= ratio
            if binom == 0:
                break  # terminating s: C(1-s, m) vanished exactly
            if m >= 2 and mag < inner_tol:
                break
            if prev_mag is not None and mag > prev_mag:
                grew += 1
                if grew >= 3 and not terminating:
                    raise SeriesBudgetError(
                        "binomial tail floor above tolerance; raise head_terms")
            else:
                grew = 0
            prev_mag = mag
        else:
            if not terminating:
                raise SeriesBudgetError("m_max too small for non-integer s")
        total += w * inner
    return total
