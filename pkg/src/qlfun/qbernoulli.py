"""q-deformed Bernoulli numbers and polynomials, their character-weighted
generalizations, and the Volkenborn-sum oracle.

The deformation has generating function (h log q + t) e^{xt} / (q^h e^t - 1);
equivalently the numbers solve

    B_0 = h log q / (q^h - 1),
    q^h * sum_k C(n,k) B_k - B_n = [n == 1]        (n >= 1),

which is the recursion used as the source of truth.  For h = 0 the left
side degenerates (q^0 - 1 = 0) and the classical Bernoulli recursion takes
over, making B_n independent of q exactly.  Everything is generic over a
ValueDomain; in Q_p the module requests head-room up front because every
recursion level divides by q^h - 1 (valuation v_p(q^h - 1) > 0).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .characters import DirichletCharacter
from .domains import ComplexDomain, PadicDomain, ValueDomain
from .errors import DomainValidationError
from .padic import (
    PadicNumber,
    PrecisionPolicy,
    fraction_valuation,
    padic_log,
)

_GUARD = 4  # extra digits beyond computed head-room


@lru_cache(maxsize=None)
def _classical_bernoulli_upto(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n as exact Fractions (convention B_1 = -1/2)."""
    out = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(comb(m + 1, k) * out[k] for k in range(m))
        out.append(-acc / (m + 1))
    return tuple(out)


def classical_bernoulli(n: int) -> Fraction:
    return _classical_bernoulli_upto(n)[n]


def _padic_headroom(domain: PadicDomain, q: Fraction, h: int, n: int) -> int:
    if h == 0:
        return 0
    w = fraction_valuation(Fraction(q) ** h - 1, domain.prime)
    return (n + 2) * w + _GUARD


class QBernoulliCache:
    """Memoized tables of B_{0..n} keyed by (domain, q, h).

    p-adic entries record the working precision they were computed at and
    are recomputed wholesale when a longer or more precise table is needed,
    so a cached slice always equals a fresh computation.
    """

    def __init__(self) -> None:
        self._store: dict[tuple, tuple[int, list]] = {}

    def numbers(self, domain: ValueDomain, q, h: int, n: int) -> list:
        """Full-working-precision list B_0..B_n (not truncated)."""
        if isinstance(domain, PadicDomain):
            q = Fraction(q)
        key = (domain, q, h)
        work = 0
        if isinstance(domain, PadicDomain):
            work = domain.policy.target_abs_prec + _padic_headroom(domain, q, h, n)
        cached = self._store.get(key)
        if cached is not None:
            cached_work, values = cached
            if len(values) > n and cached_work >= work:
                return values[: n + 1]
        values = _compute_numbers(domain, q, h, n, work)
        self._store[key] = (work, values)
        return list(values)

    def clear(self) -> None:
        self._store.clear()


_DEFAULT_CACHE = QBernoulliCache()


def _compute_numbers(domain: ValueDomain, q, h: int, n: int, work: int) -> list:
    if h == 0:
        classical = _classical_bernoulli_upto(n)
        if isinstance(domain, PadicDomain):
            dom = domain.with_target(work or domain.policy.target_abs_prec)
            return [dom.from_fraction(b) for b in classical]
        return [domain.from_fraction(b) for b in classical]
    if isinstance(domain, PadicDomain):
        q = Fraction(q)
        if q == 1:
            raise DomainValidationError("q = 1 requires h = 0")
        domain.validate_q(q)
        dom: ValueDomain = domain.with_target(work)
    else:
        if complex(q) == 1:
            raise DomainValidationError("q = 1 requires h = 0")
        dom = domain
    qv = dom.embed_q(q)
    qh = dom.embed_q(dom.q_power(q, h))
    qh_minus_1 = qh - dom.from_int(1)
    values = [h * dom.log(qv) / qh_minus_1]
    for m in range(1, n + 1):
        acc = values[0]
        for k in range(1, m):
            acc = acc + comb(m, k) * values[k]
        delta = dom.from_int(1) if m == 1 else None
        num = (delta - qh * acc) if delta is not None else -(qh * acc)
        values.append(num / qh_minus_1)
    return values


def q_bernoulli_number(n: int, q, h: int, domain: ValueDomain,
                       cache: QBernoulliCache | None = None):
    """B_n for deformation parameter q and weight h, in the given domain.

    p-adic results are truncated to the domain's target absolute precision
    so cached and fresh computations are bit-identical.
    """
    if n < 0:
        raise DomainValidationError("n must be >= 0")
    cache = cache or _DEFAULT_CACHE
    value = cache.numbers(domain, q, h, n)[n]
    if isinstance(domain, PadicDomain):
        return value.truncated(domain.policy.target_abs_prec)
    return value


def q_bernoulli_polynomial(n: int, q, h: int, x, domain: ValueDomain,
                           cache: QBernoulliCache | None = None):
    """B_n(x) = sum_k C(n,k) B_k x^(n-k)."""
    if n < 0:
        raise DomainValidationError("n must be >= 0")
    cache = cache or _DEFAULT_CACHE
    if isinstance(domain, PadicDomain):
        xv = x if isinstance(x, PadicNumber) else None
        x_val_drop = 0
        if xv is not None and not xv.is_zero and xv.valuation < 0:
            x_val_drop = -xv.valuation
        elif xv is None and Fraction(x) != 0:
            x_val_drop = max(0, -fraction_valuation(Fraction(x), domain.prime))
        dom = domain.with_target(domain.policy.target_abs_prec
                                 + (n + 1) * x_val_drop + _GUARD)
        if xv is None:
            xv = dom.from_fraction(Fraction(x))
        result = _poly_eval(n, q, h, xv, dom, cache)
        return result.truncated(domain.policy.target_abs_prec)
    return _poly_eval(n, q, h, complex(x) if not isinstance(x, complex) else x,
                      domain, cache)


def _poly_eval(n: int, q, h: int, xv, dom: ValueDomain, cache: QBernoulliCache):
    values = cache.numbers(dom, q, h, n)
    acc = values[n]
    xp = xv
    for k in range(n - 1, -1, -1):
        acc = acc + comb(n, k) * values[k] * xp
        xp = xp * xv
    return acc


def generalized_q_bernoulli(n: int, q, h: int, chi: DirichletCharacter, x,
                            domain: ValueDomain,
                            cache: QBernoulliCache | None = None):
    """Character-weighted polynomial via the distribution form

        f^(n-1) * sum_{i=0}^{f-1} chi(i) q^(hi) B_{n,q^f}((i+x)/f),

    with f the conductor of chi (the character is primitivized first)."""
    if n < 0:
        raise DomainValidationError("n must be >= 0")
    cache = cache or _DEFAULT_CACHE
    chi = chi.primitive()
    f = chi.modulus
    qf = domain.q_power(q, f)
    if isinstance(domain, PadicDomain):
        p = domain.prime
        vf = fraction_valuation(Fraction(f), p) if f % p == 0 else 0
        if isinstance(x, PadicNumber):
            xv0 = x
            drop = max(0, -x.valuation) if not x.is_zero else 0
        else:
            xv0 = None
            xq = Fraction(x)
            drop = max(0, -fraction_valuation(xq, p)) if xq != 0 else 0
        dom: ValueDomain = domain.with_target(
            domain.policy.target_abs_prec + (n + 1) * (vf + drop) + _GUARD)
        xv = dom.from_fraction(Fraction(x)) if xv0 is None else xv0
    else:
        dom = domain
        xv = complex(x) if not isinstance(x, complex) else x
    f_inv = dom.from_int(1) / dom.from_int(f)
    acc = None
    for i in range(f):
        c = dom.chi_value(chi, i)
        if _is_zero_value(c):
            continue
        weight = c * dom.embed_q(dom.q_power(q, h * i))
        y = (dom.from_int(i) + xv) * f_inv
        term = weight * _poly_eval(n, qf, h, y, dom, cache)
        acc = term if acc is None else acc + term
    if acc is None:
        acc = dom.from_int(0) if isinstance(dom, ComplexDomain) else \
            PadicNumber.zero(dom.prime)  # type: ignore[union-attr]
    scale = dom.from_int(f) ** (n - 1) if n >= 1 else f_inv
    result = acc * scale
    if isinstance(domain, PadicDomain):
        return result.truncated(domain.policy.target_abs_prec)
    return result


def _is_zero_value(v) -> bool:
    if isinstance(v, PadicNumber):
        return v.is_zero
    return v == 0


# -- generating-function oracle (archimedean) --------------------------------


def _series_mul(a: list, b: list, length: int) -> list:
    out = [0j] * length
    for i, ai in enumerate(a[:length]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: length - i]):
            out[i + j] += ai * bj
    return out


def _series_div(num: list, den: list, length: int) -> list:
    """Coefficients of num/den; den[0] must be invertible."""
    out = []
    for k in range(length):
        acc = num[k] if k < len(num) else 0j
        for j in range(k):
            acc -= out[j] * den[k - j]
        out.append(acc / den[0])
    return out


def _exp_coeffs(a: int, length: int) -> list[Fraction]:
    """Coefficients of e^(a t) as exact Fractions a^k / k!."""
    out = [Fraction(1)]
    for k in range(1, length):
        out.append(out[-1] * a / k)
    return out


def gf_coefficients(q: complex, h: int, chi: DirichletCharacter, x: complex,
                    n_max: int, t_terms: int | None = None) -> list[complex]:
    """B_{0..n_max}(x) attached to chi, read off the generating function by
    truncated power-series division (complex domain, |q| < 1)."""
    if abs(q) >= 1:
        raise DomainValidationError("gf_coefficients requires |q| < 1")
    length = t_terms if t_terms is not None else n_max + 8
    if length <= n_max:
        raise DomainValidationError("t-series truncation below requested order")
    chi = chi.primitive()
    f = chi.modulus
    import cmath

    lg = cmath.log(q)
    num = [0j] * length
    for i in range(f):
        c = chi.eval_complex(i)
        if c == 0:
            continue
        c *= q ** (h * i)
        e_i = _exp_coeffs(i, length)
        for k in range(length):
            if k >= 1:
                num[k] += c * float(e_i[k - 1])  # the t * e^{it} part
            num[k] += c * h * lg * float(e_i[k])
    # e^{xt} coefficients x^k/k!
    ext = [0j] * length
    ext[0] = 1 + 0j
    for k in range(1, length):
        ext[k] = ext[k - 1] * x / k
    num = _series_mul(num, ext, length)
    qhf = q ** (h * f)
    e_f = _exp_coeffs(f, length)
    den = [qhf * float(e_f[k]) for k in range(length)]
    den[0] -= 1
    if h == 0:
        # both numerator and denominator vanish at t = 0: normalize by t
        num = num[1:] + [0j]
        den = den[1:] + [0j]
        length -= 1
    coeffs = _series_div(num, den, length)
    fact = 1.0
    out = []
    for n_i in range(n_max + 1):
        if n_i:
            fact *= n_i
        out.append(coeffs[n_i] * fact)
    return out


def classical_generalized_bernoulli(n: int, chi: DirichletCharacter,
                                    domain: ValueDomain):
    """Classical character Bernoulli number B_{n,chi} from the generating
    function sum_{a=1..f} chi(a) t e^{at} / (e^{ft} - 1) by truncated series
    division (independent of the q-machinery; q -> 1, h -> 0 reference)."""
    chi = chi.primitive()
    f = chi.modulus
    length = n + 2
    if isinstance(domain, PadicDomain):
        p = domain.prime
        vf = fraction_valuation(Fraction(f), p) if f % p == 0 else 0
        dom: ValueDomain = domain.with_target(
            domain.policy.target_abs_prec + (n + 2) * vf + _GUARD)
    else:
        dom = domain
    num = [dom.from_int(0) for _ in range(length)]
    for a in range(1, f + 1):
        c = dom.chi_value(chi, a)
        if _is_zero_value(c):
            continue
        e_a = _exp_coeffs(a, length)
        for k in range(length):
            num[k] = num[k] + c * dom.from_fraction(e_a[k])
    den = [dom.from_fraction(Fraction(f) ** (k + 1) / _factorial(k + 1))
           for k in range(length)]
    coeffs = []
    for k in range(length):
        acc = num[k]
        for j in range(k):
            acc = acc - coeffs[j] * den[k - j]
        coeffs.append(acc / den[0])
    result = coeffs[n] * _factorial_int(n)
    if isinstance(domain, PadicDomain):
        return result.truncated(domain.policy.target_abs_prec)
    return result


@lru_cache(maxsize=None)
def _factorial(k: int) -> Fraction:
    return Fraction(_factorial_int(k))


@lru_cache(maxsize=None)
def _factorial_int(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# -- Volkenborn sums ---------------------------------------------------------


def volkenborn_moment(n: int, q, h: int, N: int, p: int | None = None,
                      policy: PrecisionPolicy | None = None) -> PadicNumber:
    """(1/p^N) sum_{x=0}^{p^N - 1} q^{hx} x^n, the N-th partial sum of the
    Volkenborn integral whose limit is B_n."""
    if isinstance(q, PadicNumber):
        p = q.prime
    if p is None:
        raise DomainValidationError("prime required")
    policy = policy or PrecisionPolicy()
    window = policy.target_abs_prec + N + _GUARD
    if isinstance(q, PadicNumber):
        qh = q**h
        if qh.is_zero or qh.valuation != 0:
            raise DomainValidationError("q^h must be a unit")
        window = min(window, qh.rel_prec)
        u = qh.unit_mod(window)
    else:
        qf = Fraction(q) ** h
        mod = p**window
        u = (qf.numerator % mod) * pow(qf.denominator % mod, -1, mod) % mod
    mod = p**window
    total = 0
    w = 1
    if N > 12:
        raise DomainValidationError("iteration budget exceeded (p^N too large)")
    for x_i in range(p**N):
        if n == 0:
            total = (total + w) % mod
        else:
            total = (total + w * pow(x_i, n, mod)) % mod
        w = (w * u) % mod
    return PadicNumber._from_scaled_int(total % mod, p, window, shift=0) / p**N


def volkenborn_shift_residual(n: int, q, h: int, N: int, p: int,
                              policy: PrecisionPolicy | None = None) -> PadicNumber:
    """Residual S_N(f(x+1)) - S_N(f) - f'(0) for f(x) = q^{hx} x^n at
    truncation level N; tends to zero p-adically as N grows."""
    policy = policy or PrecisionPolicy()
    window = policy.target_abs_prec + N + _GUARD
    qf = Fraction(q)
    mod = p**window
    u = (qf.numerator % mod) * pow(qf.denominator % mod, -1, mod) % mod
    u = pow(u, h, mod) if h >= 0 else pow(pow(u, -1, mod), -h, mod)
    s_shift = 0
    s_plain = 0
    w = 1
    for x_i in range(p**N):
        xs = pow(x_i + 1, n, mod) if n else 1
        xp = pow(x_i, n, mod) if n else 1
        s_shift = (s_shift + w * u % mod * xs) % mod
        s_plain = (s_plain + w * xp) % mod
        w = (w * u) % mod
    diff = PadicNumber._from_scaled_int((s_shift - s_plain) % mod, p, window) / p**N
    if n == 0:
        qv = PadicNumber.from_fraction(qf, p, policy.target_abs_prec + _GUARD)
        fprime0 = h * padic_log(qv)
    elif n == 1:
        fprime0 = PadicNumber.from_int(1, p, policy.target_abs_prec + _GUARD)
    else:
        fprime0 = PadicNumber.zero(p)
    return diff - fprime0
