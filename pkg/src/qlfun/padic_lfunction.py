"""The p-adic interpolation function for character q-Bernoulli polynomials,
its partial-zeta building blocks, residues, the q-deformed Diamond
log-gamma, and the s-derivative at 0.

For a period F divisible by p and by the conductor of chi, the function is

    L(s, t) = 1/((s-1) F) * sum_{a=1..F, (a,p)=1} chi(a) q^{ha}
              <a + p t>^{1-s} sum_m C(1-s, m) (F/(a+pt))^m B_{m, q^F}

with <z> = z / teichmuller(a).  At s = 1-n it produces the twisted
character Bernoulli polynomial combination with the p-Euler factor
removed; the derivative at s = 0 is evaluated by running the same sum
over first-order jets in s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, inf, lcm

from .characters import DirichletCharacter, TwistedCharacter
from .domains import PadicDomain
from .errors import DomainValidationError
from .jets import SJet
from .padic import (
    PadicNumber,
    PrecisionPolicy,
    fraction_valuation,
    int_valuation,
    is_odd_prime,
    padic_log,
    padic_log_extended,
    padic_pow_s,
    teichmuller,
)
from .qbernoulli import (
    QBernoulliCache,
    _DEFAULT_CACHE,
    _classical_bernoulli_upto,
    generalized_q_bernoulli,
    q_bernoulli_number,
)

_GUARD = 4


class LpContext:
    """Validated evaluation context: odd prime p, deformation q inside the
    convergence disk (kept exact as a Fraction when possible), weight h,
    character chi with order dividing p-1, and period F divisible by both
    p and the conductor of chi."""

    def __init__(self, p: int, q, h: int, chi: DirichletCharacter,
                 F: int | None = None, policy: PrecisionPolicy | None = None,
                 cache: QBernoulliCache | None = None):
        if not is_odd_prime(p):
            raise DomainValidationError(f"{p} is not an odd prime")
        self.p = p
        self.h = h
        self.policy = policy or PrecisionPolicy()
        self.chi = chi.primitive()
        if (p - 1) % self.chi.order:
            raise DomainValidationError(
                "character order must divide p-1 for p-adic evaluation")
        self.q_exact = _exact_q(q, p)
        PadicDomain(p, self.policy).validate_q(self.q_exact)
        f = self.chi.modulus
        self.F = F if F is not None else lcm(p, f)
        if self.F % p or self.F % f or self.F <= 0:
            raise DomainValidationError(
                f"F = {self.F} must be a positive multiple of p = {p} "
                f"and the conductor {f}")
        self.cache = cache or _DEFAULT_CACHE
        self._twists: dict[int, TwistedCharacter] = {}

    def twisted(self, n: int) -> TwistedCharacter:
        key = n % (self.p - 1)
        if key not in self._twists:
            self._twists[key] = TwistedCharacter(self.chi, key, self.p)
        return self._twists[key]

    def q_power_exact(self, k: int) -> Fraction:
        return self.q_exact**k

    def q_at(self, rel_prec: int) -> PadicNumber:
        return PadicNumber.from_fraction(self.q_exact, self.p, rel_prec)

    def lift_t(self, t, rel_prec: int) -> PadicNumber:
        if isinstance(t, PadicNumber):
            if t.valuation_lower_bound() < 0:
                raise DomainValidationError("|t|_p <= 1 required")
            return t
        t = Fraction(t)
        if t != 0 and fraction_valuation(t, self.p) < 0:
            raise DomainValidationError("|t|_p <= 1 required")
        return PadicNumber.from_fraction(t, self.p, rel_prec)


def _exact_q(q, p: int) -> Fraction:
    """Exact rational form of a deformation parameter.  A finite-precision
    p-adic q is replaced by its canonical rational representative
    p^v * unit, which agrees with it to the retained precision."""
    if isinstance(q, PadicNumber):
        if q.prime != p:
            raise DomainValidationError("q lives at a different prime")
        if q.is_zero:
            raise DomainValidationError("q must be nonzero")
        return Fraction(q.unit) * Fraction(p) ** q.valuation
    return Fraction(q)


def _one_minus(s):
    if isinstance(s, SJet):
        return SJet(1 - s.val, -s.der)
    return 1 - s


def _shift_minus_one(s):
    if isinstance(s, SJet):
        return SJet(s.val - 1, s.der)
    return s - 1


def _vlb(x) -> int | float:
    if isinstance(x, SJet):
        return min(x.val.valuation_lower_bound(), x.der.valuation_lower_bound())
    return x.valuation_lower_bound()


def _is_pole(s, p: int) -> bool:
    val = s.val if isinstance(s, SJet) else s
    if isinstance(val, PadicNumber):
        return (val - 1).is_zero and (val - 1).abs_prec == inf
    return val == 1


def _normalize_s(s, p: int, rel: int):
    """Exact integers/Fractions become full-precision elements; jets and
    p-adic values are used as given after a disk check (v_p(s) >= 0)."""
    if isinstance(s, SJet):
        return s
    if isinstance(s, PadicNumber):
        sv = s
    else:
        sv = PadicNumber.from_fraction(Fraction(s), p, rel)
    if not sv.is_zero and sv.valuation < 0:
        raise DomainValidationError("s outside the analyticity disk (v_p(s) < 0)")
    return sv


def _binomial_series(s, z: PadicNumber, F: int, b_values: list[PadicNumber],
                     target: int, p: int):
    """sum_m C(1-s, m) (F/z)^m B_m, truncated by the certified valuation
    floor m*v_p(F) - v_p(m!) + min v_p(B)."""
    v_f = int_valuation(F, p) - (z.valuation or 0)
    if v_f < 1:
        raise DomainValidationError("need p | F for the series to converge")
    ratio = F / z
    vmin_b = min((b.valuation_lower_bound() for b in b_values), default=0)
    acc = None
    coeff = None  # C(1-s, m), built incrementally
    power = None
    m = 0
    while True:
        if m == 0:
            term = b_values[0]
            coeff = _one_minus(s) / 1  # C(1-s,1) prepared below
            power = ratio
        else:
            if m >= len(b_values):
                raise DomainValidationError(
                    "q-Bernoulli table shorter than the certified series length")
            term = coeff * power * b_values[m]
            coeff = coeff * (_one_minus(s) - m) / (m + 1)
            power = power * ratio
        acc = term if acc is None else acc + term
        m += 1
        floor = m * v_f - (m - 1 + p - 2) // (p - 1) + min(vmin_b, 0)
        if floor >= target:
            break
    return acc


def _series_length(p: int, v_f: int, target: int) -> int:
    m = 1
    while m * v_f - (m - 1 + p - 2) // (p - 1) - 6 < target:
        m += 1
    return m + 2


def padic_partial_zeta(s, a: int, ctx: LpContext, t=0):
    """Residue-class interpolation kernel
    H(s, a + p t) = <a + p t>^{1-s}/((s-1) F) * sum_m C(1-s,m) (F/z)^m B_{m,q^F}."""
    p = ctx.p
    if gcd(a, p) != 1:
        raise DomainValidationError("need gcd(a, p) = 1")
    if _is_pole(s, p):
        raise DomainValidationError("pole at s = 1")
    target = ctx.policy.target_abs_prec
    v_f = int_valuation(ctx.F, p)
    work = target + v_f + _GUARD
    s = _normalize_s(s, p, work + _GUARD)
    work_policy = PrecisionPolicy(work, ctx.policy.max_terms, ctx.policy.min_abs_prec)
    tv = ctx.lift_t(t, work)
    z = PadicNumber.from_int(a, p, work) + p * tv
    ang = z / teichmuller(a, p, work_policy)
    pw = padic_pow_s(ang, _one_minus(s))
    dom = PadicDomain(p, work_policy)
    qF = ctx.q_power_exact(ctx.F)
    b_values = ctx.cache.numbers(dom, qF, ctx.h, _series_length(p, v_f, work))
    series = _binomial_series(s, z, ctx.F, b_values, work, p)
    result = pw * series / (_shift_minus_one(s) * ctx.F)
    return _truncate_any(result, target)


def _truncate_any(x, target: int):
    if isinstance(x, SJet):
        return SJet(x.val.truncated(target), x.der.truncated(target))
    return x.truncated(target)


def padic_l_value(s, t, ctx: LpContext):
    """L(s, t) as the character-weighted sum of partial zetas over the
    residue classes prime to p."""
    p = ctx.p
    if _is_pole(s, p):
        raise DomainValidationError("pole at s = 1")
    target = ctx.policy.target_abs_prec
    v_f = int_valuation(ctx.F, p)
    work = target + v_f + _GUARD
    work_policy = PrecisionPolicy(work, ctx.policy.max_terms, ctx.policy.min_abs_prec)
    inner_policy = PrecisionPolicy(work + _GUARD, ctx.policy.max_terms,
                                   ctx.policy.min_abs_prec)
    inner_ctx = LpContext(p, ctx.q_exact, ctx.h, ctx.chi, ctx.F,
                          inner_policy, ctx.cache)
    acc = None
    for a in range(1, ctx.F + 1):
        if gcd(a, p) != 1:
            continue
        c = ctx.chi.eval_padic(a, p, work_policy)
        if c.is_zero:
            continue
        qha = PadicNumber.from_fraction(ctx.q_power_exact(ctx.h * a), p, work)
        term = c * qha * padic_partial_zeta(s, a, inner_ctx, t)
        acc = term if acc is None else acc + term
    if acc is None:
        return PadicNumber.zero(p, target)
    return _truncate_any(acc, target)


def interpolation_rhs(n: int, t, ctx: LpContext) -> PadicNumber:
    """The twisted-Bernoulli side the function interpolates at s = 1-n:

        -(1/n) (B_{n, q, chi_n}(p t) - chi_n(p) p^{n-1} B_{n, q^p, chi_n}(t)),

    computed entirely through the distribution path of the q-Bernoulli
    module with the primitive twisted character chi_n."""
    if n < 1:
        raise DomainValidationError("n must be >= 1")
    p = ctx.p
    target = ctx.policy.target_abs_prec
    bump = int_valuation(n, p) if n % p == 0 else 0
    dom = PadicDomain(p, PrecisionPolicy(target + bump + _GUARD,
                                         ctx.policy.max_terms,
                                         ctx.policy.min_abs_prec))
    tw = ctx.twisted(n)
    chi_n = tw.primitive
    if not isinstance(t, PadicNumber):
        x1: object = Fraction(p) * Fraction(t)
        x2: object = Fraction(t)
    else:
        tv = ctx.lift_t(t, dom.policy.target_abs_prec)
        x1, x2 = p * tv, tv
    q1, q2 = ctx.q_exact, ctx.q_power_exact(p)
    b_main = generalized_q_bernoulli(n, q1, ctx.h, chi_n, x1, dom, ctx.cache)
    chi_n_p = tw.value_at_p(dom.policy)
    if chi_n_p.is_zero:
        combined = b_main
    else:
        b_euler = generalized_q_bernoulli(n, q2, ctx.h, chi_n, x2, dom, ctx.cache)
        combined = b_main - chi_n_p * p ** (n - 1) * b_euler
    return (-(combined) / n).truncated(target)


# -- residue at s = 1 --------------------------------------------------------


def residue_sum_form(ctx: LpContext) -> PadicNumber:
    """lim (s-1) L(s, t) as the direct sum (1/F) sum' chi(a) q^{ha} B_{0,q^F}."""
    p = ctx.p
    target = ctx.policy.target_abs_prec
    work = target + int_valuation(ctx.F, p) + 2 * _GUARD
    work_policy = PrecisionPolicy(work, ctx.policy.max_terms, ctx.policy.min_abs_prec)
    dom = PadicDomain(p, work_policy)
    qF = ctx.q_power_exact(ctx.F)
    b0 = ctx.cache.numbers(dom, qF, ctx.h, 0)[0]
    acc = None
    for a in range(1, ctx.F + 1):
        if gcd(a, p) != 1:
            continue
        c = ctx.chi.eval_padic(a, p, work_policy)
        if c.is_zero:
            continue
        term = c * PadicNumber.from_fraction(ctx.q_power_exact(ctx.h * a), p, work)
        acc = term if acc is None else acc + term
    result = (acc * b0) / ctx.F
    return result.truncated(target)


def residue_closed_form(ctx: LpContext) -> PadicNumber:
    """The closed-form residue for the trivial character,

        (h log q/(q^{hF}-1)) ((1-q^{hF})/(1-q^h) - (1-q^{hF})/(1-q^{hp}))."""
    if not ctx.chi.is_trivial:
        raise DomainValidationError("closed form stated for the trivial character")
    if ctx.h == 0:
        return PadicNumber.zero(ctx.p)
    p = ctx.p
    target = ctx.policy.target_abs_prec
    qhF = ctx.q_power_exact(ctx.h * ctx.F)
    qh = ctx.q_power_exact(ctx.h)
    qhp = ctx.q_power_exact(ctx.h * p)
    work = (target + fraction_valuation(qh - 1, p)
            + fraction_valuation(qhp - 1, p) + 2 * _GUARD)
    lg = padic_log(ctx.q_at(work))

    def emb(fr: Fraction) -> PadicNumber:
        return PadicNumber.from_fraction(fr, p, work)

    lead = ctx.h * lg / emb(qhF - 1)
    bracket = emb(1 - qhF) / emb(1 - qh) - emb(1 - qhF) / emb(1 - qhp)
    return (lead * bracket).truncated(target)


# -- Diamond log-gamma -------------------------------------------------------


def diamond_log_gamma(x: PadicNumber, p: int | None = None,
                      policy: PrecisionPolicy | None = None) -> PadicNumber:
    """(x - 1/2) log x - x + sum_{j>=2} B_j/(j(j-1)) x^{1-j} for |x|_p > 1,
    with the Iwasawa log (log p = 0, Teichmuller part killed)."""
    if not isinstance(x, PadicNumber):
        raise DomainValidationError("x must be a p-adic value")
    p = x.prime
    policy = policy or PrecisionPolicy()
    if x.is_zero or x.valuation >= 0:
        raise DomainValidationError("|x|_p > 1 required")
    target = policy.target_abs_prec
    depth = -x.valuation
    lg = padic_log_extended(x)
    acc = (x - Fraction(1, 2)) * lg - x
    classical = _classical_bernoulli_upto(_gamma_series_length(depth, target, p))
    inv_x = 1 / x
    power = inv_x
    j = 2
    while (j - 1) * depth - 1 - 2 * _log_ceiling(j, p) < target:
        b = classical[j]
        if b:
            acc = acc + PadicNumber.from_fraction(
                b / (j * (j - 1)), p, target + _GUARD) * power
        power = power * inv_x
        j += 1
    return acc.truncated(target)


def _log_ceiling(j: int, p: int) -> int:
    out = 0
    while p**out <= j:
        out += 1
    return out


def _gamma_series_length(depth: int, target: int, p: int) -> int:
    j = 2
    while (j - 1) * depth - 1 - 2 * _log_ceiling(j, p) < target:
        j += 1
    return j + 1


def diamond_log_gamma_q(x: PadicNumber, q, h: int, p: int | None = None,
                        policy: PrecisionPolicy | None = None,
                        cache: QBernoulliCache | None = None) -> PadicNumber:
    """q-deformation of the Diamond log-gamma:

    (x B_0 + B_1) log x - x B_0 + sum_{n>=1} (-1)^(n+1)/(n(n+1)) B_{n+1} x^{-n}
    with B_m the weight-h q-Bernoulli numbers, |x|_p > 1."""
    if not isinstance(x, PadicNumber):
        raise DomainValidationError("x must be a p-adic value")
    p = x.prime
    policy = policy or PrecisionPolicy()
    cache = cache or _DEFAULT_CACHE
    if x.is_zero or x.valuation >= 0:
        raise DomainValidationError("|x|_p > 1 required")
    target = policy.target_abs_prec
    depth = -x.valuation
    length = _gamma_series_length(depth, target + _GUARD, p) + 2
    dom = PadicDomain(p, PrecisionPolicy(target + depth + 2 * _GUARD,
                                         policy.max_terms, policy.min_abs_prec))
    q_fr = _exact_q(q, p)
    b = cache.numbers(dom, q_fr, h, length)
    lg = padic_log_extended(x)
    acc = (x * b[0] + b[1]) * lg - x * b[0]
    inv_x = 1 / x
    power = inv_x
    n = 1
    vmin_b = min(0, min(bb.valuation_lower_bound() for bb in b))
    while n * depth + vmin_b - 2 * _log_ceiling(n + 1, p) < target:
        sign = 1 if n % 2 else -1
        term = b[n + 1] * power / (n * (n + 1))
        acc = acc + (term if sign > 0 else -term)
        power = power * inv_x
        n += 1
        if n + 1 >= len(b):
            b = cache.numbers(dom, q_fr, h, len(b) + 8)
    return acc.truncated(target)


def volkenborn_log_gamma(x, q, h: int, N: int, p: int | None = None,
                         policy: PrecisionPolicy | None = None) -> PadicNumber:
    """Volkenborn partial sum (1/p^N) sum_{z<p^N} q^{hz} ((x+z) log(x+z) - (x+z)):
    the integral representation the series form is derived from."""
    policy = policy or PrecisionPolicy()
    target = policy.target_abs_prec
    work = target + N + _GUARD
    if isinstance(x, PadicNumber):
        p = x.prime
    else:
        if p is None:
            raise DomainValidationError("prime required for exact x")
        x = PadicNumber.from_fraction(Fraction(x), p, work + _GUARD)
    qh_unit = PadicNumber.from_fraction(_exact_q(q, p) ** h, p, work)
    acc = None
    w = PadicNumber.from_int(1, p, work)
    for z in range(p**N):
        xz = x + z
        term = w * (xz * padic_log_extended(xz) - xz)
        acc = term if acc is None else acc + term
        w = w * qh_unit
    return (acc / p**N).truncated(target)


# -- derivative at s = 0 ------------------------------------------------------


def l_derivative_at_zero(t, ctx: LpContext) -> PadicNumber:
    """d/ds L(s, t) at s = 0, via first-order jets through the whole sum."""
    p = ctx.p
    work = ctx.policy.target_abs_prec + int_valuation(ctx.F, p) + 2 * _GUARD
    s = SJet(PadicNumber.zero(p), PadicNumber.from_int(1, p, work))
    out = padic_l_value(s, t, ctx)
    return out.der


def derivative_closed_form(t, ctx: LpContext) -> PadicNumber:
    """Closed form of the same derivative:

        sum'_a chi_1(a) q^{ha} G_{p,q^F}((a + p t)/F)  -  L(0, t) log_p F,

    where G is the weight-h q-Diamond log-gamma at base q^F and the sum
    runs over 1 <= a <= F with (a, p) = 1."""
    p = ctx.p
    target = ctx.policy.target_abs_prec
    v_f = int_valuation(ctx.F, p)
    work = target + v_f + 2 * _GUARD
    work_policy = PrecisionPolicy(work, ctx.policy.max_terms, ctx.policy.min_abs_prec)
    tw = ctx.twisted(1)
    qF = ctx.q_power_exact(ctx.F)
    tv = ctx.lift_t(t, work + v_f)
    acc = None
    for a in range(1, ctx.F + 1):
        if gcd(a, p) != 1:
            continue
        c = tw.eval_padic(a, work_policy)
        if c.is_zero:
            continue
        qha = PadicNumber.from_fraction(ctx.q_power_exact(ctx.h * a), p, work)
        xa = (PadicNumber.from_int(a, p, work + v_f) + p * tv) / ctx.F
        g = diamond_log_gamma_q(xa, qF, ctx.h, p, work_policy, ctx.cache)
        term = c * qha * g
        acc = term if acc is None else acc + term
    l0 = padic_l_value(0, t, LpContext(p, ctx.q_exact, ctx.h, ctx.chi,
                                        ctx.F, work_policy, ctx.cache))
    log_f = padic_log_extended(ctx.F, p, work_policy)
    return (acc - l0 * log_f).truncated(target)
