"""Named verification suites.

Each suite exercises one of the package's headline identities over a fixed
parameter grid and returns a list of check rows

    {"identity", "params", "lhs", "rhs", "error_valuation_or_abs", "pass"}

with p-adic errors reported as the valuation lower bound of the difference
(bigger is better) and complex errors as absolute values (smaller is
better).  The CLI serves these as JSON; the acceptance tests assert on
them directly.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb, gcd, inf

from .archimedean import SeriesBudget, q_l_continuation, q_l_hurwitz
from .characters import (
    DirichletCharacter,
    character_from_table,
    quadratic_character,
    trivial_character,
)
from .domains import ComplexDomain, PadicDomain
from .errors import DomainValidationError
from .jets import SJet
from .padic import PadicNumber, PrecisionPolicy
from .padic_lfunction import (
    LpContext,
    derivative_closed_form,
    diamond_log_gamma,
    diamond_log_gamma_q,
    interpolation_rhs,
    l_derivative_at_zero,
    padic_l_value,
    residue_closed_form,
    residue_sum_form,
    volkenborn_log_gamma,
)
from .qbernoulli import (
    classical_generalized_bernoulli,
    generalized_q_bernoulli,
    gf_coefficients,
    q_bernoulli_number,
    volkenborn_moment,
)

_COMPLEX = ComplexDomain()


def _row(identity: str, params: dict, lhs, rhs, error, ok: bool) -> dict:
    return {
        "identity": identity,
        "params": params,
        "lhs": str(lhs),
        "rhs": str(rhs),
        "error_valuation_or_abs": error if error != inf else None,
        "pass": bool(ok),
    }


def _vdiff(a: PadicNumber, b: PadicNumber):
    v = (a - b).valuation_lower_bound()
    return None if v == inf else int(v)


def _conductor_set(fs=(1, 4, 5)) -> list[DirichletCharacter]:
    out = []
    for f in fs:
        if f == 1:
            out.append(trivial_character(1))
        elif f == 3:
            out.append(quadratic_character(3))
        else:
            out.append(quadratic_character(f))
    return out


def suite_volkenborn(prec: int = 30, **_) -> list[dict]:
    """Recursion values against Volkenborn partial sums: the p-adic distance
    shrinks at least like p^-(N-3)."""
    rows = []
    policy = PrecisionPolicy(target_abs_prec=prec)
    for p in (3, 5, 7):
        n_grid = (5, 6, 7) if p in (3, 5) else (3, 4, 5)
        q = Fraction(1 + p)
        dom = PadicDomain(p, policy)
        for h in (1, 2):
            for n in range(5):
                b = q_bernoulli_number(n, q, h, dom)
                for N in n_grid:
                    m = volkenborn_moment(n, q, h, N, p, policy)
                    v = (b - m).valuation_lower_bound()
                    rows.append(_row(
                        "volkenborn-partial-sum-converges-to-recursion",
                        {"p": p, "h": h, "n": n, "N": N},
                        b, m, int(v) if v != inf else None, v >= N - 3))
    return rows


def suite_distribution(prec: int = 30, n_max: int = 8, **_) -> list[dict]:
    """Both shapes of the distribution identity, in both value domains."""
    rows = []
    policy = PrecisionPolicy(target_abs_prec=prec)
    p = 5
    pdom = PadicDomain(p, policy)
    for chi in _conductor_set((1, 3, 4, 5)):
        f = chi.modulus
        # p-adic side: q = 1 + p
        q = Fraction(1 + p)
        for h in (1, 2):
            for n in range(n_max + 1):
                for x in (Fraction(1), Fraction(1, 2)):
                    direct = generalized_q_bernoulli(n, q, h, chi, x, pdom)
                    binom = None
                    for k in range(n + 1):
                        t = (comb(n, k)
                             * generalized_q_bernoulli(k, q, h, chi, 0, pdom)
                             * PadicNumber.from_fraction(x ** (n - k), p, prec))
                        binom = t if binom is None else binom + t
                    v = _vdiff(direct, binom)
                    rows.append(_row(
                        "distribution-vs-binomial-padic",
                        {"f": f, "h": h, "n": n, "x": str(x)},
                        direct, binom, v, v is None or v >= prec - 5))
        # complex side: distribution path against generating-function division
        for h in (0, 1, 2):
            for n in range(n_max + 1):
                for x in (0.25, 1.0):
                    a = generalized_q_bernoulli(n, 0.5, h, chi, x, _COMPLEX)
                    b = gf_coefficients(0.5, h, chi, x, n, n + 12)[n]
                    err = abs(a - b)
                    scale = max(1.0, abs(a))
                    rows.append(_row(
                        "distribution-vs-generating-function-complex",
                        {"f": f, "h": h, "n": n, "x": x},
                        a, b, err, err < 1e-9 * scale))
    return rows


def suite_complex_interpolation(**_) -> list[dict]:
    """Continuation values at s = 1-k against -B_k(x)/k."""
    rows = []
    for chi in _conductor_set((1, 4, 5)):
        for q in (0.3, 0.5):
            for h in (0, 1, 2):
                for x in (0.25, 1.0):
                    for k in range(1, 6):
                        got = q_l_continuation(1 - k, x, chi, q, h)
                        want = -generalized_q_bernoulli(k, q, h, chi, x, _COMPLEX) / k
                        err = abs(got - want)
                        rows.append(_row(
                            "negative-integer-values-match-q-bernoulli",
                            {"f": chi.modulus, "q": q, "h": h, "x": x, "k": k},
                            got, want, err, err < 1e-8))
    return rows


def suite_continuation_overlap(**_) -> list[dict]:
    """Continuation equals the direct series where both converge."""
    rows = []
    budget = SeriesBudget(tail_tol=1e-10)
    for chi in _conductor_set((1, 4, 5)):
        for q in (0.3, 0.5):
            for h in (0, 1, 2):
                for x in (0.25, 1.0):
                    for s in (2.5, 3.0, 4.0):
                        a = q_l_continuation(s, x, chi, q, h, budget=budget)
                        b = q_l_hurwitz(s, x, chi, q, h, budget=budget)
                        err = abs(a - b)
                        rows.append(_row(
                            "continuation-matches-direct-series",
                            {"f": chi.modulus, "q": q, "h": h, "x": x, "s": s},
                            a, b, err, err < 1e-6))
    return rows


def _interp_grid(p: int) -> list[DirichletCharacter]:
    return [trivial_character(1), quadratic_character(p)]


def suite_padic_interpolation(prec: int = 40, n_max: int = 5, **_) -> list[dict]:
    """The central identity: L(1-n, t) equals the twisted-Bernoulli side."""
    rows = []
    slack = 8
    for p in (3, 5, 7):
        q = Fraction(1 + p)
        for chi in _interp_grid(p):
            for h in (1, 2):
                ctx = LpContext(p, q, h, chi,
                                policy=PrecisionPolicy(target_abs_prec=prec))
                for n in range(1, n_max + 1):
                    for t in (0, 1):
                        lhs = padic_l_value(1 - n, t, ctx)
                        rhs = interpolation_rhs(n, t, ctx)
                        v = _vdiff(lhs, rhs)
                        rows.append(_row(
                            "interpolation-at-negative-integers",
                            {"p": p, "f": chi.modulus, "h": h, "n": n, "t": t},
                            lhs, rhs, v, v is None or v >= prec - slack))
    return rows


def suite_residue(prec: int = 40, **_) -> list[dict]:
    """Pole behavior at s = 1 for the trivial character: the limit sum, the
    closed form, and the extrapolated (s-1) L(1 + p^k)."""
    rows = []
    c_allow = 2
    for p in (3, 5, 7):
        ctx = LpContext(p, Fraction(1 + p), 1, trivial_character(1),
                        policy=PrecisionPolicy(target_abs_prec=prec))
        r_sum = residue_sum_form(ctx)
        r_cf = residue_closed_form(ctx)
        v = _vdiff(r_sum, r_cf)
        rows.append(_row("residue-limit-sum-equals-closed-form", {"p": p},
                         r_sum, r_cf, v, v is None or v >= prec - 4))
        for k in range(3, 7):
            s = 1 + Fraction(p) ** k
            scaled = padic_l_value(s, 0, ctx) * PadicNumber.from_fraction(
                Fraction(p) ** k, p, prec + k)
            v = _vdiff(scaled, r_cf)
            rows.append(_row(
                "residue-extrapolation-valuation-grows",
                {"p": p, "k": k}, scaled, r_cf, v, v is None or v >= k - c_allow))
    return rows


def suite_derivative(prec: int = 40, **_) -> list[dict]:
    """d/ds at 0 by jets against the log-gamma closed form and against a
    p-adic difference quotient at eps = p^6."""
    rows = []
    slack = 8
    for p in (3, 5, 7):
        q = Fraction(1 + p)
        for chi in _interp_grid(p):
            for h in (1, 2):
                ctx = LpContext(p, q, h, chi,
                                policy=PrecisionPolicy(target_abs_prec=prec))
                for t in (0, 1):
                    d_jet = l_derivative_at_zero(t, ctx)
                    d_cf = derivative_closed_form(t, ctx)
                    v = _vdiff(d_jet, d_cf)
                    rows.append(_row(
                        "derivative-jets-match-log-gamma-form",
                        {"p": p, "f": chi.modulus, "h": h, "t": t},
                        d_jet, d_cf, v, v is None or v >= prec - slack))
                eps = Fraction(p) ** 6
                quot = ((padic_l_value(eps, 0, ctx) - padic_l_value(0, 0, ctx))
                        / PadicNumber.from_fraction(eps, p, prec + 6))
                d_jet = l_derivative_at_zero(0, ctx)
                v = _vdiff(d_jet, quot)
                rows.append(_row(
                    "derivative-matches-difference-quotient",
                    {"p": p, "f": chi.modulus, "h": h, "eps": f"{p}^6"},
                    d_jet, quot, v, v is None or v >= 6 - 2))
    return rows


def suite_kubota_leopoldt(prec: int = 30, **_) -> list[dict]:
    """h = 0, q = 1 degeneration: classical interpolation values against
    classical character Bernoulli numbers from the generating function."""
    rows = []
    p = 5
    policy = PrecisionPolicy(target_abs_prec=prec)
    ref_policy = PrecisionPolicy(target_abs_prec=prec + 4)
    dom = PadicDomain(p, ref_policy)
    for chi in _conductor_set((1, 4, 5)):
        ctx = LpContext(p, 1, 0, chi, policy=policy)
        for n in range(1, 5):
            lhs = padic_l_value(1 - n, 0, ctx)
            tw = ctx.twisted(n)
            b_n = classical_generalized_bernoulli(n, tw.primitive, dom)
            chi_n_p = tw.value_at_p(ref_policy)
            rhs = (-((1 - chi_n_p * p ** (n - 1)) * b_n) / n).truncated(prec)
            v = _vdiff(lhs, rhs)
            rows.append(_row(
                "classical-interpolation-degeneration",
                {"p": p, "f": chi.modulus, "n": n},
                lhs, rhs, v, v is None or v >= prec - 2))
    return rows


def suite_log_gamma(prec: int = 25, **_) -> list[dict]:
    """q-Diamond log-gamma: collapse to the classical function as q -> 1,
    and agreement with its Volkenborn integral representation."""
    rows = []
    p = 5
    policy = PrecisionPolicy(target_abs_prec=prec)
    x = PadicNumber.from_fraction(Fraction(1, p), p, prec + 12)
    g_classical = diamond_log_gamma(x, p, policy)
    prev = None
    for k in (2, 3, 4):
        gq = diamond_log_gamma_q(x, Fraction(1 + p**k), 1, p, policy)
        v = (gq - g_classical).valuation_lower_bound()
        ok = v != inf and (prev is None or v > prev)
        rows.append(_row("q-log-gamma-tends-to-classical",
                         {"p": p, "q": f"1+{p}^{k}", "x": f"1/{p}"},
                         gq, g_classical, int(v) if v != inf else None, ok))
        prev = v
    series = diamond_log_gamma_q(x, Fraction(1 + p), 1, p, policy)
    prev = None
    for N in (3, 5):
        oracle = volkenborn_log_gamma(Fraction(1, p), Fraction(1 + p), 1, N, p, policy)
        v = (oracle - series).valuation_lower_bound()
        ok = v >= N - 1 and (prev is None or v > prev)
        rows.append(_row("q-log-gamma-matches-volkenborn-sum",
                         {"p": p, "N": N, "x": f"1/{p}"},
                         oracle, series, int(v) if v != inf else None, ok))
        prev = v
    return rows


def suite_jets(count: int = 1000, seed: int = 20240913, **_) -> list[dict]:
    """Randomized first-order jet ring laws: Leibniz product rule, quotient
    rule, and the chain rule through integer powers, all exact."""
    rng = random.Random(seed)
    p = 5
    rel = 12
    failures = 0
    checked = 0
    for _i in range(count):
        def rand_jet():
            v = PadicNumber.from_int(rng.randrange(1, p**6), p, rel)
            d = PadicNumber.from_int(rng.randrange(1, p**6), p, rel)
            return SJet(v, d)

        a, b = rand_jet(), rand_jet()
        prod = a * b
        lhs = prod.der
        rhs = a.der * b.val + a.val * b.der
        ok1 = (lhs - rhs).is_zero or (lhs - rhs).valuation_lower_bound() >= rel
        s = a + b
        ok2 = ((s.der - (a.der + b.der)).valuation_lower_bound() >= rel)
        quot = a / b
        back = quot * b
        ok3 = ((back.der - a.der).valuation_lower_bound() >= rel - 6
               and (back.val - a.val).valuation_lower_bound() >= rel - 6)
        k = rng.randrange(2, 5)
        pw = a
        for _ in range(k - 1):
            pw = pw * a
        expect = k * (a.val ** (k - 1)) * a.der
        ok4 = (pw.der - expect).valuation_lower_bound() >= rel - 6
        checked += 1
        if not (ok1 and ok2 and ok3 and ok4):
            failures += 1
    return [_row("jet-ring-and-chain-rules",
                 {"count": checked, "seed": seed, "p": p},
                 f"{checked - failures} ok", f"{checked} total",
                 failures, failures == 0)]


SUITES = {
    "volkenborn": (suite_volkenborn,
                   "recursion vs Volkenborn partial sums"),
    "distribution": (suite_distribution,
                     "distribution identity, both domains"),
    "complex-interpolation": (suite_complex_interpolation,
                              "continuation values at nonpositive integers"),
    "continuation-overlap": (suite_continuation_overlap,
                             "continuation vs direct series"),
    "padic-interpolation": (suite_padic_interpolation,
                            "p-adic interpolation at negative integers"),
    "residue": (suite_residue, "pole residue at s = 1"),
    "derivative": (suite_derivative, "d/ds at 0: jets, closed form, quotient"),
    "kubota-leopoldt": (suite_kubota_leopoldt,
                        "h = 0, q = 1 classical degeneration"),
    "log-gamma": (suite_log_gamma, "q-Diamond log-gamma limits and oracle"),
    "jets": (suite_jets, "randomized jet algebra laws"),
}


def run_suite(name: str, **params) -> list[dict]:
    if name == "all":
        rows = []
        for key in SUITES:
            rows.extend(run_suite(key, **params))
        return rows
    if name not in SUITES:
        raise DomainValidationError(
            f"unknown suite {name!r}; choose from {', '.join(SUITES)} or 'all'")
    fn, _ = SUITES[name]
    clean = {k: v for k, v in params.items() if v is not None}
    return fn(**clean)
