"""Identity-verification suites with machine-readable reports.

Each suite evaluates a family of identities twice -- once through the
closed-form route and once through an independent route (series evaluation,
quadrature, recursion, truncated operators) -- and records the residual of
every check together with its tolerance.  Failures are recorded, never
thrown, so a report always covers the full suite.

Reports serialize to JSON as::

    {"suite": ..., "env": {"q", "precision_bits", "truncation", "seed"},
     "checks": [{"id", "params", "residual", "tol", "pass", "ms"}, ...]}

with checks sorted by id and residuals stored as decimal strings.  Given a
seed, the sequence of parameter draws is deterministic.
"""

from __future__ import annotations

import csv as _csv
import json as _json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import DEFAULT_PRECISION_BITS, ExactScalar, NumScalar
from .qseries import (
    phis,
    qbinomial,
    qintegral,
    qpochhammer,
    w8_7,
)
from .orthopoly import (
    FamilyParams,
    aw_jacobi_params,
    aw_laguerre_params,
    aw_measure,
    eval_poly,
    hahn_exton_bessel,
    integrate,
)
from . import qalgebra
from .qalgebra import (
    ALGEBRAS,
    antipode,
    comultiply,
    counit,
    generator,
    haar,
    monomial,
    pairing,
    pairing_recursive,
    spherical_rho,
    star,
    unit,
)
from . import reps
from .reps import haar_trace, schur_check, t_R

__all__ = [
    "CheckRecord",
    "SuiteReport",
    "SUITE_NAMES",
    "run_suite",
    "suite_hopf_axioms",
    "suite_duality",
    "suite_schur",
    "suite_haar_aw",
    "suite_addition_formula",
    "suite_convolution_asc",
    "suite_qbessel",
    "suite_qseries_identities",
]

INF = math.inf


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

@dataclass
class CheckRecord:
    """Outcome of a single identity check."""

    id: str
    params: dict
    residual: float
    tol: float
    ok: bool
    ms: float


@dataclass
class SuiteReport:
    """All checks of one suite plus the environment they ran in."""

    suite: str
    env: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def to_dict(self):
        return {
            "suite": self.suite,
            "env": dict(self.env),
            "checks": [
                {
                    "id": c.id,
                    "params": c.params,
                    "residual": repr(float(c.residual)),
                    "tol": repr(float(c.tol)),
                    "pass": bool(c.ok),
                    "ms": round(float(c.ms), 3),
                }
                for c in sorted(self.checks, key=lambda c: c.id)
            ],
        }

    def to_json(self):
        return _json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write_csv(self, fh):
        w = _csv.writer(fh)
        w.writerow(["id", "params", "residual", "tol", "pass", "ms"])
        for c in sorted(self.checks, key=lambda c: c.id):
            w.writerow([c.id, _json.dumps(c.params, sort_keys=True),
                        repr(float(c.residual)), repr(float(c.tol)),
                        int(c.ok), round(float(c.ms), 3)])


class _Recorder:
    """Collects checks, timing each one and never letting errors escape."""

    def __init__(self, default_tol):
        self.checks = []
        self.default_tol = default_tol

    def add(self, cid, params, residual, tol=None, started=None):
        tol = self.default_tol if tol is None else tol
        ms = 0.0 if started is None else (time.perf_counter() - started) * 1e3
        residual = float(residual)
        self.checks.append(CheckRecord(cid, params, residual, float(tol),
                                       residual <= float(tol), ms))

    def run(self, cid, params, fn, tol=None):
        started = time.perf_counter()
        try:
            residual = fn()
        except Exception as exc:  # record, never raise
            params = dict(params)
            params["error"] = f"{type(exc).__name__}: {exc}"
            residual = INF
        self.add(cid, params, residual, tol, started)


def _env(q, prec, truncation, seed):
    qrepr = "exact" if q in (None, "exact") else repr(float(q))
    return {"q": qrepr, "precision_bits": prec,
            "truncation": truncation, "seed": seed}


def _num(x, prec):
    return NumScalar(x, prec) if not isinstance(x, NumScalar) else x


def _absval(x):
    if isinstance(x, ExactScalar):
        # exact scalars either vanish identically or fail outright
        return 0.0 if x.is_zero() else INF
    return float(abs(x))


def _rel(a, b):
    return _absval(a - b) / max(1.0, _absval(b))


def _rand_frac(rng, lo, hi, den=512):
    lo_n, hi_n = int(lo * den), int(hi * den)
    return Fraction(rng.randint(lo_n, hi_n), den)


# ---------------------------------------------------------------------------
# hopf-axioms
# ---------------------------------------------------------------------------

def _rand_key(rng, alg, max_degree):
    while True:
        l = rng.randint(-max_degree, max_degree)
        m = rng.randint(0, max_degree)
        n = rng.randint(0, max_degree)
        if abs(l) + m + n <= max_degree and (l, m, n) != (0, 0, 0):
            if alg in ("Uq-m2", "Aq-M2") and l < 0:
                l = -l
            return (l, m, n)


def _tensor_terms(x):
    return {k: v for k, v in x.terms.items()}


def _coassociative(alg, key):
    d = comultiply(monomial(alg, key))
    left, right = {}, {}
    for (k1, k2), c in d.terms.items():
        for (a, b), cc in comultiply(monomial(alg, k1)).terms.items():
            k = (a, b, k2)
            left[k] = left.get(k, c * 0) + c * cc
        for (a, b), cc in comultiply(monomial(alg, k2)).terms.items():
            k = (k1, a, b)
            right[k] = right.get(k, c * 0) + c * cc
    keys = set(left) | set(right)
    zero = counit(monomial(alg, key)) * 0
    worst = 0.0
    for k in keys:
        diff = left.get(k, zero) - right.get(k, zero)
        worst = max(worst, _absval(diff))
    return worst


def _counit_axiom(alg, key):
    x = monomial(alg, key)
    d = comultiply(x)
    acc_l = unit(alg).scale(0)
    acc_r = unit(alg).scale(0)
    for (k1, k2), c in d.terms.items():
        acc_l = acc_l + monomial(alg, k2).scale(c * counit(monomial(alg, k1)))
        acc_r = acc_r + monomial(alg, k1).scale(c * counit(monomial(alg, k2)))
    worst = 0.0
    for lhs in (acc_l, acc_r):
        diff = lhs - x
        for c in diff.terms.values():
            worst = max(worst, _absval(c))
    return worst


def _antipode_axiom(alg, key):
    x = monomial(alg, key)
    d = comultiply(x)
    acc_l = unit(alg).scale(0)
    acc_r = unit(alg).scale(0)
    for (k1, k2), c in d.terms.items():
        acc_l = acc_l + (antipode(monomial(alg, k1)) * monomial(alg, k2)).scale(c)
        acc_r = acc_r + (monomial(alg, k1) * antipode(monomial(alg, k2))).scale(c)
    tgt = unit(alg).scale(counit(x))
    worst = 0.0
    for lhs in (acc_l, acc_r):
        diff = lhs - tgt
        for c in diff.terms.values():
            worst = max(worst, _absval(c))
    return worst


def suite_hopf_axioms(q=None, monomials=50, max_degree=3, seed=0,
                      precision_bits=DEFAULT_PRECISION_BITS, tolerance=0.0):
    """Coassociativity, counit and antipode identities on generators plus
    seeded random basis monomials, in all four Hopf algebras."""
    rec = _Recorder(tolerance)
    rng = random.Random(seed)
    gens = {
        "Uq-sl2": ((-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)),
        "Aq-SL2": ((-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)),
        "Uq-m2": ((-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)),
        "Aq-M2": ((-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)),
    }
    for alg in ALGEBRAS:
        keys = list(gens[alg])
        keys += [_rand_key(rng, alg, max_degree) for _ in range(monomials)]
        for i, key in enumerate(keys):
            tag = f"gen{i}" if i < 4 else f"mono{i - 4:02d}"
            params = {"algebra": alg, "key": list(key)}
            rec.run(f"hopf/{alg}/{tag}/coassociativity", params,
                    lambda a=alg, k=key: _coassociative(a, k))
            rec.run(f"hopf/{alg}/{tag}/counit", params,
                    lambda a=alg, k=key: _counit_axiom(a, k))
            rec.run(f"hopf/{alg}/{tag}/antipode", params,
                    lambda a=alg, k=key: _antipode_axiom(a, k))
    return SuiteReport("hopf-axioms", _env(q, precision_bits, 0, seed),
                       rec.checks)


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def suite_duality(q=None, max_exp=3, seed=0,
                  precision_bits=DEFAULT_PRECISION_BITS, tolerance=0.0):
    """Closed-form duality pairing versus the recursive pairing built from
    the comultiplication and the generator pairings, on both PBW branches."""
    rec = _Recorder(tolerance)
    ukeys = [(l, m, n) for l in range(-max_exp, max_exp + 1)
             for m in range(max_exp + 1) for n in range(max_exp + 1)]
    akeys = list(ukeys)
    for ul, um, un in ukeys:
        u = monomial("Uq-sl2", (ul, um, un))
        worst = 0.0
        wkey = None
        started = time.perf_counter()
        for al, am, an in akeys:
            a = monomial("Aq-SL2", (al, am, an))
            diff = _absval(pairing(u, a) - pairing_recursive(u, a))
            if diff > worst:
                worst, wkey = diff, [al, am, an]
        rec.add(f"duality/u={ul},{um},{un}",
                {"ukey": [ul, um, un], "worst_akey": wkey},
                worst, started=started)
    return SuiteReport("duality", _env(q, precision_bits, 0, seed), rec.checks)


# ---------------------------------------------------------------------------
# schur
# ---------------------------------------------------------------------------

def suite_schur(q=Fraction(1, 2), l_max=Fraction(3, 2),
                precision_bits=DEFAULT_PRECISION_BITS, seed=0,
                tolerance=1e-25):
    """Schur-type orthogonality of the unitary spin matrix elements under
    the Haar functional, against the closed-form right hand side."""
    rec = _Recorder(tolerance)
    qn = _num(q, precision_bits)
    spins = []
    s = Fraction(0)
    while s <= l_max:
        spins.append(s)
        s += Fraction(1, 2)
    for l in spins:
        for k in spins:
            started = time.perf_counter()
            worst = 0.0
            widx = None
            try:
                for m in _spin_range(l):
                    for n in _spin_range(l):
                        for i in _spin_range(k):
                            for j in _spin_range(k):
                                got, want = schur_check(l, k, m, n, i, j, qn)
                                diff = _absval(got - want)
                                if diff > worst:
                                    worst = diff
                                    widx = [str(m), str(n), str(i), str(j)]
                res = worst
            except Exception as exc:
                res = INF
                widx = f"{type(exc).__name__}: {exc}"
            rec.add(f"schur/l={l}/k={k}", {"l": str(l), "k": str(k),
                                           "worst_index": widx},
                    res, started=started)
    return SuiteReport("schur", _env(q, precision_bits, 0, seed), rec.checks)


def _spin_range(l):
    out = []
    m = -l
    while m <= l:
        out.append(m)
        m += 1
    return out


# ---------------------------------------------------------------------------
# haar-aw
# ---------------------------------------------------------------------------

def suite_haar_aw(q=Fraction(1, 2), sigma=Fraction(3, 10), tau=Fraction(1, 10),
                  truncation=200, m_max=6, precision_bits=DEFAULT_PRECISION_BITS,
                  seed=0, tolerance=1e-8):
    """The Haar functional on spherical subalgebras: Askey-Wilson measure for
    rho_{tau,sigma}, a q-integral for rho_{tau,inf}, and the semicircle for
    the cocentral element (alpha + alpha*)/2."""
    rec = _Recorder(tolerance)
    prec = precision_bits
    qn = _num(q, prec)
    q2 = qn * qn
    sigma, tau = Fraction(sigma), Fraction(tau)
    # absolutely continuous Askey-Wilson case
    a = -qn ** (sigma + tau + 1)
    b = -qn ** (1 - sigma - tau)
    c = qn ** (sigma - tau + 1)
    d = qn ** (1 - sigma + tau)
    try:
        meas = aw_measure(a, b, c, d, q2, prec)
    except Exception:
        meas = None
    rho = spherical_rho(tau, sigma, qn)
    p = rho ** 0
    for m in range(m_max + 1):
        if m > 0:
            p = p * rho
        def chk(pm=p, m=m):
            lhs = haar_trace(pm, N=truncation)
            rhs = integrate(meas, lambda x: x ** m)
            return _absval(lhs - rhs)
        rec.run(f"haar-aw/ac/m={m}", {"m": m, "sigma": str(sigma),
                                      "tau": str(tau)}, chk)
    # q-integral case, sigma -> inf
    rho_inf = spherical_rho(tau, INF, qn)
    p = rho_inf ** 0
    q2t = qn ** (2 * tau)
    for m in range(m_max + 1):
        if m > 0:
            p = p * rho_inf
        def chk(pm=p, m=m):
            lhs = haar_trace(pm, N=truncation)
            rhs = qintegral(lambda x: x ** m, -1, q2t, q2, prec) / (1 + q2t)
            return _absval(lhs - rhs)
        rec.run(f"haar-aw/qint/m={m}", {"m": m, "tau": str(tau)}, chk,
                tol=min(tolerance, 1e-10))
    # cocentral case: semicircle moments
    al = generator("Aq-SL2", "alpha", qn)
    x = (al + star(al, "SU2")).scale(_num(Fraction(1, 2), prec))
    p = x ** 0
    for m in range(m_max + 1):
        if m > 0:
            p = p * x
        def chk(pm=p, m=m):
            lhs = haar(pm)
            rhs = (Fraction(math.comb(m, m // 2), (m // 2 + 1) * 2 ** m)
                   if m % 2 == 0 else 0)
            return _absval(lhs - _num(rhs, prec))
        rec.run(f"haar-aw/cocentral/m={m}", {"m": m}, chk,
                tol=min(tolerance, 1e-10))
    return SuiteReport("haar-aw", _env(q, prec, truncation, seed), rec.checks)


# ---------------------------------------------------------------------------
# addition
# ---------------------------------------------------------------------------

def _addition_constant(l, n, tau, sigma, q):
    """Constant D^{n,l}(tau, sigma) of the addition formula."""
    q2 = q * q
    return (reps._limit_c(l, n, sigma, q) * reps._limit_c(l, n, tau, q)
            * q ** (n * (Fraction(tau) + Fraction(sigma) - 1))
            * q ** l * qpochhammer(q2 ** (l + 1), q2, l))


def _qlegendre(l, tau, sigma, q, x):
    q2 = q * q
    fp = FamilyParams("askey-wilson",
                      aw_jacobi_params(0, 0, q ** Fraction(tau),
                                       q ** Fraction(sigma), q2), q2)
    return eval_poly(fp, l, x)


def _qlaguerre_fp(p, tau, sigma, q):
    q2 = q * q
    return FamilyParams("askey-wilson",
                        aw_laguerre_params(p, q ** Fraction(tau),
                                           q ** Fraction(sigma), q2), q2)


def _bigp(deg, n, c, d, q, x):
    q2 = q * q
    return eval_poly(FamilyParams("big-q-jacobi", (n, n, c, d), q2), deg, x)


def _addition_residual(l, m, p, tau, sigma, q, x):
    """Relative residual of the main addition formula at the point x."""
    prec = x.prec if isinstance(x, NumScalar) else DEFAULT_PRECISION_BITS
    q2 = q * q
    one = _num(1, prec)
    qt2, qs2 = q ** (2 * Fraction(tau)), q ** (2 * Fraction(sigma))
    lag = _qlaguerre_fp(p, tau, sigma, q)
    lhs = _qlegendre(l, tau, sigma, q, x) * eval_poly(lag, m, x)
    rhs = _num(0, prec)
    for n in range(l + 1):
        dn = _addition_constant(l, n, tau, sigma, q)
        p1 = _bigp(l - n, n, qt2, one, q, -q2 ** m)
        p2 = _bigp(l - n, n, qs2, one, q, -q2 ** (m + p))
        rhs = rhs + dn * p1 * p2 * eval_poly(lag, m + n, x)
    for n in range(1, min(l, m) + 1):
        dn = _addition_constant(l, n, tau, sigma, q)
        wt = qpochhammer([q2 ** m, q2 ** (m + p),
                          -q ** (2 * (m + p) - 2 * Fraction(sigma)),
                          -q ** (2 * m - 2 * Fraction(tau))], 1 / q2, n)
        p1 = _bigp(l - n, n, qt2, one, q, -q2 ** (m - n))
        p2 = _bigp(l - n, n, qs2, one, q, -q2 ** (m + p - n))
        rhs = rhs + dn * wt * p1 * p2 * eval_poly(lag, m - n, x)
    return _rel(lhs, rhs)


def _twoparam_residual(l, mu, tau, sigma, q, lam, nu):
    """Relative residual of the two-parameter addition formula."""
    prec = lam.prec if isinstance(lam, NumScalar) else DEFAULT_PRECISION_BITS
    q2 = q * q
    mu, tau, sigma = Fraction(mu), Fraction(tau), Fraction(sigma)
    qm, qt, qs = q ** mu, q ** tau, q ** sigma

    def pj(n, a, b, s, t, x):
        return eval_poly(FamilyParams(
            "askey-wilson", aw_jacobi_params(a, b, s, t, q2), q2), n, x)

    def xi(z):
        return (z / q + q / z) / 2

    lhs = qpochhammer(q2, q2, l) * q ** (-l) * pj(l, 0, 0, qt, qs, xi(lam * nu))
    rhs = (pj(l, 0, 0, qm, qt, xi(lam)) * pj(l, 0, 0, qm, qs, xi(nu))
           / qpochhammer([-q2 / (qm * qm), -q2 * qm * qm], q2, l))
    for p in range(1, l + 1):
        num = ((1 + q ** (4 * p + 2 * mu)) * qpochhammer(q2, q2, l + p)
               * (lam * nu) ** (-p)
               * qpochhammer([lam * qm / qt, -lam * qt * qm,
                              nu * qm / qs, -nu * qm * qs], q2, p))
        den = ((1 + qm * qm) * qpochhammer(q2, q2, l - p)
               * qpochhammer(-q2 / (qm * qm), q2, l - p)
               * qpochhammer(-q2 * qm * qm, q2, l + p))
        rhs = rhs + num / den * pj(l - p, p, p, qm, qt, xi(lam)) \
            * pj(l - p, p, p, qm, qs, xi(nu))
        num = ((1 + q ** (4 * p - 2 * mu)) * qpochhammer(q2, q2, l + p)
               * (lam * nu) ** (-p)
               * qpochhammer([lam * qt / qm, -lam / (qt * qm),
                              nu * qs / qm, -nu / (qm * qs)], q2, p))
        den = ((1 + 1 / (qm * qm)) * qpochhammer(q2, q2, l - p)
               * qpochhammer(-q2 * qm * qm, q2, l - p)
               * qpochhammer(-q2 / (qm * qm), q2, l + p))
        rhs = rhs + num / den * pj(l - p, p, p, 1 / qm, 1 / qt, xi(lam)) \
            * pj(l - p, p, p, 1 / qm, 1 / qs, xi(nu))
    return _rel(lhs, rhs)


def suite_addition_formula(l_max=4, m_max=3, p_max=2, sigma=Fraction(3, 10),
                           tau=Fraction(1, 10), q=Fraction(1, 2), samples=5,
                           seed=0, precision_bits=DEFAULT_PRECISION_BITS,
                           tolerance=1e-12, product_l_max=2,
                           product_tolerance=1e-8):
    """Main addition formula at random complex points, the two-parameter
    formula at random spectral points, and the product formula by quadrature
    against the q-Laguerre-type orthogonality measure."""
    prec = precision_bits
    rec = _Recorder(tolerance)
    rng = random.Random(seed)
    qn = _num(q, prec)
    q2 = qn * qn
    xs = [NumScalar(complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)),
                    prec) for _ in range(samples)]
    for l in range(l_max + 1):
        for m in range(m_max + 1):
            for p in range(p_max + 1):
                def chk(l=l, m=m, p=p):
                    return max(_addition_residual(l, m, p, tau, sigma, qn, x)
                               for x in xs)
                rec.run(f"addition/main/l={l}/m={m}/p={p}",
                        {"l": l, "m": m, "p": p, "samples": samples}, chk)
    mu = Fraction(1, 5)
    for l in range(l_max + 1):
        lamf = _rand_frac(rng, 0.4, 1.6)
        nuf = _rand_frac(rng, 0.4, 1.6)
        lam, nu = _num(lamf, prec), _num(nuf, prec)
        def chk(l=l, lam=lam, nu=nu):
            return _twoparam_residual(l, mu, tau, sigma, qn, lam, nu)
        rec.run(f"addition/two-parameter/l={l}",
                {"l": l, "lambda": str(lamf), "nu": str(nuf),
                 "mu": str(mu)}, chk)
    # product formula by quadrature
    one = _num(1, prec)
    qt2, qs2 = qn ** (2 * Fraction(tau)), qn ** (2 * Fraction(sigma))
    for p in range(p_max + 1):
        lag = _qlaguerre_fp(p, tau, sigma, qn)
        try:
            meas = aw_measure(*lag.params, q2, prec)
        except Exception:
            meas = None
        for l in range(product_l_max + 1):
            for m in range(min(m_max, 2) + 1):
                def chk(l=l, m=m, p=p, lag=lag, meas=meas):
                    lhs = (_bigp(l, 0, qt2, one, qn, -q2 ** m)
                           * _bigp(l, 0, qs2, one, qn, -q2 ** (m + p)))
                    quad = integrate(meas, lambda x:
                                     _qlegendre(l, tau, sigma, qn, x)
                                     * eval_poly(lag, m, x) ** 2)
                    a, b, c, _d = lag.params
                    norm = qpochhammer([q2, a * b, a * c, b * c], q2, m)
                    const = _addition_constant(l, 0, tau, sigma, qn) * norm
                    return _rel(lhs, quad / const)
                rec.run(f"addition/product/l={l}/m={m}/p={p}",
                        {"l": l, "m": m, "p": p}, chk, tol=product_tolerance)
    return SuiteReport("addition", _env(q, prec, 0, seed), rec.checks)


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------

def _asc(n, a, b, q2, x):
    return eval_poly(FamilyParams("al-salam-chihara", (a, b), q2), n, x)


def _asc_orthonormal(n, a, b, q2, x):
    return _asc(n, a, b, q2, x) / qpochhammer([q2, a * b], q2, n).sqrt()


def _convolution_residual(n, j, k1, k2, s, z, w, q):
    """Relative residual of the convolution theorem for Al-Salam-Chihara
    polynomials at x = mu(z), y = mu(w)."""
    q2 = q * q
    k1, k2, s = Fraction(k1), Fraction(k2), Fraction(s)
    sv, zv, wv = q ** s, q ** z, q ** w
    x, y = (zv + 1 / zv) / 2, (wv + 1 / wv) / 2
    qk1, qk2 = q ** (2 * k1), q ** (2 * k2)
    lhs = x * 0
    for l in range(n + j + 1):
        qh = eval_poly(FamilyParams(
            "q-hahn", (q ** (4 * k1 - 2), q ** (4 * k2 - 2), n + j), q2),
            j, q2 ** (-l))
        lhs = lhs + (q ** (-2 * l * k1) * qbinomial(n + j, l, q2) * qh
                     * _asc(l, qk1 * wv, qk1 / wv, q2, x)
                     * _asc(n + j - l, qk2 * sv, qk2 / sv, q2, y))
    k = k1 + k2 + j
    pj = eval_poly(FamilyParams(
        "askey-wilson", (qk1 * zv, qk1 / zv, qk2 * sv, qk2 / sv), q2), j, y)
    rhs = (q ** (-2 * n * k1) / qpochhammer(q ** (4 * k1), q2, j)
           * _asc(n, q ** (2 * k) * sv, q ** (2 * k) / sv, q2, x) * pj)
    return _rel(lhs, rhs)


def _step_one_residual(n, j, k1, k2, s, z, w, q, prec):
    """Relative residual of the single-step convolution lemma, with the
    Clebsch-Gordan coefficients computed independently."""
    q2 = q * q
    k1, k2, s = Fraction(k1), Fraction(k2), Fraction(s)
    sv, zv, wv = q ** s, q ** z, q ** w
    x, y = (zv + 1 / zv) / 2, (wv + 1 / wv) / 2
    qk1, qk2 = q ** (2 * k1), q ** (2 * k2)
    k = k1 + k2 + j
    lhs = _num(0, prec)
    for n1 in range(n + j + 1):
        n2 = n + j - n1
        cgc = reps.cgc_su11(k1, k2, j, n1, n2, n, q)
        lhs = lhs + (cgc * _asc_orthonormal(n1, qk1 * wv, qk1 / wv, q2, x)
                     * _asc_orthonormal(n2, qk2 * sv, qk2 / sv, q2, y))
    pj = eval_poly(FamilyParams(
        "askey-wilson", (qk1 * zv, qk1 / zv, qk2 * sv, qk2 / sv), q2), j, y)
    rhs = (_asc_orthonormal(n, q ** (2 * k) * sv, q ** (2 * k) / sv, q2, x)
           * pj / qpochhammer([q2, q ** (4 * k1), q ** (4 * k2),
                               q ** (4 * k1 + 4 * k2 + 2 * j - 2)],
                              q2, j).sqrt())
    return _rel(lhs, rhs)


def suite_convolution_asc(n_max=3, j_max=2, k1=Fraction(3, 10),
                          k2=Fraction(2, 5), s=Fraction(11, 10),
                          q=Fraction(1, 2), samples=2, seed=0,
                          precision_bits=DEFAULT_PRECISION_BITS,
                          tolerance=1e-12, unitarity_tolerance=1e-28):
    """Convolution theorem for Al-Salam-Chihara polynomials, the single-step
    lemma with independently computed Clebsch-Gordan coefficients, the j=0
    and n=0 degenerations, and Clebsch-Gordan unitarity."""
    prec = precision_bits
    rec = _Recorder(tolerance)
    rng = random.Random(seed)
    qn = _num(q, prec)
    draws = [(_rand_frac(rng, 0.3, 1.5), _rand_frac(rng, 0.3, 1.5))
             for _ in range(samples)]
    for n in range(n_max + 1):
        for j in range(j_max + 1):
            def chk(n=n, j=j):
                return max(_convolution_residual(n, j, k1, k2, s, z, w, qn)
                           for z, w in draws)
            rec.run(f"convolution/theorem/n={n}/j={j}",
                    {"n": n, "j": j, "k1": str(Fraction(k1)),
                     "k2": str(Fraction(k2)), "s": str(Fraction(s))}, chk)
            def chk2(n=n, j=j):
                return max(_step_one_residual(n, j, k1, k2, s, z, w, qn, prec)
                           for z, w in draws)
            rec.run(f"convolution/step-one/n={n}/j={j}",
                    {"n": n, "j": j}, chk2)
    # unitarity of the Clebsch-Gordan coefficients
    for total in range(0, 5):
        def chk(total=total):
            worst = 0.0
            for n in range(total + 1):
                for npr in range(total + 1):
                    acc = _num(0, prec)
                    for n1 in range(total + 1):
                        n2 = total - n1
                        acc = acc + (reps.cgc_su11(k1, k2, total - n, n1, n2,
                                                   n, qn)
                                     * reps.cgc_su11(k1, k2, total - npr, n1,
                                                     n2, npr, qn))
                    want = 1 if n == npr else 0
                    worst = max(worst, _absval(acc - want))
            return worst
        rec.run(f"convolution/cgc-unitarity/n+j={total}",
                {"n_plus_j": total}, chk, tol=unitarity_tolerance)
    return SuiteReport("convolution", _env(q, prec, 0, seed), rec.checks)


# ---------------------------------------------------------------------------
# qbessel
# ---------------------------------------------------------------------------

def _hahn_exton_adaptive(nu, z, q, prec):
    """Hahn-Exton q-Bessel value with working precision boosted enough to
    absorb the catastrophic cancellation at large |z|.

    z and q must be exact (Fraction or int) so they can be re-constructed
    at the boosted working precision without rounding."""
    az = abs(float(z))
    lq = -math.log2(abs(float(q)))
    lz = math.log2(az) if az > 1.0 else 0.0
    wp = prec + int(2 * lz * lz / lq + 2 * abs(nu) * lz) + 64
    v = hahn_exton_bessel(nu, NumScalar(Fraction(z), wp),
                          NumScalar(Fraction(q), wp), wp)
    return NumScalar(0, prec) + v


def suite_qbessel(k_max=2, truncation=60, R=Fraction(3, 10), q=Fraction(1, 2),
                  z=Fraction(2, 5), seed=0,
                  precision_bits=DEFAULT_PRECISION_BITS, tolerance=1e-15,
                  rep_size=10, rep_tolerance=1e-25):
    """Hahn-Exton q-Bessel identities: Hansen-Lommel and Hankel-type
    orthogonality with certified tails, the Graf-type addition formula, the
    closed form of the plane-motions matrix elements against the duality
    pairing, and the q-exponential matrix elements."""
    prec = precision_bits
    rec = _Recorder(tolerance)
    qfrac = Fraction(q)
    qn = _num(qfrac, prec)
    qf = float(qfrac)
    q2f = qfrac * qfrac
    zf = Fraction(z)
    T = truncation

    jcache = {}

    def J(nu, zz, base):
        # the same (order, argument) pairs recur across delta-residual checks
        key = (nu, zz, base)
        if key not in jcache:
            jcache[key] = _hahn_exton_adaptive(nu, zz, base, prec)
        return jcache[key]

    # (a) Hansen-Lommel: sum_i q^i J_{k+i} J_{j+i} = delta q^{-k}
    ratio = qf * float(zf) ** 2
    orders = sorted(set(list(range(0, k_max + 1)) + [-1]))
    for k in orders:
        for j in orders:
            def chk(k=k, j=j):
                acc = _num(0, prec)
                for i in range(-T, T + 1):
                    acc = acc + qn ** i * J(k + i, zf, qfrac) \
                        * J(j + i, zf, qfrac)
                want = qn ** (-k) if k == j else _num(0, prec)
                # tail bound: |J_nu(z;q)| <= |z|^nu * B for nu >= 0
                bigb = 1.0
                kk, term = 1, 1.0
                while term > 1e-40 and kk < 400:
                    term *= qf ** (kk - 1) * float(zf) ** 2 / (1 - qf ** kk)
                    bigb += term
                    kk += 1
                bigb /= float(abs(complex(qpochhammer(qn, qn, INF))))
                tail = (bigb ** 2 * float(zf) ** (k + j)
                        * ratio ** (T + 1) / (1 - ratio))
                return _absval(acc - want) + tail
            rec.run(f"qbessel/hansen-lommel/k={k}/j={j}",
                    {"k": k, "j": j, "z": str(zf), "terms": 2 * T + 1}, chk,
                    tol=max(tolerance, 1e-20))
    # (b) Hankel-type orthogonality with C = 1
    for n in range(0, min(k_max, 2) + 1):
        for (k, l) in ((0, 0), (1, 1), (0, 1), (1, -1), (-1, -1)):
            def chk(n=n, k=k, l=l):
                acc = _num(0, prec)
                for p in range(-18, T + 1):
                    acc = acc + (qn ** (2 * p)
                                 * J(n, qfrac ** (k + p), q2f)
                                 * J(n, qfrac ** (l + p), q2f))
                want = qn ** (-2 * k) if k == l else _num(0, prec)
                return _absval(acc - want)
            rec.run(f"qbessel/hankel/n={n}/k={k}/l={l}",
                    {"n": n, "k": k, "l": l}, chk, tol=max(tolerance, 1e-12))
    # (c) Graf-type addition formula
    Rf = Fraction(R)
    for (n, y, x, zz) in ((0, 0, 0, 0), (1, 0, 0, 1), (2, 1, 0, 1),
                          (-1, 1, 2, 0), (1, 0, 1, 2)):
        def chk(n=n, y=y, x=x, zz=zz):
            lhs = ((-qn) ** n * J(x - n, qfrac ** (zz - y), q2f)
                   * J(n, Rf * qfrac ** (n + zz), q2f))
            rhs = _num(0, prec)
            for kk in range(-25, T + 1):
                rhs = rhs + (qn ** (2 * kk) * J(kk, Rf * qfrac ** (y + x), q2f)
                             * J(kk - n, Rf * qfrac ** y, q2f)
                             * J(x, qfrac ** (zz + kk - y), q2f))
            return _absval(lhs - rhs)
        rec.run(f"qbessel/graf/n={n}/y={y}/x={x}/z={zz}",
                {"n": n, "y": y, "x": x, "z": zz, "R": str(Rf)}, chk)
    # (d) matrix elements of the plane-motions representation vs pairing
    q2 = qn * qn
    Rv = _num(Rf, prec)
    rep = t_R(Rv, max(rep_size, 4), qn)
    N = rep.N
    al = generator("Aq-M2", "alpha", qn)
    be = generator("Aq-M2", "beta", qn)
    ga = generator("Aq-M2", "gamma", qn)
    alinv = generator("Aq-M2", "delta", qn)

    def phi11_elt(w_scalar, zelt, nterms=8):
        tot, term = zelt * 0, zelt ** 0
        for kk in range(nterms):
            if kk > 0:
                term = term * zelt
            coef = (_num((-1) ** kk, prec) * q2 ** Fraction(kk * (kk - 1), 2)
                    / (qpochhammer(q2, q2, kk)
                       * qpochhammer(w_scalar, q2, kk)))
            tot = tot + term.scale(coef)
        return tot

    def t_r_elt(i, j):
        if i >= j:
            d, base, gen2 = i - j, j, be
        else:
            d, base, gen2 = j - i, i, ga
        pref = ((Rv * (1 - q2) / qn ** Fraction(2 * base + 1, 2)) ** d
                / qpochhammer(q2, q2, d))
        head = (al ** (i + j) if i + j >= 0 else alinv ** (-(i + j))) \
            * gen2 ** d
        ph = phi11_elt(q2 ** (d + 1),
                       (be * ga).scale(-(1 - q2) ** 2 * Rv * Rv
                                       * qn ** (-2 * base)))
        return (head * ph).scale(pref)

    A = generator("Uq-m2", "A", qn)
    B = generator("Uq-m2", "B", qn)
    C = generator("Uq-m2", "C", qn)
    for pp in range(3):
        for r in range(3):
            for ss in range(3):
                def chk(pp=pp, r=r, ss=ss):
                    u = (A ** pp) * (B ** r) * (C ** ss)
                    M = rep.matrix_of(u)
                    worst = 0.0
                    for i in range(-2, 3):
                        for j in range(-2, 3):
                            got = pairing(u, t_r_elt(i, j))
                            worst = max(worst,
                                        _absval(got - M[i + N][j + N]))
                    return worst
                rec.run(f"qbessel/t-R-pairing/p={pp}/r={r}/s={ss}",
                        {"p": pp, "r": r, "s": ss, "R": str(Rf)}, chk,
                        tol=rep_tolerance)
    # (e) q-exponential matrix elements U_{m,k}(b,c)
    bb = _num(Fraction(2, 5), prec)
    cc = _num(Fraction(3, 10), prec)

    ucache = {}

    def u_direct(m, k, b, c, terms=80):
        key = (m, k, float(b.real), float(c.real))
        if key in ucache:
            return ucache[key]
        tot = _num(0, prec)
        for sidx in range(terms):
            r = k - m + sidx
            if r < 0:
                continue
            tot = tot + (qn ** Fraction(sidx * (sidx - 1), 2)
                         * (c * Rv) ** sidx / qpochhammer(qn, qn, sidx)
                         * (b * Rv) ** r / qpochhammer(qn, qn, r))
        ucache[key] = tot
        return tot

    def u_closed(m, k):
        nu = k - m
        zsq = -bb * cc * Rv * Rv / qn
        zv = zsq.sqrt()
        return (Rv * bb) ** nu * zv ** (-nu) \
            * hahn_exton_bessel(nu, zv, qn, prec)

    for m in (-2, 0, 1):
        for k in range(m - 2, m + 4):
            def chk(m=m, k=k):
                return _absval(u_direct(m, k, bb, cc) - u_closed(m, k))
            rec.run(f"qbessel/qexp-matelt/m={m}/k={k}", {"m": m, "k": k},
                    chk, tol=max(tolerance, 1e-20))
    for l in (0, 1):
        for k in (0, 1, -1):
            def chk(l=l, k=k):
                acc = _num(0, prec)
                for pidx in range(-25, 26):
                    acc = acc + (u_direct(pidx, l, -cc, -bb)
                                 * u_direct(pidx, k, bb, cc))
                want = 1 if k == l else 0
                return _absval(acc - want)
            rec.run(f"qbessel/qexp-unitarity/l={l}/k={k}", {"l": l, "k": k},
                    chk, tol=max(tolerance, 1e-20))
    return SuiteReport("qbessel", _env(q, prec, truncation, seed), rec.checks)


# ---------------------------------------------------------------------------
# qseries-identities
# ---------------------------------------------------------------------------

def suite_qseries_identities(q=Fraction(1, 2), draws=20, seed=0,
                             precision_bits=DEFAULT_PRECISION_BITS,
                             tolerance=1e-35):
    """Classical summation and transformation formulas for basic
    hypergeometric series, plus three orthogonality and generating-function
    identities for specific polynomial families."""
    prec = precision_bits
    rec = _Recorder(tolerance)
    rng = random.Random(seed)
    qn = _num(q, prec)

    def rnum(lo, hi):
        return _num(_rand_frac(rng, lo, hi), prec)

    def run_drawn(cid, draw, residual):
        def chk():
            worst = 0.0
            for _ in range(draws):
                worst = max(worst, residual(*draw()))
            return worst
        rec.run(cid, {"draws": draws}, chk)

    # q-binomial theorem
    def r_qbinom(a, z):
        lhs = phis((a,), (), qn, z)
        rhs = qpochhammer(a * z, qn, INF) / qpochhammer(z, qn, INF)
        return _absval(lhs - rhs)
    run_drawn("qseries/q-binomial-theorem",
              lambda: (rnum(0.1, 0.9), rnum(0.1, 0.85)), r_qbinom)

    # Heine transformations I-III
    def heine_draw():
        a, b = rnum(0.2, 0.8), rnum(0.3, 0.8)
        w, z = rnum(0.5, 0.9), rnum(0.1, 0.5)
        return a, b, b * w, z

    def r_heine1(a, b, c, z):
        lhs = phis((a, b), (c,), qn, z)
        rhs = (qpochhammer([b, a * z], qn, INF)
               / qpochhammer([c, z], qn, INF)
               * phis((c / b, z), (a * z,), qn, b))
        return _absval(lhs - rhs)

    def r_heine2(a, b, c, z):
        lhs = phis((a, b), (c,), qn, z)
        rhs = (qpochhammer([c / b, b * z], qn, INF)
               / qpochhammer([c, z], qn, INF)
               * phis((a * b * z / c, b), (b * z,), qn, c / b))
        return _absval(lhs - rhs)

    def r_heine3(a, b, c, z):
        lhs = phis((a, b), (c,), qn, z)
        rhs = (qpochhammer(a * b * z / c, qn, INF)
               / qpochhammer(z, qn, INF)
               * phis((c / a, c / b), (c,), qn, a * b * z / c))
        return _absval(lhs - rhs)

    run_drawn("qseries/heine-1", heine_draw, r_heine1)
    run_drawn("qseries/heine-2", heine_draw, r_heine2)
    run_drawn("qseries/heine-3", heine_draw, r_heine3)

    # q-Gauss sum
    def r_gauss(a, b, c):
        lhs = phis((a, b), (c,), qn, c / (a * b))
        rhs = (qpochhammer([c / a, c / b], qn, INF)
               / qpochhammer([c, c / (a * b)], qn, INF))
        return _absval(lhs - rhs)
    run_drawn("qseries/gauss",
              lambda: (rnum(0.4, 0.9), rnum(0.4, 0.9), rnum(0.05, 0.12)),
              r_gauss)

    # Jackson transformation
    def r_jackson(a, b, c, z):
        lhs = phis((a, b), (c,), qn, z)
        rhs = (qpochhammer(a * z, qn, INF) / qpochhammer(z, qn, INF)
               * phis((a, c / b), (c, a * z), qn, b * z))
        return _absval(lhs - rhs)
    run_drawn("qseries/jackson",
              lambda: (rnum(0.1, 0.9), rnum(0.1, 0.9), rnum(0.1, 0.9),
                       rnum(0.1, 0.85)), r_jackson)

    # Sears transformation (terminating, numeric residual)
    def r_sears(n, b, c, d, e):
        lhs = phis((qn ** (-n), b, c), (d, e), qn, qn)
        pref = (qpochhammer(d * e / (b * c), qn, n) / qpochhammer(e, qn, n)
                * (b * c / d) ** n)
        rhs = pref * phis((qn ** (-n), d / b, d / c),
                          (d, d * e / (b * c)), qn, qn)
        return _absval(lhs - rhs)
    run_drawn("qseries/sears",
              lambda: (rng.randint(1, 6), qn ** rng.randint(1, 3),
                       qn ** rng.randint(1, 3), qn ** rng.randint(4, 6),
                       qn ** rng.randint(6, 8)), r_sears)

    # q-Saalschuetz
    def r_saalschuetz(n, a, b, c):
        lhs = phis((qn ** (-n), a, b), (c, qn ** (1 - n) * a * b / c), qn, qn)
        rhs = (qpochhammer([c / a, c / b], qn, n)
               / qpochhammer([c, c / (a * b)], qn, n))
        return _absval(lhs - rhs)
    run_drawn("qseries/q-saalschuetz",
              lambda: (rng.randint(1, 6), qn ** rng.randint(1, 2),
                       qn ** rng.randint(2, 3), qn ** rng.randint(5, 7)),
              r_saalschuetz)

    # Bailey's two-term relation for very-well-poised 8phi7 series
    def r_bailey(a, b, c, d, e):
        f = qn * a * a / (b * c * d * e)

        def poch(x, n=INF):
            return qpochhammer(x, qn, n)
        lhs = (w8_7(a, b, c, d, e, f, qn, qn) / poch(b / a)
               + poch([a * qn, c, d, e])
               / (poch(a / b)
                  * poch([a * qn / c, a * qn / d, a * qn / e, a * qn / f]))
               * poch([f, b * qn / c, b * qn / d, b * qn / e, b * qn / f])
               / poch([b * c / a, b * d / a, b * e / a, b * f / a,
                       b * b * qn / a])
               * w8_7(b * b / a, b, b * c / a, b * d / a, b * e / a,
                      b * f / a, qn, qn))
        rhs = (poch([a * qn, a * qn / (c * d), a * qn / (c * e),
                     a * qn / (c * f), a * qn / (d * e), a * qn / (d * f),
                     a * qn / (e * f)])
               / poch([a * qn / c, a * qn / d, a * qn / e, a * qn / f,
                       b * c / a, b * d / a, b * e / a, b * f / a]))
        return _absval(lhs - rhs)
    # ranges chosen so no lower parameter of either series can hit 1 and no
    # pochhammer in a denominator can hit q^{-k}
    run_drawn("qseries/bailey-8w7",
              lambda: (rnum(0.81, 0.87), rnum(0.30, 0.33), rnum(0.23, 0.26),
                       rnum(0.17, 0.19), rnum(0.11, 0.12)), r_bailey)

    # generating function for the dual q-Krawtchouk polynomials
    sigma = Fraction(3, 10)
    qs = qn ** sigma
    for NN in (4, 6):
        def chk(NN=NN):
            t = _num(_rand_frac(rng, 0.3, 0.9), prec)
            worst = 0.0
            for x in range(NN + 1):
                y = qn ** (-x) - qn ** (Fraction(x - NN) - sigma)
                lhs = _num(0, prec)
                for n in range(NN + 1):
                    rn = eval_poly(FamilyParams("dual-q-krawtchouk",
                                                (qs, NN), qn), n, y)
                    lhs = lhs + (t ** n
                                 * qn ** (Fraction(n, 2) * (NN + sigma))
                                 * qpochhammer(qn ** (-NN), qn, n)
                                 / qpochhammer(qn, qn, n) * rn)
                rhs = (qpochhammer(-t * qn ** (-Fraction(NN + 0, 2)
                                               - Fraction(sigma, 2)), qn, x)
                       * qpochhammer(t * qn ** (Fraction(sigma, 2)
                                                - Fraction(NN, 2)),
                                     qn, NN - x))
                worst = max(worst, _absval(lhs - rhs))
            return worst
        rec.run(f"qseries/dual-q-krawtchouk-genfunc/N={NN}",
                {"N": NN, "sigma": str(sigma)}, chk)

    # Al-Salam-Carlitz orthogonality
    def chk_carlitz():
        a = _num(-_rand_frac(rng, 0.3, 0.9), prec)
        one = _num(1, prec)

        def u(n, x):
            return eval_poly(FamilyParams("al-salam-carlitz", (a,), qn), n, x)

        def wgt(x):
            return qpochhammer([qn * x, qn * x / a], qn, INF)
        worst = 0.0
        for n in range(3):
            for m in range(n, 3):
                got = qintegral(lambda x: u(n, x) * u(m, x) * wgt(x),
                                a, one, qn, prec)
                want = ((-a) ** n * (1 - qn)
                        * qn ** Fraction(n * (n - 1), 2)
                        * qpochhammer(qn, qn, n)
                        * qpochhammer([qn, a, qn / a], qn, INF)
                        if n == m else _num(0, prec))
                worst = max(worst, _absval(got - want))
        return worst
    rec.run("qseries/al-salam-carlitz-orthogonality", {"n_max": 2},
            chk_carlitz)

    # q-Charlier orthogonality
    def chk_charlier():
        tau = Fraction(1, 10)
        q2 = qn * qn
        a = qn ** (2 * tau)
        zero = _num(0, prec)

        def c(n, x):
            return phis((q2 ** (-n), x), (zero,), q2, -q2 ** (n + 1) / a)

        def mu_int(f, terms=220):
            tot = _num(0, prec)
            for n in range(terms):
                tot = tot + (qn ** (2 * n * tau) * qn ** (n * (n - 1))
                             / qpochhammer(q2, q2, n) * f(qn ** (-2 * n)))
            return tot
        worst = 0.0
        for k in range(4):
            for l in range(k, 4):
                got = mu_int(lambda x: c(k, x) * c(l, x))
                want = (qn ** (-2 * k)
                        * qpochhammer([q2, -q2 / a], q2, k)
                        * qpochhammer(-a, q2, INF)
                        if k == l else _num(0, prec))
                worst = max(worst, _absval(got - want))
        return worst
    rec.run("qseries/q-charlier-orthogonality", {"n_max": 3}, chk_charlier)

    return SuiteReport("qseries-identities", _env(q, prec, 0, seed),
                       rec.checks)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SUITE_NAMES = ("hopf-axioms", "duality", "schur", "haar-aw", "addition",
               "convolution", "qbessel", "qseries-identities")

_SUITES = {
    "hopf-axioms": suite_hopf_axioms,
    "duality": suite_duality,
    "schur": suite_schur,
    "haar-aw": suite_haar_aw,
    "addition": suite_addition_formula,
    "convolution": suite_convolution_asc,
    "qbessel": suite_qbessel,
    "qseries-identities": suite_qseries_identities,
}

_EXACT_SUITES = ("hopf-axioms", "duality")


def run_suite(name, q=None, precision_bits=DEFAULT_PRECISION_BITS,
              truncation=None, seed=0, tolerance=None):
    """Run the named suite with uniform option handling.

    ``q`` may be None/'exact' for the exact-coefficient suites, or a number
    (Fraction recommended) for the numeric ones; numeric suites fall back to
    q = 1/2 when no q is given.
    """
    if name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    fn = _SUITES[name]
    kwargs = {"seed": seed, "precision_bits": precision_bits}
    if name in _EXACT_SUITES:
        if q not in (None, "exact"):
            raise ValueError(f"suite {name!r} runs on exact scalars; "
                             "drop --q or pass 'exact'")
    else:
        if q in (None, "exact"):
            q = Fraction(1, 2)
        kwargs["q"] = q
    if tolerance is not None:
        kwargs["tolerance"] = tolerance
    if truncation is not None and name in ("haar-aw", "qbessel"):
        kwargs["truncation"] = truncation
    return fn(**kwargs)
