"""q-orthogonal polynomial families and the Askey-Wilson measure.

Families are identified by string tags; ``eval_poly`` evaluates them through
their (terminating) basic hypergeometric representations, generically over
exact or numeric scalars, and ``recurrence_coeffs`` returns the three-term
recurrence data x p_n = A_n p_{n+1} + B_n p_n + C_n p_{n-1} for the families
whose recurrence is part of the package's contract.  The Askey-Wilson
measure (continuous weight on [-1, 1] plus discrete masses when a parameter
exceeds one in modulus) is built by ``aw_measure`` and integrated by
``integrate`` with Gauss-Legendre quadrature under node doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp
from mpmath.calculus.quadrature import GaussLegendre

from .scalar import DEFAULT_PRECISION_BITS, E_ONE, ExactScalar, NumScalar
from .qseries import (
    NonConvergent,
    _as_scalar,
    _is_exact,
    _num,
    _one_like,
    _prec_of,
    qpochhammer,
)

__all__ = [
    "FAMILIES",
    "FamilyParams",
    "Measure",
    "JacobiOperator",
    "eval_poly",
    "recurrence_coeffs",
    "aw_weight",
    "aw_measure",
    "integrate",
    "jacobi_spectrum",
    "christoffel_darboux",
    "poisson_kernel_qhermite",
    "poisson_kernel_asc",
    "hahn_exton_bessel",
    "aw_jacobi_params",
    "aw_laguerre_params",
    "jacobi_operator",
    "ParamDomain",
    "PoleOnCircle",
    "ResidueContourClash",
    "NoConvergence",
    "ConfluentCase",
]

FAMILIES = (
    "askey-wilson",
    "al-salam-chihara",
    "cts-q-hermite",
    "big-q-jacobi",
    "little-q-jacobi",
    "q-laguerre",
    "q-krawtchouk",
    "dual-q-krawtchouk",
    "q-hahn",
    "q-charlier",
    "al-salam-carlitz",
)


class ParamDomain(ValueError):
    """Parameters outside the admissible domain of a family or measure."""


class PoleOnCircle(ValueError):
    """Askey-Wilson weight evaluated while a pole sits on the unit circle."""


class ResidueContourClash(ValueError):
    """Two poles of the Askey-Wilson weight are too close to separate by a
    residue contour."""


class NoConvergence(ValueError):
    """Quadrature failed to converge within the node budget."""


class ConfluentCase(ValueError):
    """Christoffel-Darboux quotient requested at coinciding arguments."""


@dataclass
class FamilyParams:
    """A family tag with its parameter vector and base q."""

    family: str
    params: tuple
    q: object

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParamDomain(f"unknown family {self.family!r}")
        self.params = tuple(self.params)


# ---------------------------------------------------------------------------
# evaluation through terminating series
# ---------------------------------------------------------------------------

def _aw_eval(n, x, a, b, c, d, q):
    """Askey-Wilson polynomial p_n(x; a,b,c,d | q) through its terminating
    4-phi-3 form, written so that only the symmetric combination
    (a e^{i t}; q)_k (a e^{-i t}; q)_k = prod (1 - 2 a q^i x + a^2 q^{2i})
    appears; this keeps the evaluation polynomial in x and valid for exact
    scalars.  Requires a != 0 (callers permute a nonzero parameter first)."""
    prec = _prec_of(*(s for s in (x, a, b, c, d, q) if isinstance(s, NumScalar)))
    exact = all(_is_exact(s) for s in (x, a, b, c, d, q))
    one = _one_like(exact, prec)
    x, a, b, c, d, q = (_as_scalar(s, prec) for s in (x, a, b, c, d, q))
    ab, ac, ad = a * b, a * c, a * d
    abcd = ab * c * d
    pref = (one / a ** n) * qpochhammer(ab, q, n) * qpochhammer(ac, q, n) \
        * qpochhammer(ad, q, n)
    total = one
    term = one
    qk = one
    qn_inv = one / q ** n
    for k in range(n):
        num = (one - qn_inv * qk) * (one - abcd * q ** (n - 1) * qk) \
            * (one - 2 * a * qk * x + a * a * qk * qk)
        den = (one - ab * qk) * (one - ac * qk) * (one - ad * qk) \
            * (one - q * qk)
        if (exact and den.is_zero()) or (not exact and den.is_zero()):
            raise ParamDomain("degenerate parameter product in denominator")
        term = term * (num / den) * q
        total = total + term
        qk = qk * q
    return pref * total


def _product_series(n, q, upper_consts, pair_factors, lowers, z):
    """Generic terminating sum over k = 0..n of

       prod(upper_consts; q)_k * prod_over pair_factors(k) * z^k
       / ( prod(lowers; q)_k * (q; q)_k )

    where pair_factors is a callable i -> linear-in-x factor for index i,
    multiplied cumulatively (used for factors like (u; q)_k that carry the
    polynomial argument)."""
    prec = _prec_of(*(s for s in (*upper_consts, *lowers, q, z)
                      if isinstance(s, NumScalar)))
    exact = all(_is_exact(s) for s in (*upper_consts, *lowers, q, z))
    one = _one_like(exact, prec)
    q = _as_scalar(q, prec)
    z = _as_scalar(z, prec)
    total = one
    term = one
    qk = one
    for k in range(n):
        num = one
        for a in upper_consts:
            num = num * (one - a * qk)
        if pair_factors is not None:
            num = num * pair_factors(k)
        den = one
        for b in lowers:
            den = den * (one - b * qk)
        den = den * (one - q * qk)
        if den.is_zero():
            raise ParamDomain("degenerate lower parameter in terminating sum")
        term = term * (num / den) * z
        total = total + term
        qk = qk * q
    return total


def eval_poly(fp, n, x):
    """Evaluate the degree-n member of the family at x.

    Exact scalars are supported whenever the parameters and x are exact and
    all exponents entering the series are integers.
    """
    fam, pr, q = fp.family, fp.params, fp.q
    if n < 0:
        raise ParamDomain("degree must be non-negative")

    if fam == "askey-wilson":
        a, b, c, d = pr
        ps = [a, b, c, d]
        # put a nonzero parameter in front (the polynomial is symmetric)
        nz = [i for i, s in enumerate(ps) if not _scalar_is_zero(s)]
        if not nz:
            raise ParamDomain("all parameters zero: use cts-q-hermite")
        ps.insert(0, ps.pop(nz[0]))
        return _aw_eval(n, x, *ps, q)

    if fam == "al-salam-chihara":
        a, b = pr
        if _scalar_is_zero(a) and _scalar_is_zero(b):
            h = eval_poly(FamilyParams("cts-q-hermite", (), q), n, x)
            two_pow = ExactScalar(Fraction(1, 2 ** n)) if _is_exact(h) \
                else NumScalar(Fraction(1, 2 ** n), h.prec)
            return h * two_pow
        if _scalar_is_zero(a):
            a, b = b, a
        return _aw_eval(n, x, a, b, _zero_like(a), _zero_like(a), q)

    if fam == "cts-q-hermite":
        # 2 x H_n = H_{n+1} + (1 - q^n) H_{n-1}
        prec = _prec_of(*(s for s in (x, q) if isinstance(s, NumScalar)))
        exact = _is_exact(x) and _is_exact(q)
        one = _one_like(exact, prec)
        q = _as_scalar(q, prec)
        x = _as_scalar(x, prec)
        hm, h = _zero_like(one), one
        for m in range(n):
            hm, h = h, 2 * x * h - (one - q ** m) * hm
        return h

    if fam == "big-q-jacobi":
        alpha, beta, c, d = pr
        qab = _mixed_qpow(q, alpha + beta + 1)
        qa1 = _mixed_qpow(q, alpha + 1)
        prec = _prec_of(*(s for s in (x, c, d, q, qa1, qab) if isinstance(s, NumScalar)))
        upper2 = qab * _as_scalar(q, prec) ** n  # q^{n+alpha+beta+1}
        u = _sc_div(_sc_mul(x, qa1), c)  # x q^{alpha+1}/c
        lower2 = -_sc_div(_sc_mul(qa1, d), c)  # -q^{alpha+1} d / c
        qn_inv = _inv_qn(q, n, prec)

        def pairs(k):
            one = _one_like(_is_exact(u), prec)
            return one - u * _as_scalar(q, prec) ** k

        return _product_series(n, q, (qn_inv, upper2), pairs,
                               (qa1, lower2), q)

    if fam == "little-q-jacobi":
        alpha, beta = pr
        qa1 = _mixed_qpow(q, alpha + 1)
        qab = _mixed_qpow(q, alpha + beta + 1)
        prec = _prec_of(*(s for s in (x, q) if isinstance(s, NumScalar)))
        qn_inv = _inv_qn(q, n, prec)
        upper2 = qab * _as_scalar(q, prec) ** n
        z = _sc_mul(_as_scalar(q, prec), x)
        return _product_series(n, q, (qn_inv, upper2), None, (qa1,), z)

    if fam == "q-laguerre":
        alpha, s, t = pr
        a, b, c, d = aw_laguerre_params(alpha, s, t, q)
        return eval_poly(FamilyParams("askey-wilson", (a, b, c, d), q), n, x)

    if fam == "q-krawtchouk":
        p, N = pr
        if n > N:
            raise ParamDomain("degree exceeds the lattice size N")
        prec = _prec_of(*(s for s in (x, p, q) if isinstance(s, NumScalar)))
        qn_inv = _inv_qn(q, n, prec)
        qq = _as_scalar(q, prec)
        upper3 = -_sc_div(qq ** n * qq ** (-N), p)  # -q^{n-N-sigma}
        lowN = qq ** (-N)

        def pairs(k):
            one = _one_like(_is_exact(x), prec)
            return one - _as_scalar(x, prec) * qq ** k

        return _product_series(n, q, (qn_inv, upper3), pairs, (lowN,), q)

    if fam == "dual-q-krawtchouk":
        p, N = pr
        if n > N:
            raise ParamDomain("degree exceeds the lattice size N")
        prec = _prec_of(*(s for s in (x, p, q) if isinstance(s, NumScalar)))
        qq = _as_scalar(q, prec)
        qn_inv = _inv_qn(q, n, prec)
        lowN = qq ** (-N)
        shift = _sc_div(qq ** (-N), p)  # q^{-N-sigma}
        y = _as_scalar(x, prec)
        exact = _is_exact(y) and _is_exact(shift)
        one = _one_like(exact, prec)

        def pairs(k):
            return one - qq ** k * y - qq ** (2 * k) * shift

        return _product_series(n, q, (qn_inv,), pairs, (lowN,), q)

    if fam == "q-hahn":
        a, b, N = pr
        if n > N:
            raise ParamDomain("degree exceeds the lattice size N")
        prec = _prec_of(*(s for s in (x, a, b, q) if isinstance(s, NumScalar)))
        qq = _as_scalar(q, prec)
        qn_inv = _inv_qn(q, n, prec)
        upper3 = _sc_mul(_sc_mul(a, b), qq ** (n + 1))
        low1 = _sc_mul(a, qq)
        lowN = qq ** (-N)

        def pairs(k):
            one = _one_like(_is_exact(x), prec)
            return one - _as_scalar(x, prec) * qq ** k

        return _product_series(n, q, (qn_inv, upper3), pairs, (low1, lowN), q)

    if fam == "q-charlier":
        (a,) = pr
        prec = _prec_of(*(s for s in (x, a, q) if isinstance(s, NumScalar)))
        qq = _as_scalar(q, prec)
        qn_inv = _inv_qn(q, n, prec)
        z = -_sc_div(qq ** (n + 1), a)

        def pairs(k):
            one = _one_like(_is_exact(x), prec)
            return one - _as_scalar(x, prec) * qq ** k

        return _product_series(n, q, (qn_inv,), pairs, (), z)

    if fam == "al-salam-carlitz":
        (a,) = pr
        prec = _prec_of(*(s for s in (x, a, q) if isinstance(s, NumScalar)))
        exact = all(_is_exact(s) for s in (x, a, q))
        one = _one_like(exact, prec)
        qq = _as_scalar(q, prec)
        aa = _as_scalar(a, prec)
        xx = _as_scalar(x, prec)
        qn_inv = one / qq ** n

        def pairs(k):
            # (a/x; q)_k x^k accumulates as prod (x - a q^i); folded in by
            # passing the ratio factor (x - a q^k) with argument z = q
            return xx - aa * qq ** k

        total = _product_series(n, q, (qn_inv,), pairs, (), q)
        sign = one if n % 2 == 0 else -one
        return sign * qq ** (n * (n - 1) // 2) * total

    raise ParamDomain(f"unknown family {fam!r}")


def _scalar_is_zero(s):
    if isinstance(s, ExactScalar):
        return s.is_zero()
    if isinstance(s, NumScalar):
        return s.is_zero()
    return s == 0


def _zero_like(s):
    if isinstance(s, (ExactScalar, int, Fraction)):
        return ExactScalar(0)
    return NumScalar(0, s.prec if isinstance(s, NumScalar) else DEFAULT_PRECISION_BITS)


def _precq(q):
    return q.prec if isinstance(q, NumScalar) else DEFAULT_PRECISION_BITS


def _mixed_qpow(q, e):
    """q^e, exact for integer e with exact q, numeric otherwise."""
    if isinstance(e, int):
        if isinstance(q, NumScalar):
            return q ** e
        return _as_scalar(q, DEFAULT_PRECISION_BITS) ** e
    qn = _num(q, _precq(q))
    return qn ** NumScalar(e, qn.prec)


def _inv_qn(q, n, prec):
    return _one_like(_is_exact(q), prec) / _as_scalar(q, prec) ** n


def _sc_mul(a, b):
    return _as_scalar(a, _prec_of(*(s for s in (a, b) if isinstance(s, NumScalar)))) * b


def _sc_div(a, b):
    return _as_scalar(a, _prec_of(*(s for s in (a, b) if isinstance(s, NumScalar)))) / b


# ---------------------------------------------------------------------------
# three-term recurrences
# ---------------------------------------------------------------------------

def recurrence_coeffs(fp, n):
    """Coefficients (A_n, B_n, C_n) in x p_n = A_n p_{n+1} + B_n p_n + C_n p_{n-1}.

    Only families whose recurrence is part of the package contract are
    supported; the remaining families derive orthogonality from moments and
    raise NotImplementedError.
    """
    fam, pr, q = fp.family, fp.params, fp.q
    prec = _prec_of(*(s for s in (*pr, q) if isinstance(s, NumScalar)))
    exact = all(_is_exact(s) for s in (*pr, q))
    one = _one_like(exact, prec)
    qq = _as_scalar(q, prec)
    half = ExactScalar(Fraction(1, 2)) if exact else NumScalar(0.5, prec)

    if fam == "al-salam-chihara":
        a, b = (_as_scalar(s, prec) for s in pr)
        return (half, qq ** n * (a + b) * half,
                (one - qq ** n) * (one - a * b * qq ** (n - 1)) * half)

    if fam == "cts-q-hermite":
        return (half, _zero_like(one), (one - qq ** n) * half)

    if fam == "al-salam-carlitz":
        (a,) = (_as_scalar(s, prec) for s in pr)
        return (one, (one + a) * qq ** n,
                -a * qq ** (n - 1) * (one - qq ** n))

    if fam == "dual-q-krawtchouk":
        p, N = pr
        pp = _as_scalar(p, prec)
        A = one - qq ** (n - N)
        B = (qq ** (-N) - qq ** (-N) / pp) * qq ** n
        C = -(one - qq ** n) * qq ** (-N) / pp
        return (A, B, C)

    if fam == "q-laguerre":
        alpha, s, t = pr
        ss = _as_scalar(s, prec)
        tt = _as_scalar(t, prec)
        qa = _mixed_qpow(q, alpha)
        qh = _sqrt_q(qq, exact, prec)
        Bn = qq ** n * ((tt - one / tt) * qh / ss
                        + (ss - one / ss) * qh * qa / tt
                        + (one + qq) * qh * qq ** n * qa / (ss * tt)) * half
        Cn = ((one - qq ** n) * (one - qa * qq ** n)
              * (one + qq ** n / (ss * ss))
              * (one + qq ** n * qa / (tt * tt))) * half
        return (half, Bn, Cn)

    raise NotImplementedError(
        f"recurrence for {fam!r} is derived from moments, not provided")


def _sqrt_q(qq, exact, prec):
    if exact:
        if isinstance(qq, ExactScalar) and qq == ExactScalar({2: Fraction(1)}):
            return ExactScalar({1: Fraction(1)})
        raise ParamDomain("square root of a general exact scalar")
    return _num(qq, prec).sqrt()


# ---------------------------------------------------------------------------
# Askey-Wilson weight and measure
# ---------------------------------------------------------------------------

def aw_weight(theta, a, b, c, d, q, prec=DEFAULT_PRECISION_BITS):
    """Weight w(cos theta) = (z^2, z^-2; q)_inf / prod_e (e z, e/z; q)_inf
    with z = e^{i theta}.  Raises PoleOnCircle when a denominator factor has
    a zero on the unit circle (|e q^k| = 1)."""
    params = [_num(s, prec) for s in (a, b, c, d)]
    q = _num(q, prec)
    for e in params:
        ae = abs(e)
        if ae >= 1:
            k = mp.nint(-mp.log(ae) / mp.log(abs(q)))
            if k >= 0 and abs(ae * abs(q) ** k - 1) < 1e-25:
                raise PoleOnCircle("weight has a pole on the unit circle")
    with mp.workprec(prec):
        z = NumScalar(mp.exp(1j * mp.mpf(theta)), prec)
    num = qpochhammer([z * z, 1 / (z * z)], q, math.inf)
    den = NumScalar(1, prec)
    for e in params:
        den = den * qpochhammer([e * z, e / z], q, math.inf)
    return num / den


@dataclass
class Measure:
    """Askey-Wilson orthogonality measure: continuous density on [-1, 1]
    against d theta plus point masses.  ``h0`` is the closed-form total mass;
    ``integrate`` divides by it, producing a probability measure."""

    q: object
    params: tuple
    h0: object
    masses: list = field(default_factory=list)
    prec: int = DEFAULT_PRECISION_BITS
    _wcache: dict = field(default_factory=dict, repr=False)

    def weight(self, theta):
        return aw_weight(theta, *self.params, self.q, self.prec)

    def weighted_nodes(self, degree):
        """Gauss-Legendre nodes on [0, pi] with the continuous weight folded
        into the quadrature weights (cached per degree)."""
        if degree not in self._wcache:
            nodes = _gl_nodes(degree, self.prec)
            with mp.workprec(self.prec):
                self._wcache[degree] = [
                    (NumScalar(mp.cos(t), self.prec),
                     NumScalar(w, self.prec) * self.weight(t))
                    for t, w in nodes
                ]
        return self._wcache[degree]


def _pole_lattice(params, q, prec):
    """All poles of the weight in the z plane with 0.05 < |z| < 20."""
    out = []
    with mp.workprec(prec):
        for e in params:
            ev = _num(e, prec).val
            if ev == 0:
                continue
            qv = _num(q, prec).val
            for k in range(0, 200):
                z1 = mp.mpf(1) / (ev * qv ** k)
                z2 = ev * qv ** k
                if abs(z2) > 0.05:
                    out.append(z2)
                if abs(z1) < 20:
                    out.append(z1)
                if abs(z2) <= 0.05 and abs(z1) >= 20:
                    break
    return out


def aw_measure(a, b, c, d, q, prec=DEFAULT_PRECISION_BITS):
    """Construct the Askey-Wilson measure for real parameters with pairwise
    products of modulus below one.  Discrete masses are found by numerical
    residues of w(z)/z on small circles around z = e q^k for each parameter
    e with |e| > 1."""
    params = tuple(_num(s, prec) for s in (a, b, c, d))
    qn = _num(q, prec)
    with mp.workprec(prec):
        if not (0 < qn.val.real < 1) or qn.val.imag != 0:
            raise ParamDomain("q must lie in (0, 1)")
        vals = [p.val for p in params]
        for i in range(4):
            if abs(vals[i].imag) > 1e-40:
                raise ParamDomain("parameters must be real")
            for j in range(i + 1, 4):
                if abs(vals[i] * vals[j]) >= 1:
                    raise ParamDomain("pairwise products must have modulus < 1")
        abcd = params[0] * params[1] * params[2] * params[3]
        h0num = qpochhammer(abcd, qn, math.inf)
        h0den = qpochhammer(qn, qn, math.inf)
        for i in range(4):
            for j in range(i + 1, 4):
                h0den = h0den * qpochhammer(params[i] * params[j], qn, math.inf)
        h0 = h0num / h0den

        poles = _pole_lattice(params, qn, prec)
        masses = []
        for e in params:
            ev = e.val.real
            if abs(ev) <= 1:
                continue
            k = 0
            while abs(ev) * qn.val.real ** k > 1:
                z0 = mp.mpf(ev) * qn.val ** k
                xk = (z0 + 1 / z0) / 2
                others = [p for p in poles if abs(p - z0) > 1e-30]
                dist = min(abs(p - z0) for p in others)
                r = min(mp.mpf("0.1"), dist / 2)
                if r < 1e-20:
                    raise ResidueContourClash(
                        "poles too close to separate by a contour")
                wk = _contour_residue(params, qn, z0, r, prec)
                masses.append((NumScalar(xk, prec), wk))
                k += 1
    return Measure(q=qn, params=params, h0=h0, masses=masses, prec=prec)


def _wt_complex(params, q, z, prec):
    num = qpochhammer([z * z, 1 / (z * z)], q, math.inf)
    den = NumScalar(1, prec)
    for e in params:
        den = den * qpochhammer([e * z, e / z], q, math.inf)
    return num / den


def _contour_residue(params, q, z0, r, prec, npts=512):
    """(1/2 pi i) oint w(z)/z dz on a circle of radius r around z0."""
    with mp.workprec(prec):
        s = NumScalar(0, prec)
        for j in range(npts):
            ph = mp.exp(2j * mp.pi * j / npts)
            z = NumScalar(z0 + r * ph, prec)
            s = s + _wt_complex(params, q, z, prec) / z * NumScalar(r * ph, prec)
        return s / npts


_GL_CACHE = {}


def _gl_nodes(degree, prec):
    key = (degree, prec)
    if key not in _GL_CACHE:
        gl = GaussLegendre(mp)
        with mp.workprec(prec):
            _GL_CACHE[key] = gl.get_nodes(mp.mpf(0), +mp.pi, degree, prec)
    return _GL_CACHE[key]


def integrate(measure, f, rel_tol=None, max_nodes=2 ** 16):
    """Integrate f against the normalized measure:

        (1/h0) [ (1/2 pi) int_0^pi f(cos t) w(cos t) dt + sum_k f(x_k) w_k ].

    Gauss-Legendre quadrature with node doubling until two successive levels
    agree within the tolerance; NoConvergence past ``max_nodes`` nodes.
    """
    prec = measure.prec
    if rel_tol is None:
        digits = int(prec * 0.3010299956639812)
        rel_tol = mp.mpf(10) ** (-(digits - 8))

    with mp.workprec(prec):
        prev = None
        val = None
        degree = 3
        while True:
            nodes = measure.weighted_nodes(degree)
            if len(nodes) > max_nodes:
                raise NoConvergence("quadrature node budget exhausted")
            acc = NumScalar(0, prec)
            for x, w in nodes:
                acc = acc + w * _num(f(x), prec)
            val = acc / (2 * mp.pi)
            if prev is not None:
                scale = max(abs(val), mp.mpf(1))
                if abs(val - prev) < rel_tol * scale:
                    break
            prev = val
            degree += 1
        for xk, wk in measure.masses:
            val = val + _num(f(xk), prec) * wk
        return val / measure.h0


# ---------------------------------------------------------------------------
# Jacobi operator and spectra
# ---------------------------------------------------------------------------

@dataclass
class JacobiOperator:
    """Truncated symmetric tridiagonal operator of an orthonormal family:
    J e_n = a_{n+1} e_{n+1} + b_n e_n + a_n e_{n-1}."""

    diag: np.ndarray      # b_0 .. b_{N-1}
    offdiag: np.ndarray   # a_1 .. a_{N-1}


def jacobi_operator(fp, N):
    """Assemble the orthonormal Jacobi data from the three-term recurrence.
    Requires A_{n-1} C_n > 0 for n = 1..N-1 (positive-definite case)."""
    bs = np.zeros(N)
    as_ = np.zeros(N - 1)
    for n in range(N):
        A, B, C = recurrence_coeffs(fp, n)
        bs[n] = float(_num(B, 64).val.real)
        if n >= 1:
            Am1 = recurrence_coeffs(fp, n - 1)[0]
            prod = float(_num(Am1 * C, 64).val.real)
            if prod <= 0:
                raise ParamDomain(
                    "recurrence is not positive definite at this index")
            as_[n - 1] = math.sqrt(prod)
    return JacobiOperator(diag=bs, offdiag=as_)


def jacobi_spectrum(fp, N):
    """Eigenvalues and first-row eigenvector weights of the order-N truncated
    Jacobi matrix; the pairs (eigenvalue, weight^2) approximate the
    orthogonality measure (Gauss quadrature nodes and weights)."""
    from scipy.linalg import eigh_tridiagonal

    J = jacobi_operator(fp, N)
    vals, vecs = eigh_tridiagonal(J.diag, J.offdiag)
    return vals, vecs[0, :] ** 2


def christoffel_darboux(fp, n, x, y):
    """Both sides of the Christoffel-Darboux identity for the orthonormal
    version of the family:

        sum_{m<=n} p_m(x) p_m(y)
          = a_{n+1} (p_{n+1}(x) p_n(y) - p_n(x) p_{n+1}(y)) / (x - y).

    Returns (lhs, rhs).  Raises ConfluentCase when x == y (numerically)."""
    prec = _prec_of(*(s for s in (x, y) if isinstance(s, NumScalar)))
    x = _num(x, prec)
    y = _num(y, prec)
    if abs(x - y) < mp.mpf(2) ** (-prec // 2):
        raise ConfluentCase("coinciding arguments; use the confluent form")

    def ortho_values(z):
        vals = [NumScalar(1, prec)]
        pm1 = NumScalar(0, prec)
        p0 = NumScalar(1, prec)
        for m in range(n + 1):
            A, B, C = (_num(s, prec) for s in recurrence_coeffs(fp, m))
            Am1 = _num(recurrence_coeffs(fp, m)[0], prec)
            # orthonormal step: a_{m+1} p_{m+1} = (z - b_m) p_m - a_m p_{m-1}
            Cn1 = _num(recurrence_coeffs(fp, m + 1)[2], prec)
            a_next = (A * Cn1).sqrt()
            a_cur = NumScalar(0, prec) if m == 0 else \
                (_num(recurrence_coeffs(fp, m - 1)[0], prec)
                 * _num(recurrence_coeffs(fp, m)[2], prec)).sqrt()
            p1 = ((z - B) * p0 - a_cur * pm1) / a_next
            vals.append(p1)
            pm1, p0 = p0, p1
        return vals

    px = ortho_values(x)
    py = ortho_values(y)
    lhs = NumScalar(0, prec)
    for m in range(n + 1):
        lhs = lhs + px[m] * py[m]
    An = _num(recurrence_coeffs(fp, n)[0], prec)
    Cn1 = _num(recurrence_coeffs(fp, n + 1)[2], prec)
    a_np1 = (An * Cn1).sqrt()
    rhs = a_np1 * (px[n + 1] * py[n] - px[n] * py[n + 1]) / (x - y)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Poisson kernels and q-Bessel
# ---------------------------------------------------------------------------

def poisson_kernel_qhermite(x, y, t, q, prec=DEFAULT_PRECISION_BITS):
    """Poisson kernel of the continuous q-Hermite polynomials:
    P_t(cos a, cos b | q) = (t^2; q)_inf / prod (t e^{+-ia+-ib}; q)_inf."""
    x, y, t, q = (_num(s, prec) for s in (x, y, t, q))
    with mp.workprec(prec):
        za = mp.exp(1j * mp.acos(x.val))
        zb = mp.exp(1j * mp.acos(y.val))
        factors = [za * zb, za / zb, zb / za, 1 / (za * zb)]
        num = qpochhammer(t * t, q, math.inf)
        den = NumScalar(1, prec)
        for fct in factors:
            den = den * qpochhammer(t * NumScalar(fct, prec), q, math.inf)
        return num / den


def poisson_kernel_asc(x, y, t, a, b, q, prec=DEFAULT_PRECISION_BITS,
                       method="w87"):
    """Poisson kernel of the Al-Salam-Chihara polynomials.

    method='w87' uses the closed product formula with a very well poised
    8-phi-7 series; method='series' sums t^k s_k(x) s_k(y) / (q, ab; q)_k
    directly (slowly convergent; for cross checks)."""
    x, y, t, a, b, q = (_num(s, prec) for s in (x, y, t, a, b, q))
    if method == "series":
        # generate s_k(x), s_k(y) through the recurrence: the terminating
        # hypergeometric sum cancels catastrophically at large degree
        total = NumScalar(0, prec)
        fam = FamilyParams("al-salam-chihara", (a, b), q)
        one = NumScalar(1, prec)
        px, pxm = one, None
        py, pym = one, None
        with mp.workprec(prec):
            eps = mp.mpf(2) ** (-prec)
            tk = one
            den = one
            k = 0
            while True:
                term = tk * px * py / den
                total = total + term
                if k > 8 and abs(term) < eps * max(abs(total), mp.mpf(1)):
                    return total
                if k > 400:
                    raise NonConvergent("Poisson kernel series stalled")
                A, B, C = recurrence_coeffs(fam, k)
                px, pxm = (x * px - B * px - (C * pxm if k else 0)) / A, px
                py, pym = (y * py - B * py - (C * pym if k else 0)) / A, py
                den = den * (1 - q ** (k + 1)) * (1 - a * b * q ** k)
                tk = tk * t
                k += 1
    from .qseries import w8_7

    with mp.workprec(prec):
        za = NumScalar(mp.exp(1j * mp.acos(x.val)), prec)
        zb = NumScalar(mp.exp(1j * mp.acos(y.val)), prec)
        inf = math.inf
        num = qpochhammer([a * t * za, a * t / za, b * t * zb, b * t / zb, t],
                          q, inf)
        den = qpochhammer([t * za * zb, t * za / zb, t * zb / za,
                           t / (za * zb), a * b * t], q, inf)
        w = w8_7(a * b * t / q, t, b * za, b / za, a * zb, a / zb, q, t)
        return num / den * w


def hahn_exton_bessel(nu, z, q, prec=DEFAULT_PRECISION_BITS):
    """Hahn-Exton q-Bessel function

        J_nu(z; q) = z^nu (q^{nu+1}; q)_inf / (q; q)_inf
                     * 1-phi-1(0; q^{nu+1}; q, q z^2),

    extended to negative integer order through
    J_{-n}(z; q) = (-1)^n q^{n/2} J_n(z q^{n/2}; q)."""
    if isinstance(nu, int) and nu < 0:
        n = -nu
        q_ = _num(q, prec)
        zshift = _num(z, prec) * q_ ** NumScalar(Fraction(n, 2), prec)
        sign = NumScalar((-1) ** n, prec)
        return sign * q_ ** NumScalar(Fraction(n, 2), prec) \
            * hahn_exton_bessel(n, zshift, q, prec)
    z = _num(z, prec)
    q_ = _num(q, prec)
    qnu1 = q_ ** (nu + 1) if isinstance(nu, int) else \
        q_ ** NumScalar(nu + 1, prec)
    znu = z ** nu if isinstance(nu, int) else z ** NumScalar(nu, prec)
    inf = math.inf
    pref = znu * qpochhammer(qnu1, q_, inf) / qpochhammer(q_, q_, inf)
    # 1-phi-1 with upper parameter 0
    with mp.workprec(prec):
        eps = mp.mpf(2) ** (-prec)
        total = NumScalar(1, prec)
        term = NumScalar(1, prec)
        arg = q_ * z * z
        qk = NumScalar(1, prec)
        k = 0
        while True:
            ratio = (-qk) * arg / ((1 - qnu1 * qk) * (1 - q_ * qk))
            term = term * ratio
            total = total + term
            qk = qk * q_
            k += 1
            if abs(term) < eps and abs(ratio) < 0.5:
                break
            if k > 10 ** 5:
                raise NonConvergent("q-Bessel series stalled")
    return pref * total


def _q_half_power(qv, shift):
    """q^(1/2 + shift) as a numeric scalar."""
    if isinstance(shift, (int, Fraction)):
        e = Fraction(1, 2) + Fraction(shift)
        return qv ** NumScalar(e, qv.prec)
    return qv ** NumScalar(0.5 + shift, qv.prec)


def aw_jacobi_params(alpha, beta, s, t, q):
    """Askey-Wilson parameter vector of the Jacobi-type shifted notation
    p^{(alpha,beta)}_n(x; s, t | q):

        (q^(1/2) t/s, q^(1/2+alpha) s/t, -q^(1/2)/(s t), -s t q^(1/2+beta))."""
    qv = _num(q, _precq(q))
    s = _num(s, qv.prec)
    t = _num(t, qv.prec)
    qh = _q_half_power(qv, 0)
    qha = _q_half_power(qv, alpha)
    qhb = _q_half_power(qv, beta)
    return (qh * t / s, qha * s / t, -qh / (s * t), -s * t * qhb)


def aw_laguerre_params(alpha, s, t, q):
    """Askey-Wilson parameter vector of the Laguerre-type shifted notation
    l^{(alpha)}_n(x; s, t | q):

        (q^(1/2+alpha) s/t, q^(1/2) t/s, -q^(1/2)/(s t), 0)."""
    qv = _num(q, _precq(q))
    s = _num(s, qv.prec)
    t = _num(t, qv.prec)
    qh = _q_half_power(qv, 0)
    qha = _q_half_power(qv, alpha)
    return (qha * s / t, qh * t / s, -qh / (s * t), NumScalar(0, qv.prec))
