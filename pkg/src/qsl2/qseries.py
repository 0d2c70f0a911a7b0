"""Basic hypergeometric machinery.

q-shifted factorials, Gaussian binomial coefficients, the generic r-phi-s
series with its termination conventions, very-well-poised series, the two
q-exponentials, Jackson q-integrals and the q-gamma function.

All routines are generic over the two scalar kinds from ``qsl2.scalar``:
exact Laurent-rational scalars (terminating data only) and arbitrary
precision numeric scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .scalar import (
    DEFAULT_PRECISION_BITS,
    E_ONE,
    ExactScalar,
    NumScalar,
)

__all__ = [
    "PhiSpec",
    "qpochhammer",
    "qbinomial",
    "phis",
    "w8_7",
    "qexp_small",
    "qexp_big",
    "qintegral",
    "qgamma",
    "DivergentProduct",
    "Divergent",
    "ConventionViolation",
    "OutOfRange",
    "NonConvergent",
    "PoleAt",
]

MAX_TERMS = 10 ** 6
TERMINATION_TOL = 1e-30
TERMINATION_MAX_N = 10 ** 4


class DivergentProduct(ValueError):
    """Infinite q-shifted factorial requested with |q| >= 1."""


class Divergent(ValueError):
    """Non-terminating basic hypergeometric series outside its domain."""


class ConventionViolation(ValueError):
    """Lower parameter q^-N reached without a terminating upper parameter
    q^-n with n <= N."""


class OutOfRange(ValueError):
    """Gaussian binomial coefficient with indices outside 0 <= k <= n."""


class NonConvergent(ValueError):
    """Series or q-integral failed to converge within the term budget."""


class PoleAt(ValueError):
    """q-gamma evaluated at a non-positive integer."""


def _is_exact(x):
    return isinstance(x, (ExactScalar, int, Fraction))


def _one_like(exact, prec):
    return E_ONE if exact else NumScalar(1, prec)


def _prec_of(*xs):
    precs = [x.prec for x in xs if isinstance(x, NumScalar)]
    return min(precs) if precs else DEFAULT_PRECISION_BITS


def _as_scalar(x, prec):
    """Coerce x into one of the two scalar kinds."""
    if isinstance(x, (ExactScalar, NumScalar)):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactScalar(x)
    return NumScalar(x, prec)


def _abs_num(x):
    if isinstance(x, NumScalar):
        return abs(x)
    raise TypeError("numeric scalar expected")


def _qpow_index(a, q):
    """If a == q^-n exactly (exact kind) or within TERMINATION_TOL (numeric),
    return n >= 0, else None."""
    if isinstance(a, ExactScalar):
        # a must be a pure monomial c*v^e with c == 1 and e <= 0 even
        if isinstance(q, ExactScalar) and len(a.num) == 1 and a.den == {0: Fraction(1)}:
            (e,), (c,) = zip(*a.num.items())
            if c == 1 and e <= 0:
                # q = v^2 in the standard embedding; verify a * q^n == 1
                n, r = divmod(-e, 2)
                if r == 0 and a * q ** n == E_ONE:
                    return n
        return None
    # numeric
    qa = abs(NumScalar(q) if not isinstance(q, NumScalar) else q)
    aa = abs(a)
    if aa <= 0 or qa <= 0 or qa >= 1:
        return None
    n = int(mp.nint(-mp.log(aa) / mp.log(qa)))
    if 0 <= n <= TERMINATION_MAX_N:
        qn = (NumScalar(q) if not isinstance(q, NumScalar) else q) ** (-n)
        if abs(a - qn) < TERMINATION_TOL:
            return n
    return None


def qpochhammer(a, q, n):
    """q-shifted factorial (a; q)_n.

    ``a`` may be a single scalar or a sequence (product over entries).
    ``n`` may be a non-negative integer, a negative integer (standard
    extension (a;q)_{-m} = 1 / Π_{k=1..m} (1 - a q^{-k})), or ``math.inf``
    for the infinite product (numeric q with |q| < 1 only).
    """
    if isinstance(a, (list, tuple)):
        prec = _prec_of(*[x for x in a if isinstance(x, NumScalar)],
                        *( [q] if isinstance(q, NumScalar) else [] ))
        out = _one_like(all(_is_exact(x) for x in a) and _is_exact(q), prec)
        for ai in a:
            out = out * qpochhammer(ai, q, n)
        return out

    prec = _prec_of(*(x for x in (a, q) if isinstance(x, NumScalar)))
    exact = _is_exact(a) and _is_exact(q)
    a = _as_scalar(a, prec)
    q = _as_scalar(q, prec)
    if exact != (_is_exact(a) and _is_exact(q)):
        exact = False

    if n is math.inf or n == float("inf"):
        if exact:
            raise TypeError("infinite q-shifted factorial needs numeric scalars")
        if abs(q) >= 1:
            raise DivergentProduct("infinite product requires |q| < 1")
        with mp.workprec(prec):
            eps = mp.mpf(2) ** (-prec - 8)
            out = NumScalar(1, prec)
            qk = NumScalar(1, prec)
            for _ in range(MAX_TERMS):
                t = a * qk
                out = out * (1 - t)
                if abs(t) < eps:
                    return out
                qk = qk * q
            raise NonConvergent("infinite product did not converge")

    n = int(n)
    one = _one_like(exact, prec)
    out = one
    if n >= 0:
        qk = one
        for _ in range(n):
            out = out * (one - a * qk)
            qk = qk * q
        return out
    qinv = one / q
    qk = one
    for _ in range(-n):
        qk = qk * qinv
        out = out * (one - a * qk)
    return one / out


def qbinomial(n, k, q):
    """Gaussian binomial coefficient [n; k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k}).

    Raises OutOfRange unless 0 <= k <= n.
    """
    if not (isinstance(n, int) and isinstance(k, int)):
        raise OutOfRange("integer indices required")
    if k < 0 or n < 0 or k > n:
        raise OutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    return qpochhammer(q, q, n) / (qpochhammer(q, q, k) * qpochhammer(q, q, n - k))


@dataclass
class PhiSpec:
    """Data of a basic hypergeometric series r-phi-s."""

    upper: tuple
    lower: tuple
    q: object
    z: object


def phis(upper, lower=None, q=None, z=None):
    """Basic hypergeometric series

        sum_k  (a_1..a_r; q)_k / (b_1..b_s; q)_k
               * ((-1)^k q^(k(k-1)/2))^(1+s-r) * z^k / (q; q)_k.

    Accepts either a PhiSpec or (upper, lower, q, z).  A series is
    terminating when some upper parameter equals q^-n; when several do, the
    smallest n applies.  A lower parameter q^-N is only admitted when the
    series terminates at n <= N (else ConventionViolation).  Non-terminating
    series require numeric scalars; convergence demands r <= s + 1 and, when
    r == s + 1, |z| < 1 (else Divergent).  Terms are summed until the tail is
    certified below 2^-precision by a geometric bound.
    """
    if isinstance(upper, PhiSpec):
        spec = upper
        upper, lower, q, z = spec.upper, spec.lower, spec.q, spec.z
    upper = tuple(upper)
    lower = tuple(lower)

    nums = [x for x in (*upper, *lower, q, z) if isinstance(x, NumScalar)]
    prec = _prec_of(*nums)
    exact = all(_is_exact(x) for x in (*upper, *lower, q, z))
    upper = tuple(_as_scalar(a, prec) for a in upper)
    lower = tuple(_as_scalar(b, prec) for b in lower)
    q = _as_scalar(q, prec)
    z = _as_scalar(z, prec)

    r, s = len(upper), len(lower)
    gauss_pow = 1 + s - r  # exponent of (-1)^k q^(k(k-1)/2)

    term_ns = [m for m in (_qpow_index(a, q) for a in upper) if m is not None]
    n_term = min(term_ns) if term_ns else None
    low_ns = [m for m in (_qpow_index(b, q) for b in lower) if m is not None]
    n_low = min(low_ns) if low_ns else None
    if n_low is not None and (n_term is None or n_term > n_low):
        raise ConventionViolation(
            f"lower parameter q^-{n_low} without terminating upper q^-n, n <= {n_low}"
        )

    if n_term is None:
        if exact:
            raise TypeError("non-terminating series needs numeric scalars")
        if r > s + 1:
            raise Divergent(f"{r}-phi-{s} with r > s+1 diverges unless terminating")
        if r == s + 1 and abs(z) >= 1:
            raise Divergent("argument outside radius of convergence")

    one = _one_like(exact, prec)
    total = one
    term = one
    qk = one  # q^k
    k = 0
    if exact:
        eps = None
    else:
        with mp.workprec(prec):
            eps = mp.mpf(2) ** (-prec)
    last_rho = 1.0

    while True:
        if n_term is not None and k == n_term:
            return total
        if k >= MAX_TERMS:
            raise NonConvergent("series did not converge within the term budget")
        num = one
        for a in upper:
            num = num * (one - a * qk)
        den = one
        for b in lower:
            den = den * (one - b * qk)
        den = den * (one - qk * q)  # the (q; q)_k factor contributes (1 - q^(k+1))
        ratio = num / den * z
        if gauss_pow:
            extra = -qk if gauss_pow > 0 else (-one) / qk
            for _ in range(abs(gauss_pow)):
                ratio = ratio * extra
        if not exact and num.is_zero():
            return total
        term = term * ratio
        total = total + term
        qk = qk * q
        k += 1
        if n_term is None:
            last_rho = float(abs(ratio))
            at = abs(term)
            # geometric tail certificate: once the running ratio is clearly
            # below one, bound the tail by a geometric series
            if at < eps and last_rho < 0.995 and at * last_rho / (1 - last_rho) < eps:
                return total


def w8_7(a, b, c, d, e, f, q, z):
    """Very well poised basic hypergeometric series

        W(a; b,c,d,e,f; q, z)
          = 8-phi-7 with upper (a, q sqrt(a), -q sqrt(a), b, c, d, e, f)
            and lower (sqrt(a), -sqrt(a), qa/b, qa/c, qa/d, qa/e, qa/f).
    """
    prec = _prec_of(*(x for x in (a, b, c, d, e, f, q, z)
                      if isinstance(x, NumScalar)))
    a, b, c, d, e, f, q, z = (_num(x, prec) for x in (a, b, c, d, e, f, q, z))
    sa = a.sqrt()
    upper = (a, q * sa, -(q * sa), b, c, d, e, f)
    lower = (sa, -sa, q * a / b, q * a / c, q * a / d, q * a / e, q * a / f)
    return phis(upper, lower, q, z)


def _num(x, prec):
    """Force numeric scalar."""
    if isinstance(x, NumScalar):
        return x
    if isinstance(x, ExactScalar):
        return _to_num(x, prec)
    return NumScalar(x, prec)


def _to_num(x, prec):
    # exact scalars only make sense numerically once q is fixed; a constant
    # exact scalar converts directly.
    return NumScalar(x.as_fraction(), prec)


def qexp_small(z, q):
    """q-exponential e_q(z) = 1/(z; q)_infinity, defined for |z| < 1."""
    prec = _prec_of(*(x for x in (z, q) if isinstance(x, NumScalar)))
    z, q = _num(z, prec), _num(q, prec)
    if abs(z) >= 1:
        raise Divergent("e_q(z) requires |z| < 1")
    return NumScalar(1, prec) / qpochhammer(z, q, math.inf)


def qexp_big(z, q):
    """q-exponential E_q(z) = (-z; q)_infinity (entire)."""
    prec = _prec_of(*(x for x in (z, q) if isinstance(x, NumScalar)))
    z, q = _num(z, prec), _num(q, prec)
    return qpochhammer(-z, q, math.inf)


def qintegral(f, a, b, q, prec=DEFAULT_PRECISION_BITS):
    """Jackson q-integral of f over [a, b]:

        int_0^b f(x) d_q x = (1-q) b sum_{k>=0} f(b q^k) q^k,
        int_a^b = int_0^b - int_0^a.

    Endpoints may be negative.  Raises NonConvergent when the tail does not
    settle within the term budget.
    """
    q = _num(q, prec)

    def half(c):
        if c == 0:
            return NumScalar(0, prec)
        c = _num(c, prec)
        with mp.workprec(prec):
            eps = mp.mpf(2) ** (-prec)
        total = NumScalar(0, prec)
        qk = NumScalar(1, prec)
        stable = 0
        for _ in range(MAX_TERMS):
            t = _num(f(c * qk), prec) * qk
            total = total + t
            qk = qk * q
            scale = abs(total) if abs(total) > 1 else mp.mpf(1)
            if abs(t) < eps * scale:
                stable += 1
                if stable >= 4:
                    return (1 - q) * c * total
            else:
                stable = 0
        raise NonConvergent("q-integral tail did not settle")

    return half(b) - half(a)


def qgamma(x, q, prec=DEFAULT_PRECISION_BITS):
    """q-gamma function Gamma_q(x) = (q;q)_inf (1-q)^(1-x) / (q^x; q)_inf.

    Raises PoleAt for x a non-positive integer.
    """
    q = _num(q, prec)
    x = _num(x, prec)
    with mp.workprec(prec):
        xr = x.val
        if abs(xr.imag) < 1e-30:
            n = mp.nint(xr.real)
            if n <= 0 and abs(xr.real - n) < 1e-30:
                raise PoleAt(f"q-gamma pole at x = {int(n)}")
        qx = q ** x
        num = qpochhammer(q, q, math.inf)
        den = qpochhammer(qx, q, math.inf)
        pw = (1 - q) ** (1 - x)
        return num * pw / den
