"""Scalar domains used throughout the package.

Two kinds of scalars:

* ``ExactScalar`` -- a Laurent-rational function of v = q^(1/2) with rational
  coefficients.  Working in v rather than q keeps half-integer powers of q
  exact, which is needed because comultiplications and duality pairings
  produce q^(1/2) factors.  Elements are kept in a canonical reduced form so
  that equality is structural.

* ``NumScalar`` -- a complex number backed by mpmath with an explicit
  precision in bits.  Binary operations propagate the minimum precision of
  the operands and are carried out at that precision.

``num_context`` builds a factory for numeric scalars at a given precision.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

__all__ = [
    "ExactScalar",
    "NumScalar",
    "NumContext",
    "num_context",
    "exact_eval",
    "exact_equal",
    "DenominatorVanishes",
    "PrecisionTooLow",
    "DEFAULT_PRECISION_BITS",
    "MIN_PRECISION_BITS",
    "E_ZERO",
    "E_ONE",
    "E_V",
    "E_Q",
    "qpow",
    "vpow",
]

DEFAULT_PRECISION_BITS = 192
MIN_PRECISION_BITS = 64


class DenominatorVanishes(ZeroDivisionError):
    """Raised when an exact scalar is evaluated at a zero of its denominator,
    or when dividing by the exact zero scalar."""


class PrecisionTooLow(ValueError):
    """Raised when a numeric context is requested below the supported minimum."""


# ---------------------------------------------------------------------------
# polynomial helpers: dict {exponent: Fraction}, exponents are ints (possibly
# negative for Laurent data).  Zero coefficients are never stored.
# ---------------------------------------------------------------------------

def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pscale(a, c):
    if not c:
        return {}
    return {e: co * c for e, co in a.items()}


def _pshift(a, k):
    return {e + k: c for e, c in a.items()}


def _pval(a):
    """Lowest exponent present (valuation).  Undefined for zero."""
    return min(a)


def _pdeg(a):
    return max(a)


def _pdivmod(a, b):
    """Ordinary polynomial division (non-negative exponents, b != 0)."""
    r = dict(a)
    q = {}
    db = _pdeg(b)
    lb = b[db]
    while r and _pdeg(r) >= db:
        dr = _pdeg(r)
        c = r[dr] / lb
        q[dr - db] = c
        for e, co in b.items():
            s = r.get(e + dr - db, 0) - c * co
            if s:
                r[e + dr - db] = s
            else:
                r.pop(e + dr - db, None)
    return q, r


def _pmonic(a):
    if not a:
        return a
    lc = a[_pdeg(a)]
    if lc == 1:
        return a
    return {e: c / lc for e, c in a.items()}


def _pgcd(a, b):
    """Monic gcd of two ordinary polynomials over Q."""
    a, b = dict(a), dict(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _pmonic(a)


def _peval(a, x, prec):
    """Evaluate polynomial dict at mpmath value x (Horner on sorted exponents)."""
    with mp.workprec(prec):
        acc = mp.mpc(0)
        for e in sorted(a, reverse=True):
            acc += mp.mpc(a[e].numerator) / a[e].denominator * x ** e
        return acc


class ExactScalar:
    """Laurent-rational function of v = q^(1/2) over the rationals.

    Canonical form: numerator and denominator share no polynomial factor,
    the denominator has valuation zero (all powers of v pushed into the
    numerator) and its lowest-degree coefficient is 1.  Zero is represented
    by an empty numerator with denominator {0: 1}.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical=False):
        if isinstance(num, (int, Fraction)):
            num = {0: Fraction(num)} if num else {}
        if den is None:
            den = {0: Fraction(1)}
        elif isinstance(den, (int, Fraction)):
            if not den:
                raise DenominatorVanishes("zero denominator")
            den = {0: Fraction(den)}
        if _canonical:
            self.num = num
            self.den = den
            return
        num = {e: Fraction(c) for e, c in num.items() if c}
        den = {e: Fraction(c) for e, c in den.items() if c}
        if not den:
            raise DenominatorVanishes("zero denominator")
        if not num:
            self.num = {}
            self.den = {0: Fraction(1)}
            return
        # push powers of v out of the denominator into the numerator
        dv = _pval(den)
        den = _pshift(den, -dv)
        num = _pshift(num, -dv)
        # reduce by polynomial gcd (strip numerator valuation first)
        nv = _pval(num)
        n0 = _pshift(num, -nv)
        g = _pgcd(n0, den)
        if _pdeg(g) > 0:
            n0, _ = _pdivmod(n0, g)
            den, _ = _pdivmod(den, g)
        # normalize: lowest-degree denominator coefficient equals 1
        c0 = den[_pval(den)]
        if c0 != 1:
            den = {e: c / c0 for e, c in den.items()}
            n0 = {e: c / c0 for e, c in n0.items()}
        self.num = _pshift(n0, nv)
        self.den = den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_fraction(c):
        return ExactScalar(Fraction(c))

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar(x)
        return NotImplemented

    def __add__(self, other):
        o = ExactScalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return ExactScalar(_padd(self.num, o.num), dict(self.den))
        return ExactScalar(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(_pneg(self.num), dict(self.den), _canonical=True)

    def __sub__(self, other):
        o = ExactScalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = ExactScalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactScalar(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ExactScalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise DenominatorVanishes("division by exact zero")
        return ExactScalar(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = ExactScalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return E_ONE
        base = self
        if n < 0:
            if base.is_zero():
                raise DenominatorVanishes("inverting exact zero")
            base = ExactScalar(dict(base.den), dict(base.num))
            n = -n
        out = E_ONE
        acc = base
        while n:
            if n & 1:
                out = out * acc
            acc = acc * acc
            n >>= 1
        return out

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        o = ExactScalar._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    # -- conversion ---------------------------------------------------------

    def as_fraction(self):
        """Return the value as a Fraction if constant, else raise ValueError."""
        if not self.num:
            return Fraction(0)
        if set(self.num) == {0} and set(self.den) == {0}:
            return self.num[0] / self.den[0]
        raise ValueError("not a constant")

    def __repr__(self):
        def side(p):
            if not p:
                return "0"
            parts = []
            for e in sorted(p):
                c = p[e]
                if e == 0:
                    parts.append(f"{c}")
                elif e == 1:
                    parts.append(f"{c}*v")
                else:
                    parts.append(f"{c}*v^{e}")
            return " + ".join(parts)

        if self.den == {0: Fraction(1)}:
            return f"ExactScalar({side(self.num)})"
        return f"ExactScalar(({side(self.num)}) / ({side(self.den)}))"


E_ZERO = ExactScalar(0)
E_ONE = ExactScalar(1)
E_V = ExactScalar({1: Fraction(1)})
E_Q = ExactScalar({2: Fraction(1)})


def vpow(k):
    """v^k as an exact scalar (k any integer); v = q^(1/2)."""
    return ExactScalar({k: Fraction(1)})


def qpow(k):
    """q^k as an exact scalar (k may be a half-integer times 2 via vpow)."""
    return ExactScalar({2 * k: Fraction(1)})


# ---------------------------------------------------------------------------
# numeric scalars
# ---------------------------------------------------------------------------

class NumScalar:
    """Arbitrary-precision complex scalar with explicit precision in bits.

    Binary operations run at the minimum of the operand precisions and the
    result records that precision.
    """

    __slots__ = ("val", "prec")

    def __init__(self, value, prec=DEFAULT_PRECISION_BITS):
        self.prec = int(prec)
        if isinstance(value, NumScalar):
            self.prec = min(self.prec, value.prec)
            value = value.val
        with mp.workprec(self.prec):
            if isinstance(value, Fraction):
                self.val = mp.mpc(mp.mpf(value.numerator) / value.denominator)
            else:
                self.val = mp.mpc(value)

    # -- helpers ------------------------------------------------------------

    @staticmethod
    def _pair(a, b):
        if isinstance(b, NumScalar):
            return b.val, min(a.prec, b.prec)
        if isinstance(b, (int, float, complex, Fraction, mpmath.mpf, mpmath.mpc)):
            if isinstance(b, Fraction):
                with mp.workprec(a.prec):
                    b = mp.mpf(b.numerator) / b.denominator
            return b, a.prec
        return None, None

    def _make(self, val, prec):
        out = NumScalar.__new__(NumScalar)
        out.val = val
        out.prec = prec
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(self.val + v, p)

    __radd__ = __add__

    def __neg__(self):
        with mp.workprec(self.prec):
            return self._make(-self.val, self.prec)

    def __sub__(self, other):
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(self.val - v, p)

    def __rsub__(self, other):
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(v - self.val, p)

    def __mul__(self, other):
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(self.val * v, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(self.val / v, p)

    def __rtruediv__(self, other):
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(v / self.val, p)

    def __pow__(self, other):
        if isinstance(other, int):
            with mp.workprec(self.prec):
                return self._make(self.val ** other, self.prec)
        v, p = NumScalar._pair(self, other)
        if v is None and p is None:
            return NotImplemented
        with mp.workprec(p):
            return self._make(self.val ** v, p)

    def __abs__(self):
        with mp.workprec(self.prec):
            return abs(self.val)

    # -- structure ----------------------------------------------------------

    def conjugate(self):
        with mp.workprec(self.prec):
            return self._make(mp.conj(self.val), self.prec)

    def sqrt(self):
        with mp.workprec(self.prec):
            return self._make(mp.sqrt(self.val), self.prec)

    @property
    def real(self):
        return self.val.real

    @property
    def imag(self):
        return self.val.imag

    def is_zero(self):
        return self.val == 0

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        if isinstance(other, NumScalar):
            return self.val == other.val
        if isinstance(other, (int, float, complex, mpmath.mpf, mpmath.mpc)):
            return self.val == other
        return NotImplemented

    def __hash__(self):
        return hash(self.val)

    def __complex__(self):
        return complex(self.val)

    def __float__(self):
        if self.val.imag != 0:
            raise ValueError("non-real numeric scalar")
        return float(self.val.real)

    def __repr__(self):
        return f"NumScalar({self.val}, prec={self.prec})"


class NumContext:
    """Factory for numeric scalars at a fixed working precision."""

    def __init__(self, precision_bits=DEFAULT_PRECISION_BITS):
        precision_bits = int(precision_bits)
        if precision_bits < MIN_PRECISION_BITS:
            raise PrecisionTooLow(
                f"precision {precision_bits} bits is below the minimum "
                f"{MIN_PRECISION_BITS}"
            )
        self.prec = precision_bits

    def scalar(self, value):
        return NumScalar(value, self.prec)

    def __call__(self, value):
        return NumScalar(value, self.prec)

    def workprec(self):
        """Context manager setting mpmath's precision to this context's."""
        return mp.workprec(self.prec)

    def eps(self):
        with mp.workprec(self.prec):
            return mp.mpf(2) ** (-self.prec)

    def __repr__(self):
        return f"NumContext(precision_bits={self.prec})"


def num_context(precision_bits=DEFAULT_PRECISION_BITS):
    """Create a numeric scalar context.  Raises PrecisionTooLow below 64 bits."""
    return NumContext(precision_bits)


def exact_eval(x, q):
    """Evaluate an exact scalar at a numeric value of q.

    ``q`` may be a NumScalar, a NumContext together with a plain number is not
    needed: plain numbers are taken at the default precision.  Raises
    DenominatorVanishes when the denominator evaluates to zero.
    """
    if isinstance(x, NumScalar):
        return x
    if isinstance(x, (int, Fraction)):
        x = ExactScalar(x)
    if not isinstance(q, NumScalar):
        q = NumScalar(q)
    prec = q.prec
    with mp.workprec(prec):
        vv = mp.sqrt(q.val)
        nv = _peval(x.num, vv, prec)
        dv = _peval(x.den, vv, prec)
        if dv == 0:
            raise DenominatorVanishes("denominator vanishes at this q")
        out = NumScalar.__new__(NumScalar)
        out.val = nv / dv
        out.prec = prec
        return out


def exact_equal(a, b):
    """Structural equality of exact scalars (canonical forms compared)."""
    a = ExactScalar._coerce(a)
    b = ExactScalar._coerce(b)
    if a is NotImplemented or b is NotImplemented:
        raise TypeError("exact_equal expects exact scalars")
    return a == b
