"""Concrete representations of the quantum SL(2) algebras.

Finite-dimensional spin representations, one-dimensional evaluation maps,
truncated infinite-dimensional representations, eigenvector bases of the
twisted primitive elements, generalized matrix elements, Clebsch-Gordan
coefficients for the positive discrete series, and a trace formula for the
invariant functional.
"""

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import DEFAULT_PRECISION_BITS, ExactScalar, NumScalar
from .qseries import qbinomial, qpochhammer
from .orthopoly import FamilyParams, eval_poly
from .qalgebra import (
    AlgebraElement,
    _word,
    corner_generators,
    haar,
    monomial,
    normal_form,
    spherical_rho,
    star,
    unit,
)


class IndexOutOfRange(ValueError):
    """Representation index outside the admissible range."""


class DomainError(ValueError):
    """Parameter outside the domain of the construction."""


class TruncationWarning(UserWarning):
    """Boundary contributions of a truncated operator exceed the target
    accuracy."""


def _prec_of(q):
    return q.prec if isinstance(q, NumScalar) else DEFAULT_PRECISION_BITS


def _num(x, prec):
    if isinstance(x, NumScalar):
        return x
    if isinstance(x, ExactScalar):
        raise DomainError("numeric scalar required")
    return NumScalar(x, prec)


def _half(x):
    """Coerce a spin-type index to an exact half-integer Fraction."""
    fr = Fraction(x).limit_denominator(2) if not isinstance(x, Fraction) \
        else x
    if fr * 2 != int(fr * 2):
        raise IndexOutOfRange(f"{x} is not a half-integer")
    return fr


def _qpow(q, e):
    """q**e for integer, Fraction or scalar exponents."""
    if isinstance(e, NumScalar):
        return q ** e
    if isinstance(e, Fraction) and e.denominator == 1:
        e = int(e)
    if isinstance(e, int):
        return q ** e
    return q ** NumScalar(e, _prec_of(q))


def _ipow(k, prec):
    """i**k for integer k, as a numeric scalar."""
    k = int(k) % 4
    vals = (1, 1j, -1, -1j)
    return NumScalar(vals[k], prec)


# ---------------------------------------------------------------------------
# small dense matrices over scalars
# ---------------------------------------------------------------------------

def matrix_to_csv(m, fh):
    """Dump a matrix of scalars as CSV rows ``row,col,re,im``."""
    import csv
    import mpmath

    w = csv.writer(fh)
    w.writerow(("row", "col", "re", "im"))
    for r, row in enumerate(m):
        for c, e in enumerate(row):
            with mpmath.mp.workprec(getattr(e, "prec",
                                            DEFAULT_PRECISION_BITS)):
                v = mpmath.mpmathify(e.val if isinstance(e, NumScalar)
                                     else complex(e))
                dps = mpmath.mp.dps
                w.writerow((r, c, mpmath.nstr(mpmath.re(v), dps),
                            mpmath.nstr(mpmath.im(v), dps)))


def mat_mul(m1, m2):
    rows, inner, cols = len(m1), len(m2), len(m2[0])
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            tot = m1[r][0] * m2[0][c]
            for t in range(1, inner):
                tot = tot + m1[r][t] * m2[t][c]
            row.append(tot)
        out.append(tuple(row))
    return tuple(out)


def mat_sub(m1, m2):
    return tuple(tuple(a - b for a, b in zip(r1, r2))
                 for r1, r2 in zip(m1, m2))


def mat_max_abs(m):
    return max(float(abs(e)) for row in m for e in row)


# ---------------------------------------------------------------------------
# spin representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpinRep:
    """Finite-dimensional irreducible representation of spin l.

    ``variant`` is "unitary" (numeric entries, orthonormal weight basis
    e_{-l}..e_l) or "rescaled-exact" (entries Laurent in v = q^{1/2},
    basis e_0..e_{2l} with the raising generator acting as a plain shift).
    """

    l: Fraction
    variant: str
    q: object
    matrices: dict = field(compare=False)

    @property
    def dim(self):
        return int(2 * self.l) + 1


def spin_rep(l, variant="unitary", q=None):
    l = _half(l)
    if l < 0:
        raise IndexOutOfRange("spin must be non-negative")
    N = int(2 * l)
    if variant == "unitary":
        if q is None:
            raise DomainError("the unitary variant needs a numeric q")
        prec = _prec_of(q)
        zero = NumScalar(0, prec)
        ns = [l - N + k for k in range(N + 1)]  # n = -l .. l
        A = [[zero] * (N + 1) for _ in range(N + 1)]
        D = [[zero] * (N + 1) for _ in range(N + 1)]
        B = [[zero] * (N + 1) for _ in range(N + 1)]
        C = [[zero] * (N + 1) for _ in range(N + 1)]
        den = 1 / q - q
        for k, n in enumerate(ns):
            A[k][k] = _qpow(q, -n)
            D[k][k] = _qpow(q, n)
            if k > 0:
                B[k - 1][k] = ((_qpow(q, -l + n - 1) - _qpow(q, l - n + 1))
                               * (_qpow(q, -l - n) - _qpow(q, l + n))
                               ).sqrt() / den
            if k < N:
                C[k + 1][k] = ((_qpow(q, -l + n) - _qpow(q, l - n))
                               * (_qpow(q, -l - n - 1) - _qpow(q, l + n + 1))
                               ).sqrt() / den
        mats = {"A": A, "B": B, "C": C, "D": D}
    elif variant == "rescaled-exact":
        v = ExactScalar({1: Fraction(1)})
        qq = v * v
        zero = ExactScalar(0)
        one = ExactScalar(1)
        A = [[zero] * (N + 1) for _ in range(N + 1)]
        D = [[zero] * (N + 1) for _ in range(N + 1)]
        B = [[zero] * (N + 1) for _ in range(N + 1)]
        C = [[zero] * (N + 1) for _ in range(N + 1)]
        den = (qq - 1 / qq) ** 2
        for k in range(N + 1):
            A[k][k] = v ** (N - 2 * k)
            D[k][k] = v ** (2 * k - N)
            if k < N:
                C[k + 1][k] = one
            if k > 0:
                mu = (qq ** (N + 1) * (one - qq ** (-2 * k))
                      + qq ** (-1 - N) * (one - qq ** (2 * k))) / den
                B[k - 1][k] = mu
        mats = {"A": A, "B": B, "C": C, "D": D}
    else:
        raise DomainError(f"unknown variant {variant!r}")
    mats = {g: tuple(tuple(r) for r in m) for g, m in mats.items()}
    return SpinRep(l, variant, q, mats)


# ---------------------------------------------------------------------------
# matrix elements as function-algebra elements
# ---------------------------------------------------------------------------

def _little_qjacobi_terms(k, alpha, beta, q):
    """Coefficients u_j of the terminating series
    p_k^{(alpha,beta)}(x; q^2) = sum_j u_j (q^2 x)^j  (base q^2)."""
    q2 = q * q
    one = NumScalar(1, _prec_of(q))
    out = []
    num1, num2, den1, den2 = one, one, one, one
    for j in range(k + 1):
        out.append(num1 * num2 / (den1 * den2))
        num1 = num1 * (one - q2 ** (-k) * q2 ** j)
        num2 = num2 * (one - q2 ** (k + alpha + beta + 1) * q2 ** j)
        den1 = den1 * (one - q2 ** (alpha + 1) * q2 ** j)
        den2 = den2 * (one - q2 ** (j + 1))
    return out


def _c_norm(l, n, m, q):
    """c^l_{n,m} = ([l-m, n-m]_{q^2} [l+n, n-m]_{q^2})^{1/2}
    q^{-(n-m)(l-n)}."""
    q2 = q * q
    b1 = qbinomial(int(l - m), int(n - m), q2)
    b2 = qbinomial(int(l + n), int(n - m), q2)
    return (b1 * b2).sqrt() * q ** int(-(n - m) * (l - n))


def matrix_element(l, n, m, q):
    """The matrix element t^l_{n,m} as an element of the function algebra,
    through its normal form: a corner monomial times a little q-Jacobi
    polynomial in the commuting product of the off-diagonal generators."""
    l, n, m = _half(l), _half(n), _half(m)
    if not (abs(n) <= l and abs(m) <= l and (l - n).denominator == 1
            and (l - m).denominator == 1):
        raise IndexOutOfRange(f"invalid indices (l, n, m) = ({l}, {n}, {m})")
    prec = _prec_of(q)
    if n >= m >= -n:
        deg, al, be = int(l - n), int(n - m), int(n + m)
        const = _c_norm(l, n, m, q)
        head = [("delta", int(n + m)), ("gamma", int(n - m))]
        xscale = -(1 / q)
    elif m >= n >= -m:
        deg, al, be = int(l - m), int(m - n), int(m + n)
        const = _c_norm(l, m, n, q)
        head = [("delta", int(n + m)), ("beta", int(m - n))]
        xscale = -(1 / q)
    elif -n >= m >= n:
        deg, al, be = int(l + n), int(m - n), int(-n - m)
        const = _c_norm(l, -n, -m, q)
        head = [("beta", int(m - n)), ("alpha", int(-m - n))]
        xscale = -q ** int(2 * m + 2 * n - 1)
    else:  # -m >= n >= m
        deg, al, be = int(l + m), int(n - m), int(-n - m)
        const = _c_norm(l, -m, -n, q)
        head = [("gamma", int(n - m)), ("alpha", int(-m - n))]
        xscale = -q ** int(2 * m + 2 * n - 1)
    terms = _little_qjacobi_terms(deg, al, be, q)
    q2 = q * q
    out = unit("Aq-SL2", q).scale(0)
    for j, u in enumerate(terms):
        word = [(g, p) for g, p in head + [("gamma", j), ("beta", j)] if p]
        piece = normal_form("Aq-SL2", word, q)
        out = out + piece.scale(u * (q2 * xscale) ** j)
    return out.scale(const)


def schur_check(l, k, m, n, i, j, q):
    """Pair (computed, closed-form) for the orthogonality value
    h((t^l_{nm})* t^k_{ij})."""
    l, k = _half(l), _half(k)
    m, n, i, j = _half(m), _half(n), _half(i), _half(j)
    x = star(matrix_element(l, n, m, q), "SU2") * matrix_element(k, i, j, q)
    computed = haar(x)
    prec = _prec_of(q)
    if l == k and m == j and i == n:
        closed = _qpow(q, 2 * (l - n)) * (1 - q * q) \
            / (1 - q ** int(4 * l + 2))
    else:
        closed = NumScalar(0, prec)
    return computed, closed


# ---------------------------------------------------------------------------
# one-dimensional evaluation maps
# ---------------------------------------------------------------------------

def tau_lambda(x, lam):
    """One-dimensional representation: alpha -> lam, delta -> 1/lam,
    beta, gamma -> 0.  On the PBW basis this reads the coefficient of the
    pure diagonal monomials."""
    if x.alg != "Aq-SL2":
        raise DomainError("tau_lambda acts on the SU(2) function algebra")
    prec = x.prec
    lam = _num(lam, prec)
    tot = NumScalar(0, prec)
    for (la, mm, nn), c in x.terms.items():
        if mm == 0 and nn == 0:
            tot = tot + c * lam ** (-la)
    return tot


def pi_theta(x, theta):
    """One-dimensional *-representation pi_theta = tau_{e^{i theta}}."""
    import mpmath
    prec = x.prec
    with mpmath.mp.workprec(prec):
        lam = NumScalar(mpmath.mp.expj(theta), prec)
    return tau_lambda(x, lam)


# ---------------------------------------------------------------------------
# truncated infinite-dimensional representations
# ---------------------------------------------------------------------------

class TruncatedRep:
    """A representation on l^2 restricted to a finite index window.

    ``gen_action(gen, n)`` returns (target_index, coefficient) for basis
    vector e_n, with indices in the stored window; shifts that leave the
    window are dropped (the boundary band).  ``bandwidth`` is the largest
    index shift any generator produces.
    """

    def __init__(self, family, alg, N, q, actions, bandwidth, offset=0):
        self.family = family
        self.alg = alg
        self.N = N
        self.q = q
        self.prec = _prec_of(q)
        self._actions = actions
        self.bandwidth = bandwidth
        self.offset = offset
        self.size = N + 1 if offset == 0 else 2 * N + 1

    def gen_action(self, gen, n):
        return self._actions[gen](n)

    def apply_gen(self, gen, vec):
        out = [NumScalar(0, self.prec)] * self.size
        act = self._actions[gen]
        for idx, c in enumerate(vec):
            if float(abs(c)) == 0.0:
                continue
            tgt, coeff = act(idx - self.offset)
            tgt += self.offset
            if 0 <= tgt < self.size:
                out[tgt] = out[tgt] + c * coeff
        return out

    def apply_element(self, elt, vec):
        if elt.alg != self.alg:
            raise DomainError(
                f"{self.family} represents {self.alg}, not {elt.alg}")
        out = [NumScalar(0, self.prec)] * self.size
        for key, c in elt.terms.items():
            cur = list(vec)
            for gen, power in reversed(_word(self.alg, key)):
                for _ in range(power):
                    cur = self.apply_gen(gen, cur)
            for t in range(self.size):
                out[t] = out[t] + cur[t] * c
        return out

    def basis_vector(self, n):
        vec = [NumScalar(0, self.prec)] * self.size
        vec[n + self.offset] = NumScalar(1, self.prec)
        return vec

    def matrix(self, gen):
        cols = [self.apply_gen(gen, self.basis_vector(n - self.offset))
                for n in range(self.size)]
        return tuple(tuple(cols[c][r] for c in range(self.size))
                     for r in range(self.size))

    def matrix_of(self, elt):
        cols = [self.apply_element(elt, self.basis_vector(n - self.offset))
                for n in range(self.size)]
        return tuple(tuple(cols[c][r] for c in range(self.size))
                     for r in range(self.size))


def pi_inf(theta, N, q):
    """Truncation of the infinite-dimensional *-representation of the
    function algebra: alpha lowers, delta raises, beta and gamma are
    diagonal with phases e^{-+ i theta}."""
    if N < 4:
        raise DomainError("truncation size must be at least 4")
    import mpmath
    prec = _prec_of(q)
    with mpmath.mp.workprec(prec):
        ph = NumScalar(mpmath.mp.expj(theta), prec)
    one = NumScalar(1, prec)
    q2 = q * q

    actions = {
        "alpha": lambda n: (n - 1, (one - q2 ** n).sqrt()),
        "gamma": lambda n: (n, ph * q ** n),
        "delta": lambda n: (n + 1, (one - q2 ** (n + 1)).sqrt()),
        "beta": lambda n: (n, -q ** (n + 1) / ph),
    }
    return TruncatedRep("pi-inf", "Aq-SL2", N, q, actions, 1)


def pi_k(k, N, q):
    """Truncation of the positive discrete series representation of the
    su(1,1) real form, lowest weight parameter k > 0."""
    if k <= 0:
        raise DomainError("the positive discrete series needs k > 0")
    if N < 4:
        raise DomainError("truncation size must be at least 4")
    prec = _prec_of(q)
    one = NumScalar(1, prec)
    den = q - 1 / q
    q2 = q * q

    def act_C(n):
        c = _qpow(q, Fraction(1, 2) - k - n) \
            * ((one - q2 ** n) * (one - _qpow(q2, 2 * k + n - 1))).sqrt() \
            / den
        return n - 1, c

    def act_B(n):
        c = _qpow(q, -Fraction(1, 2) - k - n) \
            * ((one - q2 ** (n + 1)) * (one - _qpow(q2, 2 * k + n))).sqrt() \
            / (-den)
        return n + 1, c

    actions = {
        "A": lambda n: (n, _qpow(q, k + n)),
        "D": lambda n: (n, _qpow(q, -k - n)),
        "C": act_C,
        "B": act_B,
    }
    return TruncatedRep("pi-k", "Uq-sl2", N, q, actions, 1)


def t_R(R, N, q):
    """Truncation (symmetric window -N..N of the integer lattice) of the
    principal representation of the plane-motions enveloping algebra."""
    if N < 4:
        raise DomainError("truncation size must be at least 4")
    prec = _prec_of(q)
    R = _num(R, prec)
    actions = {
        "A": lambda n: (n, q ** n),
        "D": lambda n: (n, q ** (-n)),
        "B": lambda n: (n + 1, R),
        "C": lambda n: (n - 1, R),
    }
    return TruncatedRep("t-R", "Uq-m2", N, q, actions, 1, offset=N)


# ---------------------------------------------------------------------------
# eigenvector bases of the twisted primitive elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenBasis:
    """Eigenvalues and coefficient columns of a self-adjoint operator.

    ``coeffs[j][n]`` is the n-th coefficient of the eigenvector for
    ``eigenvalues[j]``; the labels of both indices are given separately.
    """

    eigenvalues: tuple
    coeffs: tuple
    labels: tuple


def twisted_eigenvalue(j, sigma, q):
    """lambda_j(sigma) = (q^{-2j-s} - q^{s+2j} + q^s - q^{-s})/(q - 1/q);
    for sigma = inf the rescaled limit 1 - q^{-2j} (eigenvalue of D - A)."""
    prec = _prec_of(q)
    if sigma == math.inf:
        return 1 - _qpow(q, -2 * j)
    qs = _qpow(q, sigma)
    qj = _qpow(q, 2 * j)
    return (1 / (qs * qj) - qs * qj + qs - 1 / qs) / (q - 1 / q)


def _cfactor(l, j, sigma, q):
    """C^{l,j}(sigma): the positive normalization of the eigenvector
    column."""
    prec = _prec_of(q)
    q2 = q * q
    qs = _qpow(q, sigma)
    b = qbinomial(int(2 * l), int(l - j), q2)
    t1 = (1 + _qpow(q, -4 * j) / (qs * qs)) / (1 + 1 / (qs * qs))
    t2 = qpochhammer(-q2 / (qs * qs), q2, int(l - j)) \
        * qpochhammer(-q2 * qs * qs, q2, int(l + j))
    return _qpow(q, l + j) * b.sqrt() * t1.sqrt() / t2.sqrt()


def eigenbasis_dualqkrawtchouk(l, sigma, q):
    """Orthonormal eigenvectors of the self-adjoint spin-l image of the
    twisted primitive element times the group-like generator; coefficients
    are dual q-Krawtchouk polynomials on the lattice j = -l..l."""
    l = _half(l)
    prec = _prec_of(q)
    q2 = q * q
    N = int(2 * l)
    sigma = NumScalar(sigma, prec) if not isinstance(sigma, NumScalar) \
        else sigma
    qs = q ** sigma
    fp = FamilyParams("dual-q-krawtchouk", (qs * qs, N), q2)
    labels = tuple(l - N + t for t in range(N + 1))  # -l .. l
    eigenvalues = []
    cols = []
    for j in labels:
        eigenvalues.append(twisted_eigenvalue(j, sigma, q))
        y = _qpow(q, 2 * j - 2 * l) - _qpow(q, -2 * j - 2 * l) / (qs * qs)
        cf = _cfactor(l, j, sigma, q)
        col = []
        for n in labels:
            d = int(l - n)
            w = (qpochhammer(_qpow(q, 4 * l), 1 / q2, d)
                 / qpochhammer(q2, q2, d)).sqrt()
            val = cf * _ipow(n - l, prec) * qs ** d \
                * _qpow(q, Fraction(d * (d - 1), 2)) * w \
                * eval_poly(fp, d, y)
            col.append(val)
        cols.append(tuple(col))
    return EigenBasis(tuple(eigenvalues), tuple(cols), labels)


# ---------------------------------------------------------------------------
# generalized matrix elements
# ---------------------------------------------------------------------------

def _elt_poly(coeff_terms, factors, base):
    """sum_k coeff_terms[k] * prod_{t<k} factors(t) in the algebra, where
    factors(t) returns an algebra element and ``base`` is the unit."""
    out = base.scale(0)
    prod = base
    for k, c in enumerate(coeff_terms):
        out = out + prod.scale(c)
        if k + 1 < len(coeff_terms):
            prod = prod * factors(k)
    return out


def _bigqjacobi_at_element(n, alpha, beta, c, d, q2, x):
    """Big q-Jacobi polynomial P_n^{(alpha,beta)}(x; c, d; q2) with x an
    algebra element (terminating series; the x-dependence enters through a
    q-shifted factorial, expanded as a product of affine factors)."""
    one_e = unit(x.alg, x.q)
    prec = x.prec
    one = NumScalar(1, prec)
    qa1 = _qpow(q2, alpha + 1)
    terms = []
    t = one
    for k in range(n + 1):
        terms.append(t)
        t = t * (one - q2 ** (-n) * q2 ** k) \
            * (one - _qpow(q2, n + alpha + beta + 1) * q2 ** k) * q2 \
            / ((one - qa1 * q2 ** k) * (one + qa1 * d / c * q2 ** k)
               * (one - q2 ** (k + 1)))
    return _elt_poly(terms,
                     lambda k: one_e - x.scale(qa1 * q2 ** k / c), one_e)


def _aw_at_element(n, a, b, c, d, q, x):
    """Askey-Wilson polynomial p_n(x; a, b, c, d | q) with x an algebra
    element, through the symmetric-product form of the 4-phi-3 series."""
    one_e = unit(x.alg, x.q)
    prec = x.prec
    one = NumScalar(1, prec)
    pref = a ** (-n) * qpochhammer([a * b, a * c, a * d], q, n)
    abcd = a * b * c * d
    terms = []
    t = one
    for k in range(n + 1):
        terms.append(t)
        t = t * (one - q ** (-n) * q ** k) * (one - abcd * q ** (n - 1 + k)) \
            * q / ((one - a * b * q ** k) * (one - a * c * q ** k)
                   * (one - a * d * q ** k) * (one - q ** (k + 1)))
    poly = _elt_poly(
        terms,
        lambda k: one_e.scale(one + a * a * q ** (2 * k))
        - x.scale(2 * a * q ** k),
        one_e)
    return poly.scale(pref)


def _limit_c(l, n, sigma, q):
    """C_n(sigma) of the infinite-parameter corner elements."""
    prec = _prec_of(q)
    q2 = q * q
    d = int(l - n)
    num = qpochhammer(q2 ** (n + 1), q2, d) \
        * qpochhammer(-_qpow(q, 2 * sigma - 2 * l), q2, d)
    den = (qpochhammer(q2, q2, d)
           * qpochhammer(q2 ** (l + n + 1), q2, d)).sqrt()
    return _qpow(q, Fraction(d * (d - 1), 2)) * _qpow(q, -sigma * l) \
        * num / den


def gen_matrix_element(l, i, j, tau, sigma, q, kind="b"):
    """Generalized matrix element between eigenvectors of the twisted
    primitive elements: kind "b" carries the extra geometric weight that
    makes the two-sided eigen-relations symmetric, kind "a" does not.

    Infinite parameter values are supported for the index patterns
    (i = +-n, j = 0, tau = inf) and (i = 0, j = +-n, sigma = inf), where
    closed forms in terms of big q-Jacobi polynomials exist.
    """
    l, i, j = _half(l), _half(i), _half(j)
    if not (abs(i) <= l and abs(j) <= l and (l - i).denominator == 1
            and (l - j).denominator == 1):
        raise IndexOutOfRange(f"invalid indices (l, i, j) = ({l}, {i}, {j})")
    prec = _prec_of(q)
    tinf = tau == math.inf
    sinf = sigma == math.inf
    if tinf or sinf:
        if kind != "b":
            raise DomainError("limit elements exist for kind 'b' only")
        if tinf and not sinf and j == 0:
            n = int(abs(i))
            cn = _limit_c(l, n, sigma, q)
            rho = spherical_rho(math.inf, sigma, q)
            if i >= 0:
                f1 = corner_generators(math.inf, sigma - 1, q)["delta"]
                f2 = corner_generators(math.inf, sigma, q)["gamma"]
                P = _bigqjacobi_at_element(
                    int(l) - n, n, n, _qpow(q, 2 * sigma),
                    NumScalar(1, prec), q * q, rho)
            else:
                f1 = corner_generators(math.inf, sigma - 1, q)["beta"]
                f2 = corner_generators(math.inf, sigma, q)["alpha"]
                P = _bigqjacobi_at_element(
                    int(l) - n, n, n, _qpow(q, 2 * sigma + 2 * n),
                    _qpow(q, 2 * n), q * q, rho)
            return ((f1 * f2) ** n * P).scale(cn) if n else P.scale(cn)
        if sinf and not tinf and i == 0:
            n = int(abs(j))
            cn = _limit_c(l, n, tau, q)
            rho = spherical_rho(tau, math.inf, q)
            if j >= 0:
                f1 = corner_generators(tau - 1, math.inf, q)["delta"]
                f2 = corner_generators(tau, math.inf, q)["beta"]
                P = _bigqjacobi_at_element(
                    int(l) - n, n, n, _qpow(q, 2 * tau),
                    NumScalar(1, prec), q * q, rho)
            else:
                f1 = corner_generators(tau - 1, math.inf, q)["gamma"]
                f2 = corner_generators(tau, math.inf, q)["alpha"]
                P = _bigqjacobi_at_element(
                    int(l) - n, n, n, _qpow(q, 2 * tau + 2 * n),
                    _qpow(q, 2 * n), q * q, rho)
            return ((f1 * f2) ** n * P).scale(cn) if n else P.scale(cn)
        raise DomainError(
            "infinite parameters only for corner index patterns")
    eb_s = eigenbasis_dualqkrawtchouk(l, sigma, q)
    eb_t = eigenbasis_dualqkrawtchouk(l, tau, q)
    js = eb_s.labels.index(j)
    it = eb_t.labels.index(i)
    out = unit("Aq-SL2", q).scale(0)
    for ni, n in enumerate(eb_t.labels):
        wn = eb_t.coeffs[it][ni].conjugate()
        for mi, m in enumerate(eb_s.labels):
            wm = eb_s.coeffs[js][mi]
            w = wm * wn
            if kind == "b":
                w = w * _qpow(q, -m)
            out = out + matrix_element(l, n, m, q).scale(w)
    return out


def _d_coef(l, i, j, tau, sigma, q):
    """Connection constant between a generalized matrix element and its
    minimal-spin factor."""
    num = _cfactor(l, j, sigma, q) * _cfactor(l, i, tau, q)
    den = _cfactor(i, j, sigma, q) * _cfactor(i, i, tau, q)
    poch = qpochhammer(_qpow(q, 4 * l), 1 / (q * q), int(l - i))
    return num / den * _qpow(q, i - l) / poch


def aw_as_matrix_element_check(l, i, j, tau, sigma, q, thetas=()):
    """Residual of the identity expressing a generalized matrix element as
    its minimal-spin factor times an Askey-Wilson polynomial in the
    spherical element.  Returns the maximum of the coefficient-wise
    residual and the residuals of one-dimensional evaluations at the
    sample angles."""
    l, i, j = _half(l), _half(i), _half(j)
    prec = _prec_of(q)
    rho = spherical_rho(tau, sigma, q)
    m = max(abs(i), abs(j))

    def aw_params(alpha, beta, s, t):
        # p_n^{(alpha,beta)}(x; s, t | q^2) parameter vector
        q2 = q * q
        qr = _qpow(q2, Fraction(1, 2))
        return (qr * t / s, _qpow(q2, Fraction(1, 2) + alpha) * s / t,
                -qr / (s * t), -s * t * _qpow(q2, Fraction(1, 2) + beta))

    if m == i:
        d = _d_coef(l, i, j, tau, sigma, q)
        params = aw_params(int(i - j), int(i + j), _qpow(q, tau),
                           _qpow(q, sigma))
        deg = int(l - i)
        base = gen_matrix_element(i, i, j, tau, sigma, q)
    elif m == j:
        d = _d_coef(l, j, i, sigma, tau, q)
        params = aw_params(int(j - i), int(i + j), _qpow(q, sigma),
                           _qpow(q, tau))
        deg = int(l - j)
        base = gen_matrix_element(j, i, j, tau, sigma, q)
    elif m == -i:
        d = _d_coef(l, -i, -j, -tau, -sigma, q)
        params = aw_params(int(j - i), int(-i - j), _qpow(q, -tau),
                           _qpow(q, -sigma))
        deg = int(l + i)
        base = gen_matrix_element(-i, i, j, tau, sigma, q)
    else:
        d = _d_coef(l, -j, -i, -sigma, -tau, q)
        params = aw_params(int(i - j), int(-i - j), _qpow(q, -sigma),
                           _qpow(q, -tau))
        deg = int(l + j)
        base = gen_matrix_element(-j, i, j, tau, sigma, q)

    lhs = gen_matrix_element(l, i, j, tau, sigma, q)
    rhs = (base * _aw_at_element(deg, *params, q * q, rho)).scale(d)
    keys = set(lhs.terms) | set(rhs.terms)
    zero = NumScalar(0, prec)
    res = max((float(abs(lhs.terms.get(k, zero) - rhs.terms.get(k, zero)))
               for k in keys), default=0.0)
    for th in thetas:
        res = max(res, float(abs(pi_theta(lhs, th / 2)
                                 - pi_theta(rhs, th / 2))))
    return res


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients for the positive discrete series
# ---------------------------------------------------------------------------

def cgc_su11(k1, k2, j, n1, n2, n, q):
    """Clebsch-Gordan coefficient coupling the positive discrete series
    representations with lowest weights k1, k2 onto the component with
    lowest weight k1 + k2 + j; a q-Hahn polynomial times an explicit
    positive constant.  Zero unless n1 + n2 = n + j."""
    if k1 <= 0 or k2 <= 0:
        raise DomainError("lowest weight parameters must be positive")
    prec = _prec_of(q)
    if n1 + n2 != n + j:
        return NumScalar(0, prec)
    q2 = q * q
    num = _qpow(q, 2 * k1 * (n - n1)) \
        * qpochhammer(q2, q2, n + j) \
        * (qpochhammer(_qpow(q, 4 * k1), q2, n1)
           * qpochhammer(_qpow(q, 4 * k2), q2, n2)
           * qpochhammer(_qpow(q, 4 * k1), q2, j)).sqrt()
    den = (qpochhammer(q2, q2, n) * qpochhammer(q2, q2, n1)
           * qpochhammer(q2, q2, n2) * qpochhammer(q2, q2, j)
           * qpochhammer(_qpow(q, 4 * k1 + 4 * k2 + 4 * j), q2, n)
           * qpochhammer(_qpow(q, 4 * k2), q2, j)
           * qpochhammer(_qpow(q, 4 * k1 + 4 * k2 + 2 * j - 2), q2, j)
           ).sqrt()
    fp = FamilyParams("q-hahn",
                      (_qpow(q, 4 * k1 - 2), _qpow(q, 4 * k2 - 2), n + j),
                      q2)
    return num / den * eval_poly(fp, j, q2 ** (-n1))


# ---------------------------------------------------------------------------
# invariant functional through the weighted trace
# ---------------------------------------------------------------------------

def haar_trace(a, N=200, M=64, tol=None):
    """h(a) = (1 - q^2)/(2 pi) * int_0^{2 pi} tr(D pi_phi(a)) d phi,
    evaluated by the trapezoid rule on M periodic nodes with the trace
    truncated to N + 1 weight levels.  Only PBW monomials with equal
    powers of the two off-diagonal generators and no diagonal generator
    contribute a phase-free diagonal, so the phi average enforces that
    selection numerically.
    """
    if a.alg != "Aq-SL2":
        raise DomainError("the trace formula lives on the function algebra")
    q = a.q
    if q is None:
        raise DomainError("numeric coefficients required")
    prec = a.prec
    import mpmath
    q2 = q * q
    if float(abs(q2 ** N)) > 2.0 ** (-prec // 2):
        warnings.warn("truncation size too small for the working precision",
                      TruncationWarning)
    if tol is not None:
        bound = max((float(abs(c)) for c in a.terms.values()), default=0.0)
        if bound * float(abs(q2 ** (N + 1))) / float(abs(1 - q2)) > tol:
            warnings.warn("boundary contribution above tolerance",
                          TruncationWarning)
    tot = NumScalar(0, prec)
    with mpmath.mp.workprec(prec):
        phases = [NumScalar(mpmath.mp.expj(2 * mpmath.mp.pi * t / M), prec)
                  for t in range(M)]
    for (la, mm, nn), c in a.terms.items():
        if la != 0:
            continue
        # sum_j q^{2j} (e^{i phi} q^j)^m (-e^{-i phi} q^{j+1})^n
        geo = NumScalar(0, prec)
        r = q ** (2 + mm + nn)
        term = q ** nn
        for _ in range(N + 1):
            geo = geo + term
            term = term * r
        sgn = 1 if nn % 2 == 0 else -1
        pavg = sum((ph ** (mm - nn) for ph in phases),
                   NumScalar(0, prec)) / M
        tot = tot + c * geo * pavg * sgn
    return tot * (1 - q2)


# ---------------------------------------------------------------------------
# eigenvectors of the truncated spherical operator
# ---------------------------------------------------------------------------

def asc_eigenvector(lam, tau, theta, N, q):
    """Truncated eigenvector of the spherical-element image under the
    infinite-dimensional representation, for eigenvalue lam on the
    discrete spectrum lam = -q^{2k} or q^{2 tau + 2k}.  Coefficients are
    Al-Salam-Carlitz-type terminating series, normalized so the 0-th
    coordinate is 1."""
    import mpmath
    prec = _prec_of(q)
    lam = _num(lam, prec)
    with mpmath.mp.workprec(prec):
        phase = NumScalar(mpmath.mp.expj(theta), prec)
    vec = []
    cutoff = 2.0 ** (-prec)
    dead = 0
    # The terminating series suffers cancellation of roughly n^2 log(1/q)
    # bits against a result of the same Gaussian-decay order, so each
    # coefficient is computed with a precision boost quadratic in n.
    logq = abs(math.log2(float(abs(q))))
    for n in range(N + 1):
        if dead >= 3:
            vec.append(NumScalar(0, prec))
            continue
        wp = prec + int(2.2 * n * n * logq) + 64
        with mpmath.mp.workprec(wp):
            qq = mpmath.mpmathify(q.val)
            q2 = qq * qq
            qt = qq ** mpmath.mpmathify(float(tau)) \
                if not isinstance(tau, Fraction) \
                else qq ** (mpmath.mpf(tau.numerator) / tau.denominator)
            lv = mpmath.mpmathify(lam.val)
            tot = mpmath.mpf(1) * 0
            t = mpmath.mpf(1)
            for k in range(n + 1):
                tot += t
                f2 = 1 - qt * qt / lv * q2 ** k
                if abs(f2) < 2.0 ** (-3 * prec // 4):
                    break  # terminating zero blurred by rounding of lam
                t = t * (1 - q2 ** (k - n)) * f2 \
                    * (-q2 * lv) / (1 - q2 ** (k + 1))
            pn = qt ** (-n) * qq ** (n * (n - 1) / mpmath.mpf(2)) * tot \
                / mpmath.sqrt(mpmath.qp(q2, q2, n))
        val = NumScalar(pn, prec)
        if float(abs(val)) < cutoff:
            dead += 1
        else:
            dead = 0
        vec.append(_ipow(n, prec) * phase ** n * val)
    return vec
