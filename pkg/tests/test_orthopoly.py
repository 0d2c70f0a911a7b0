"""Tests for the q-orthogonal polynomial families and the Askey-Wilson measure."""

import math
from fractions import Fraction

import pytest
from mpmath import mp

from qsl2.scalar import E_ONE, E_Q, ExactScalar, NumScalar, num_context, qpow
from qsl2.qseries import phis, qpochhammer
from qsl2.orthopoly import (
    ConfluentCase,
    FamilyParams,
    ParamDomain,
    PoleOnCircle,
    aw_jacobi_params,
    aw_laguerre_params,
    aw_measure,
    aw_weight,
    christoffel_darboux,
    eval_poly,
    hahn_exton_bessel,
    integrate,
    jacobi_spectrum,
    poisson_kernel_asc,
    poisson_kernel_qhermite,
    recurrence_coeffs,
)

CTX = num_context(128)
Q = CTX.scalar(0.5)


def close(a, b, tol=1e-25):
    return abs(a - b) < tol


def by_recurrence(fp, n, x):
    """Evaluate through the three-term recurrence (independent route)."""
    pm1 = None
    p = E_ONE if isinstance(x, ExactScalar) else NumScalar(1, CTX.prec)
    for m in range(n):
        A, B, C = recurrence_coeffs(fp, m)
        nxt = (x * p - B * p - (C * pm1 if m > 0 else 0)) / A
        pm1, p = p, nxt
    return p


# -- exact recurrence vs hypergeometric agreement ---------------------------

def test_asc_recurrence_vs_hypergeometric_exact():
    a, b = qpow(1), -qpow(2)
    fp = FamilyParams("al-salam-chihara", (a, b), E_Q)
    x = ExactScalar(Fraction(2, 7))
    for n in range(9):
        assert eval_poly(fp, n, x) == by_recurrence(fp, n, x)


def test_cts_q_hermite_exact_route():
    fp = FamilyParams("cts-q-hermite", (), E_Q)
    x = ExactScalar(Fraction(1, 3))
    for n in range(9):
        assert eval_poly(fp, n, x) == by_recurrence(fp, n, x)


def test_al_salam_carlitz_recurrence_vs_hypergeometric_exact():
    a = ExactScalar(Fraction(-3, 5))
    fp = FamilyParams("al-salam-carlitz", (a,), E_Q)
    x = ExactScalar(Fraction(3, 4))
    for n in range(9):
        assert eval_poly(fp, n, x) == by_recurrence(fp, n, x)


def test_dual_q_krawtchouk_recurrence_vs_hypergeometric_exact():
    p, N = qpow(1), 6
    fp = FamilyParams("dual-q-krawtchouk", (p, N), E_Q)
    y = ExactScalar(Fraction(5, 3))
    for n in range(6):
        assert eval_poly(fp, n, y) == by_recurrence(fp, n, y)


def test_q_laguerre_recurrence_vs_hypergeometric():
    s, t = CTX.scalar(1.1), CTX.scalar(0.8)
    fp = FamilyParams("q-laguerre", (1, s, t), Q)
    x = CTX.scalar(0.37)
    for n in range(9):
        assert close(eval_poly(fp, n, x), by_recurrence(fp, n, x), 1e-25)


def test_recurrence_not_available():
    fp = FamilyParams("askey-wilson",
                      tuple(CTX.scalar(v) for v in (0.1, 0.2, 0.3, 0.4)), Q)
    with pytest.raises(NotImplementedError):
        recurrence_coeffs(fp, 2)


# -- evaluation vs generic phi series (independent route) -------------------

def test_aw_eval_matches_4phi3():
    a, b, c, d = (CTX.scalar(v) for v in (0.3, 0.2, -0.4, 0.15))
    fp = FamilyParams("askey-wilson", (a, b, c, d), Q)
    theta = CTX.scalar(0.83)
    with mp.workprec(CTX.prec):
        z = NumScalar(mp.exp(1j * theta.val), CTX.prec)
    x = (z + 1 / z) / 2
    for n in range(1, 5):
        pref = a ** (-n) * qpochhammer([a * b, a * c, a * d], Q, n)
        ser = phis((Q ** (-n), a * b * c * d * Q ** (n - 1), a * z, a / z),
                   (a * b, a * c, a * d), Q, Q)
        assert close(eval_poly(fp, n, x), pref * ser, 1e-25)


def test_big_q_jacobi_matches_3phi2():
    c, d = CTX.scalar(0.7), CTX.scalar(0.9)
    fp = FamilyParams("big-q-jacobi", (1, 2, c, d), Q)
    x = CTX.scalar(0.3)
    for n in range(1, 6):
        ser = phis((Q ** (-n), Q ** (n + 4), x * Q ** 2 / c),
                   (Q ** 2, -(Q ** 2) * d / c), Q, Q)
        assert close(eval_poly(fp, n, x), ser, 1e-25)


def test_little_q_jacobi_matches_2phi1():
    fp = FamilyParams("little-q-jacobi", (1, 2), Q)
    x = CTX.scalar(0.4)
    for n in range(1, 6):
        ser = phis((Q ** (-n), Q ** (n + 4)), (Q ** 2,), Q, Q * x)
        assert close(eval_poly(fp, n, x), ser, 1e-25)


def test_q_krawtchouk_matches_3phi2():
    p, N = CTX.scalar(0.7), 6  # p = q^sigma
    fp = FamilyParams("q-krawtchouk", (p, N), Q)
    for n in range(1, 5):
        for j in range(3):
            x = Q ** (-j)
            ser = phis((Q ** (-n), x, -(Q ** (n - N)) / p),
                       (Q ** (-N), CTX.scalar(0)), Q, Q)
            assert close(eval_poly(fp, n, x), ser, 1e-25)


def test_q_hahn_matches_3phi2():
    a, b, N = CTX.scalar(0.4), CTX.scalar(0.3), 5
    fp = FamilyParams("q-hahn", (a, b, N), Q)
    for n in range(1, 5):
        for j in range(3):
            u = Q ** (-j)
            ser = phis((Q ** (-n), u, a * b * Q ** (n + 1)),
                       (a * Q, Q ** (-N)), Q, Q)
            assert close(eval_poly(fp, n, u), ser, 1e-25)


def test_q_charlier_matches_2phi1():
    a = CTX.scalar(0.8)
    fp = FamilyParams("q-charlier", (a,), Q)
    for n in range(1, 5):
        for j in range(3):
            u = Q ** (-j)
            ser = phis((Q ** (-n), u), (CTX.scalar(0),), Q,
                       -(Q ** (n + 1)) / a)
            assert close(eval_poly(fp, n, u), ser, 1e-25)


def test_dual_q_krawtchouk_lattice_values():
    # at lattice points y = q^-x - q^(x-N)/p the product factors split as
    # (q^-x; q)_k (-q^(x-N)/p; q)_k
    p, N = CTX.scalar(0.7), 6
    fp = FamilyParams("dual-q-krawtchouk", (p, N), Q)
    for n in range(1, 5):
        for j in range(3):
            y = Q ** (-j) - Q ** (j - N) / p
            ser = phis((Q ** (-n), Q ** (-j), -(Q ** (j - N)) / p),
                       (Q ** (-N), CTX.scalar(0)), Q, Q)
            assert close(eval_poly(fp, n, y), ser, 1e-25)


# -- weight and measure ------------------------------------------------------

def test_aw_weight_positive_and_pole():
    w = aw_weight(0.9, 0.3, 0.2, -0.4, 0.15, 0.5, prec=128)
    assert w.val.real > 0
    assert abs(w.val.imag) < 1e-30
    with pytest.raises(PoleOnCircle):
        aw_weight(0.9, 2.0, 0.2, -0.4, 0.15, 0.5, prec=128)


def test_aw_measure_param_domain():
    with pytest.raises(ParamDomain):
        aw_measure(1.2, 0.9, 0.1, 0.1, 0.5, prec=96)


def test_aw_orthogonality_continuous_case():
    a, b, c, d = 0.4, 0.3, -0.5, 0.2
    m = aw_measure(a, b, c, d, 0.5, prec=96)
    fp = FamilyParams("askey-wilson",
                      tuple(NumScalar(v, 96) for v in (a, b, c, d)),
                      NumScalar(0.5, 96))
    p1 = lambda x: eval_poly(fp, 1, x)
    p2 = lambda x: eval_poly(fp, 2, x)
    tol = 1e-12
    assert abs(integrate(m, lambda x: p1(x) * p2(x), rel_tol=1e-16)) < tol
    # norm ratio against the closed form
    q = NumScalar(0.5, 96)
    n = 2
    abcd = NumScalar(a * b * c * d, 96)
    prods = [a * b, a * c, a * d, b * c, b * d, c * d]
    hn = ((1 - abcd * q ** (n - 1)) / (1 - abcd * q ** (2 * n - 1))
          * qpochhammer([q] + [NumScalar(p, 96) for p in prods], q, n)
          / qpochhammer(abcd, q, n))
    got = integrate(m, lambda x: p2(x) * p2(x), rel_tol=1e-16)
    assert abs(got - hn) < tol


def test_aw_orthogonality_with_mass():
    a, b, c, d = 1.2, 0.3, -0.2, 0.1
    m = aw_measure(a, b, c, d, 0.5, prec=96)
    assert len(m.masses) == 1
    fp = FamilyParams("askey-wilson",
                      tuple(NumScalar(v, 96) for v in (a, b, c, d)),
                      NumScalar(0.5, 96))
    p0 = lambda x: eval_poly(fp, 0, x)
    p1 = lambda x: eval_poly(fp, 1, x)
    assert abs(integrate(m, lambda x: p0(x) * p1(x), rel_tol=1e-14)) < 1e-8
    assert abs(integrate(m, lambda x: NumScalar(1, 96)) - 1) < 1e-10


# -- spectra and kernels -----------------------------------------------------

def test_jacobi_spectrum_gauss_quadrature():
    # Gauss nodes/weights from the truncated Jacobi matrix reproduce moments
    a, b = 0.4, 0.3
    fp = FamilyParams("al-salam-chihara",
                      (NumScalar(a, 96), NumScalar(b, 96)), NumScalar(0.5, 96))
    vals, w2 = jacobi_spectrum(fp, 60)
    m_meas = aw_measure(a, b, 0.0, 0.0, 0.5, prec=96)
    for k in (1, 2, 3, 4):
        quad = sum(w2[i] * vals[i] ** k for i in range(len(vals)))
        ref = integrate(m_meas, lambda x: x ** k, rel_tol=1e-14)
        assert abs(quad - float(ref.val.real)) < 1e-10


def test_christoffel_darboux():
    fp = FamilyParams("al-salam-chihara",
                      (CTX.scalar(0.4), CTX.scalar(0.3)), Q)
    lhs, rhs = christoffel_darboux(fp, 4, CTX.scalar(0.3), CTX.scalar(-0.2))
    assert close(lhs, rhs, 1e-25)
    with pytest.raises(ConfluentCase):
        christoffel_darboux(fp, 4, CTX.scalar(0.3), CTX.scalar(0.3))


def test_poisson_kernel_qhermite_vs_series():
    x, y, t = CTX.scalar(0.3), CTX.scalar(-0.4), CTX.scalar(0.35)
    pk = poisson_kernel_qhermite(x, y, t, Q, prec=CTX.prec)
    fp = FamilyParams("cts-q-hermite", (), Q)
    tot = NumScalar(0, CTX.prec)
    for k in range(140):
        tot = tot + (t ** k * eval_poly(fp, k, x) * eval_poly(fp, k, y)
                     / qpochhammer(Q, Q, k))
    assert close(pk, tot, 1e-20)


def test_poisson_kernel_asc_w87_vs_series():
    x, y, t = CTX.scalar(0.3), CTX.scalar(-0.4), CTX.scalar(0.3)
    a, b = CTX.scalar(0.5), CTX.scalar(0.2)
    pk1 = poisson_kernel_asc(x, y, t, a, b, Q, prec=CTX.prec, method="w87")
    pk2 = poisson_kernel_asc(x, y, t, a, b, Q, prec=CTX.prec, method="series")
    assert close(pk1, pk2, 1e-18)


def test_hahn_exton_negative_order():
    z = CTX.scalar(0.4)
    for n in (1, 2, 3):
        lhs = hahn_exton_bessel(-n, z, Q, prec=CTX.prec)
        qn2 = Q ** NumScalar(Fraction(n, 2), CTX.prec)
        rhs = (-1) ** n * qn2 * hahn_exton_bessel(n, z * qn2, Q, prec=CTX.prec)
        assert close(lhs, rhs, 1e-30)


def test_hahn_exton_symmetry_identity():
    # (w; q)_inf 1phi1(0; w; q, z) is symmetric in (w, z)
    w, z = CTX.scalar(0.3), CTX.scalar(0.7)
    inf = math.inf

    def side(u, v):
        return qpochhammer(u, Q, inf) * phis((CTX.scalar(0),), (u,), Q, v)

    assert close(side(w, z), side(z, w), 1e-30)


def test_aw_param_shift_helpers():
    q = CTX.scalar(0.25)
    a, b, c, d = aw_jacobi_params(1, 2, CTX.scalar(1.3), CTX.scalar(0.9), q)
    qh = q ** NumScalar(Fraction(1, 2), CTX.prec)
    assert close(a * b, qh * qh * q, 1e-30)  # ab = q^(1+alpha)
    la, lb, lc, ld = aw_laguerre_params(1, CTX.scalar(1.3), CTX.scalar(0.9), q)
    assert ld.is_zero()
    assert close(la * lb, q ** 2, 1e-30)
