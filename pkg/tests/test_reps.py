"""Tests for concrete representations: spin matrices, truncated
infinite-dimensional representations, eigenbases, generalized matrix
elements, Clebsch-Gordan coefficients and the weighted trace."""

import io
import math
import warnings
from fractions import Fraction

import pytest

from qsl2.scalar import NumScalar
from qsl2.qseries import qpochhammer
from qsl2.orthopoly import FamilyParams, eval_poly
from qsl2.qalgebra import (
    act_left,
    act_right,
    comultiply,
    corner_generators,
    generator,
    haar,
    monomial,
    normal_form,
    pairing,
    spherical_rho,
    star,
    twisted_primitive_X,
    _word,
)
from qsl2.reps import (
    DomainError,
    EigenBasis,
    IndexOutOfRange,
    SpinRep,
    TruncationWarning,
    asc_eigenvector,
    aw_as_matrix_element_check,
    cgc_su11,
    eigenbasis_dualqkrawtchouk,
    gen_matrix_element,
    haar_trace,
    mat_mul,
    mat_sub,
    mat_max_abs,
    matrix_element,
    matrix_to_csv,
    pi_inf,
    pi_k,
    pi_theta,
    schur_check,
    spin_rep,
    t_R,
    tau_lambda,
    twisted_eigenvalue,
    _limit_c,
    _qpow,
)

PREC = 192
Q = NumScalar(Fraction(1, 2), PREC)
HALF = Fraction(1, 2)
TAU = Fraction(1, 10)
SIGMA = Fraction(3, 10)
ZERO = NumScalar(0, PREC)
ONE = NumScalar(1, PREC)


def ident(n):
    return [[NumScalar(1 if i == j else 0, PREC) for j in range(n)]
            for i in range(n)]


def rep_matrix(sr, elt):
    """Matrix of an enveloping-algebra element in a spin representation."""
    dim = sr.dim
    out = [[ZERO] * dim for _ in range(dim)]
    for key, c in elt.terms.items():
        cur = ident(dim)
        for g, p in _word("Uq-sl2", key):
            for _ in range(p):
                cur = mat_mul(cur, sr.matrices[g])
        for i in range(dim):
            for j in range(dim):
                out[i][j] = out[i][j] + cur[i][j] * c
    return out


# ---------------------------------------------------------------------------
# spin representations
# ---------------------------------------------------------------------------

def test_spin_rep_unitary_relations():
    for l in (HALF, 1, Fraction(3, 2)):
        sr = spin_rep(l, "unitary", Q)
        A, B, C, D = (sr.matrices[g] for g in "ABCD")
        assert mat_max_abs(mat_sub(mat_mul(A, D), ident(sr.dim))) < 1e-50
        assert mat_max_abs(mat_sub(mat_mul(A, B),
                                   [[Q * x for x in r]
                                    for r in mat_mul(B, A)])) < 1e-50
        lhs = mat_sub(mat_mul(B, C), mat_mul(C, B))
        AA, DD = mat_mul(A, A), mat_mul(D, D)
        rhs = [[(AA[i][j] - DD[i][j]) / (Q - 1 / Q) for j in range(sr.dim)]
               for i in range(sr.dim)]
        assert mat_max_abs(mat_sub(lhs, rhs)) < 1e-35


def test_spin_rep_half_explicit():
    sr = spin_rep(HALF, "unitary", Q)
    B = sr.matrices["B"]
    den = 1 / Q - Q
    assert float(abs(B[0][1] - (Q ** -1 - Q) / den)) < 1e-50
    assert float(abs(B[1][0])) < 1e-50
    # B and C are mutually adjoint
    C = sr.matrices["C"]
    for i in range(2):
        for j in range(2):
            assert float(abs(B[i][j] - C[j][i].conjugate())) < 1e-50


def test_spin_rep_adjointness():
    sr = spin_rep(Fraction(3, 2), "unitary", Q)
    B, C = sr.matrices["B"], sr.matrices["C"]
    for i in range(sr.dim):
        for j in range(sr.dim):
            assert float(abs(B[i][j] - C[j][i].conjugate())) < 1e-35


def test_spin_rep_rescaled_exact_relations():
    for l in (HALF, 1, 2):
        sr = spin_rep(l, "rescaled-exact")
        A, B, C, D = (sr.matrices[g] for g in "ABCD")
        dim = sr.dim
        # AD = 1 exactly
        AD = mat_mul(A, D)
        for i in range(dim):
            for j in range(dim):
                assert AD[i][j] == (sr.matrices["A"][0][0] ** 0
                                    if i == j else A[0][0] * 0)
        # C acts as a plain shift
        for k in range(dim - 1):
            assert C[k + 1][k] == A[0][0] ** 0
        # BC - CB = (A^2 - D^2)/(q - 1/q) exactly in Laurent arithmetic
        from qsl2.scalar import ExactScalar
        v = ExactScalar({1: Fraction(1)})
        q = v * v
        lhs = mat_sub(mat_mul(B, C), mat_mul(C, B))
        AA, DD = mat_mul(A, A), mat_mul(D, D)
        for i in range(dim):
            for j in range(dim):
                assert lhs[i][j] * (q - 1 / q) == AA[i][j] - DD[i][j]


def test_spin_rep_errors():
    with pytest.raises(IndexOutOfRange):
        spin_rep(-1, "unitary", Q)
    with pytest.raises(IndexOutOfRange):
        spin_rep(Fraction(1, 3), "unitary", Q)
    with pytest.raises(DomainError):
        spin_rep(1, "unitary")
    with pytest.raises(DomainError):
        spin_rep(1, "weird", Q)


# ---------------------------------------------------------------------------
# matrix elements of the function algebra
# ---------------------------------------------------------------------------

def test_matrix_element_spin_half_are_generators():
    t = matrix_element(HALF, -HALF, -HALF, Q)
    assert t.isclose(generator("Aq-SL2", "alpha", Q), 1e-50)
    assert matrix_element(HALF, -HALF, HALF, Q).isclose(
        generator("Aq-SL2", "beta", Q), 1e-50)
    assert matrix_element(HALF, HALF, -HALF, Q).isclose(
        generator("Aq-SL2", "gamma", Q), 1e-50)
    assert matrix_element(HALF, HALF, HALF, Q).isclose(
        generator("Aq-SL2", "delta", Q), 1e-50)


def test_matrix_element_corner_powers():
    for l in (1, Fraction(3, 2)):
        t = matrix_element(l, -l, -l, Q)
        assert t.isclose(generator("Aq-SL2", "alpha", Q) ** int(2 * l),
                         1e-45)
        t = matrix_element(l, l, l, Q)
        assert t.isclose(generator("Aq-SL2", "delta", Q) ** int(2 * l),
                         1e-45)


def test_matrix_element_pairing_oracle():
    """Entries of the unitary spin representation coincide with the duality
    pairing against the corresponding matrix element, across all four
    index regimes."""
    for l in (HALF, 1, Fraction(3, 2)):
        sr = spin_rep(l, "unitary", Q)
        N = int(2 * l)
        labels = [l - N + k for k in range(N + 1)]
        for ni, n in enumerate(labels):
            for mi, m in enumerate(labels):
                t = matrix_element(l, n, m, Q)
                for key in [(0, 0, 0), (1, 0, 0), (-1, 1, 0), (0, 1, 1)]:
                    u = monomial("Uq-sl2", key, Q)
                    got = pairing(u, t)
                    want = rep_matrix(sr, u)[ni][mi]
                    assert float(abs(got - want)) < 1e-45


def test_matrix_element_comultiplication():
    """Delta(t^l_{nm}) = sum_k t^l_{nk} (x) t^l_{km}."""
    l = 1
    labels = [-1, 0, 1]
    for n in labels:
        for m in labels:
            lhs = comultiply(matrix_element(l, n, m, Q))
            rhs = None
            for k in labels:
                term = _tensor(matrix_element(l, n, k, Q),
                               matrix_element(l, k, m, Q))
                rhs = term if rhs is None else rhs + term
            assert lhs.isclose(rhs, 1e-40)


def _tensor(x, y):
    from qsl2.qalgebra import TensorElement
    out = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            out[(k1, k2)] = out.get((k1, k2), ZERO) + c1 * c2
    return TensorElement(x.alg, out, x.q)


def test_matrix_element_index_errors():
    with pytest.raises(IndexOutOfRange):
        matrix_element(1, 2, 0, Q)
    with pytest.raises(IndexOutOfRange):
        matrix_element(1, HALF, HALF, Q)


def test_schur_orthogonality():
    cases = [
        (HALF, HALF, -HALF, -HALF, -HALF, -HALF),
        (1, 1, 0, 1, 1, 0),
        (1, 1, 1, 0, 0, 1),
        (HALF, 1, HALF, HALF, 0, 0),
        (Fraction(3, 2), Fraction(3, 2), HALF, -HALF, -HALF, HALF),
    ]
    for l, k, m, n, i, j in cases:
        computed, closed = schur_check(l, k, m, n, i, j, Q)
        assert float(abs(computed - closed)) < 1e-45


# ---------------------------------------------------------------------------
# one-dimensional evaluations
# ---------------------------------------------------------------------------

def test_tau_lambda_on_matrix_elements():
    lam = NumScalar(Fraction(4, 5), PREC)
    for (l, n, m) in [(HALF, HALF, HALF), (1, -1, -1), (1, 0, 1),
                      (Fraction(3, 2), HALF, -HALF)]:
        got = tau_lambda(matrix_element(l, n, m, Q), lam)
        want = lam ** int(-2 * n) if n == m else ZERO
        assert float(abs(got - want)) < 1e-45


def test_pi_theta_is_unit_circle_evaluation():
    x = spherical_rho(TAU, SIGMA, Q)
    v = pi_theta(x, 0.35)
    import mpmath
    with mpmath.mp.workprec(PREC):
        lam = NumScalar(mpmath.mp.expj(0.35), PREC)
    assert float(abs(v - tau_lambda(x, lam))) < 1e-45


# ---------------------------------------------------------------------------
# truncated representations
# ---------------------------------------------------------------------------

def test_pi_inf_relations_and_star():
    rep = pi_inf(0.7, 40, Q)
    al = generator("Aq-SL2", "alpha", Q)
    be = generator("Aq-SL2", "beta", Q)
    v = rep.basis_vector(15)
    img = rep.apply_element(al * be - (be * al).scale(Q), v)
    assert max(float(abs(x)) for x in img) < 1e-45
    Ma, Md = rep.matrix("alpha"), rep.matrix("delta")
    n = rep.size
    assert max(float(abs(Md[i][j] - Ma[j][i].conjugate()))
               for i in range(n) for j in range(n)) < 1e-45


def test_pi_inf_matrix_element_diagonal():
    """pi_theta(t^l_{nm}) in the one-dimensional limit: tau_{e^{i theta}}
    sees only the diagonal, with phase e^{-2 i n theta}."""
    import mpmath
    th = 0.6
    for (l, n, m) in [(1, 0, 0), (1, 1, 1), (1, 1, 0)]:
        got = pi_theta(matrix_element(l, n, m, Q), th)
        with mpmath.mp.workprec(PREC):
            want = NumScalar(mpmath.mp.expj(-2 * n * th), PREC) \
                if n == m else ZERO
        assert float(abs(got - want)) < 1e-45


def test_pi_k_relations():
    rep = pi_k(Fraction(3, 10), 30, Q)
    MB, MC = rep.matrix("B"), rep.matrix("C")
    MA, MD = rep.matrix("A"), rep.matrix("D")
    lhs = mat_sub(mat_mul(MB, MC), mat_mul(MC, MB))
    AA, DD = mat_mul(MA, MA), mat_mul(MD, MD)
    # interior block only; the relation has entries of size q^{-2(k+n)} so
    # the comparison is relative
    for i in range(28):
        for j in range(28):
            scale = max(1.0, float(abs(AA[i][j])), float(abs(DD[i][j])))
            diff = float(abs(lhs[i][j] - (AA[i][j] - DD[i][j]) / (Q - 1 / Q)))
            assert diff < 1e-40 * scale
    # B = -C^dagger
    n = rep.size
    assert max(float(abs(MB[i][j] + MC[j][i].conjugate()))
               for i in range(n) for j in range(n)) == 0.0


def test_pi_k_domain_errors():
    with pytest.raises(DomainError):
        pi_k(0, 10, Q)
    with pytest.raises(DomainError):
        pi_k(Fraction(1, 2), 2, Q)


def test_t_R_relations_and_pairing():
    rep = t_R(Fraction(3, 4), 8, Q)
    MA, MB = rep.matrix("A"), rep.matrix("B")
    P1, P2 = mat_mul(MA, MB), mat_mul(MB, MA)
    n = rep.size
    assert max(float(abs(P1[i][j] - Q * P2[i][j]))
               for i in range(1, n - 1) for j in range(1, n - 1)) == 0.0
    # weight structure: A e_n = q^n e_n on the symmetric window
    v = rep.basis_vector(-3)
    img = rep.apply_element(generator("Uq-m2", "A", Q), v)
    assert float(abs(img[-3 + rep.offset] - Q ** -3)) < 1e-50


def test_truncated_rep_wrong_algebra():
    rep = pi_inf(0.1, 10, Q)
    with pytest.raises(DomainError):
        rep.apply_element(generator("Uq-sl2", "A", Q), rep.basis_vector(0))


def test_clebsch_gordan_multiplicities():
    """Spectral multiplicity count of t^{l1} (x) t^{l2} (A) matches the
    decomposition into spins |l1-l2| .. l1+l2."""
    import collections
    for l1, l2 in [(HALF, HALF), (HALF, 1), (1, 1)]:
        s1 = spin_rep(l1, "unitary", Q)
        s2 = spin_rep(l2, "unitary", Q)
        weights = collections.Counter()
        for i in range(s1.dim):
            for j in range(s2.dim):
                w = s1.matrices["A"][i][i] * s2.matrices["A"][j][j]
                weights[round(math.log(float(abs(w)), float(abs(Q))), 6)] += 1
        expect = collections.Counter()
        l = abs(l1 - l2)
        while l <= l1 + l2:
            for k in range(int(2 * l) + 1):
                expect[round(float(-(l - k)), 6)] += 1
            l += 1
        assert weights == expect


# ---------------------------------------------------------------------------
# eigenbases and generalized matrix elements
# ---------------------------------------------------------------------------

def test_eigenbasis_orthonormal_and_eigen():
    for l in (HALF, 1, Fraction(3, 2)):
        XA = twisted_primitive_X(SIGMA, Q) * generator("Uq-sl2", "A", Q)
        sr = spin_rep(l, "unitary", Q)
        M = rep_matrix(sr, XA)
        eb = eigenbasis_dualqkrawtchouk(l, SIGMA, Q)
        dim = sr.dim
        for j in range(dim):
            lam, v = eb.eigenvalues[j], eb.coeffs[j]
            for r in range(dim):
                acc = sum((M[r][c] * v[c] for c in range(dim)), ZERO)
                assert float(abs(acc - lam * v[r])) < 1e-45
            for i in range(dim):
                ip = sum((v[t] * eb.coeffs[i][t].conjugate()
                          for t in range(dim)), ZERO)
                assert float(abs(ip - (1 if i == j else 0))) < 1e-45


def test_eigenbasis_zero_eigenvalue():
    assert float(abs(twisted_eigenvalue(0, SIGMA, Q))) == 0.0
    eb = eigenbasis_dualqkrawtchouk(2, SIGMA, Q)
    assert eb.labels == (-2, -1, 0, 1, 2)
    assert float(abs(eb.eigenvalues[2])) == 0.0


def test_eigenbasis_dense_solver_oracle():
    """l = 1/2 eigenvalues agree with the closed form of the quadratic."""
    eb = eigenbasis_dualqkrawtchouk(HALF, SIGMA, Q)
    qs = _qpow(Q, SIGMA)
    for j, lab in zip(range(2), (-HALF, HALF)):
        lam = (qs / _qpow(Q, 2 * lab) - _qpow(Q, 2 * lab) / qs
               + qs - 1 / qs) / (Q - 1 / Q)
        # note eigenvalue formula uses -2j-s in the first exponent
        lam = twisted_eigenvalue(lab, SIGMA, Q)
        prod = eb.eigenvalues[0] * eb.eigenvalues[1]
        # det of the 2x2 matrix of X_sigma A
        XA = twisted_primitive_X(SIGMA, Q) * generator("Uq-sl2", "A", Q)
        M = rep_matrix(spin_rep(HALF, "unitary", Q), XA)
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        assert float(abs(prod - det)) < 1e-45


def test_gen_matrix_element_spin_half_corners():
    cg = corner_generators(TAU, SIGMA, Q, normalized=True)
    for name, (i, j) in {"alpha": (-HALF, -HALF), "beta": (-HALF, HALF),
                         "gamma": (HALF, -HALF),
                         "delta": (HALF, HALF)}.items():
        b = gen_matrix_element(HALF, i, j, TAU, SIGMA, Q)
        assert b.isclose(cg[name], 1e-45)


def test_gen_matrix_element_eigen_relations():
    Xs = twisted_primitive_X(SIGMA, Q)
    Xt = twisted_primitive_X(TAU, Q)
    D = generator("Uq-sl2", "D", Q)
    A = generator("Uq-sl2", "A", Q)
    for l in (HALF, 1):
        labels = [l - int(2 * l) + k for k in range(int(2 * l) + 1)]
        for i in labels:
            for j in labels:
                b = gen_matrix_element(l, i, j, TAU, SIGMA, Q)
                lj = twisted_eigenvalue(j, SIGMA, Q)
                li = twisted_eigenvalue(i, TAU, Q)
                r1 = act_left(Xs, b) - act_left(D, b).scale(lj)
                r2 = act_right(b, Xt) - act_right(b, D).scale(li)
                for r in (r1, r2):
                    assert max([float(abs(c)) for c in r.terms.values()]
                               or [0.0]) < 1e-40
                # the "a" variant is an eigenvector of X A on both sides
                a = gen_matrix_element(l, i, j, TAU, SIGMA, Q, kind="a")
                r3 = act_left(Xs * A, a) - a.scale(lj)
                r4 = act_right(a, Xt * A) - a.scale(li)
                for r in (r3, r4):
                    assert max([float(abs(c)) for c in r.terms.values()]
                               or [0.0]) < 1e-40


def test_gen_matrix_element_relates_a_and_b():
    """b = A . a (left action of the group-like generator)."""
    A = generator("Uq-sl2", "A", Q)
    for (l, i, j) in [(1, 0, 1), (1, -1, 0), (Fraction(3, 2), HALF, -HALF)]:
        a = gen_matrix_element(l, i, j, TAU, SIGMA, Q, kind="a")
        b = gen_matrix_element(l, i, j, TAU, SIGMA, Q, kind="b")
        assert act_left(A, a).isclose(b, 1e-40)


def test_gen_matrix_element_tau_lambda_values():
    lam = NumScalar(Fraction(4, 5), PREC)
    from qsl2.reps import _cfactor
    q2 = Q * Q
    for l in (HALF, 1, Fraction(3, 2)):
        i = l
        for j in [l - int(2 * l) + k for k in range(int(2 * l) + 1)]:
            b = gen_matrix_element(l, i, j, TAU, SIGMA, Q)
            got = tau_lambda(b, lam)
            want = _cfactor(l, j, SIGMA, Q) * _cfactor(l, i, TAU, Q) \
                * _qpow(Q, -i) * lam ** int(-2 * i) \
                * qpochhammer(lam * lam * _qpow(Q, 1 + TAU - SIGMA), q2,
                              int(i - j)) \
                * qpochhammer(-lam * lam * _qpow(Q, 1 + TAU + SIGMA), q2,
                              int(i + j))
            assert float(abs(got - want)) < 1e-45


def test_gen_matrix_element_limit_eigen_relations():
    """Infinite-parameter elements satisfy the rescaled eigen relations
    with D - A."""
    D = generator("Uq-sl2", "D", Q)
    A = generator("Uq-sl2", "A", Q)
    Xinf = D - A
    Xs = twisted_primitive_X(SIGMA, Q)
    Xt = twisted_primitive_X(TAU, Q)

    def mx(e):
        return max([float(abs(c)) for c in e.terms.values()] or [0.0])

    for l in (1, 2):
        for n in range(l + 1):
            for sn in {n, -n}:
                lam = twisted_eigenvalue(sn, math.inf, Q)
                b = gen_matrix_element(l, sn, 0, math.inf, SIGMA, Q)
                assert mx(act_left(Xs, b)) < 1e-40
                assert mx(act_right(b, Xinf)
                          - act_right(b, D).scale(lam)) < 1e-40
                b2 = gen_matrix_element(l, 0, sn, TAU, math.inf, Q)
                assert mx(act_left(Xinf, b2)
                          - act_left(D, b2).scale(lam)) < 1e-40
                assert mx(act_right(b2, Xt)) < 1e-40


def test_gen_matrix_element_limit_domain():
    with pytest.raises(DomainError):
        gen_matrix_element(1, 1, 1, math.inf, SIGMA, Q)
    with pytest.raises(DomainError):
        gen_matrix_element(1, 1, 0, math.inf, SIGMA, Q, kind="a")
    with pytest.raises(IndexOutOfRange):
        gen_matrix_element(1, 2, 0, TAU, SIGMA, Q)


def test_aw_as_matrix_element_all_regimes():
    for l in (1, Fraction(3, 2)):
        labels = [l - int(2 * l) + k for k in range(int(2 * l) + 1)]
        for i in labels:
            for j in labels:
                res = aw_as_matrix_element_check(l, i, j, TAU, SIGMA, Q,
                                                 thetas=(0.3,))
                assert res < 1e-40


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients
# ---------------------------------------------------------------------------

def test_cgc_normalization():
    k1, k2 = Fraction(3, 10), Fraction(2, 5)
    q2 = Q * Q
    for j in range(4):
        got = cgc_su11(k1, k2, j, 0, j, 0, Q)
        want = (qpochhammer(_qpow(Q, 4 * k1), q2, j)
                / qpochhammer(_qpow(Q, 4 * k1 + 4 * k2 + 2 * j - 2), q2,
                              j)).sqrt()
        assert float(abs(got - want)) < 1e-45


def test_cgc_tensor_oracle():
    """Clebsch-Gordan coefficients against a direct tensor-product
    computation: the coupled basis is built from the kernel of the
    lowering operator and repeated raising."""
    k1, k2 = Fraction(3, 10), Fraction(2, 5)
    N = 12
    r1, r2 = pi_k(k1, N, Q), pi_k(k2, N, Q)
    dB = comultiply(generator("Uq-sl2", "B", Q))

    def apply_tensor(te, vec):
        out = {}
        for (key1, key2), c in te.terms.items():
            for (n1, n2), v in vec.items():
                t1, c1 = n1, ONE
                for g, p in _word("Uq-sl2", key1):
                    for _ in range(p):
                        t1, cc = r1.gen_action(g, t1)
                        c1 = c1 * cc
                t2, c2 = n2, ONE
                for g, p in _word("Uq-sl2", key2):
                    for _ in range(p):
                        t2, cc = r2.gen_action(g, t2)
                        c2 = c2 * cc
                if 0 <= t1 <= N and 0 <= t2 <= N:
                    out[(t1, t2)] = out.get((t1, t2), ZERO) + v * c * c1 * c2
        return out

    q2 = Q * Q
    for j in range(3):
        # lowest-weight vector at level j: kernel of Delta(C)
        v = [ONE]
        for a in range(j):
            v.append(-v[a] * r1.gen_action("A", a)[1]
                     * r2.gen_action("C", j - a)[1]
                     / (r1.gen_action("C", a + 1)[1]
                        * r2.gen_action("D", j - a - 1)[1]))
        nrm = sum((x * x.conjugate() for x in v), ZERO).sqrt()
        vec = {(a, j - a): v[a] / nrm for a in range(j + 1)}
        for n in range(3):
            for (n1, n2), coef in vec.items():
                got = cgc_su11(k1, k2, j, n1, n2, n, Q)
                assert float(abs(got - coef)) < 1e-45
            kk = k1 + k2 + j
            bn = _qpow(Q, -Fraction(1, 2) - kk - n) \
                * ((ONE - q2 ** (n + 1))
                   * (ONE - _qpow(q2, 2 * kk + n))).sqrt() / (1 / Q - Q)
            vec = {kky: vv / bn
                   for kky, vv in apply_tensor(dB, vec).items()}


def test_cgc_unitarity():
    k1, k2 = Fraction(3, 10), Fraction(2, 5)
    for n1 in range(3):
        for n2 in range(3):
            tot = ZERO
            for j in range(n1 + n2 + 1):
                c = cgc_su11(k1, k2, j, n1, n2, n1 + n2 - j, Q)
                tot = tot + c * c
            assert float(abs(tot - 1)) < 1e-40
    for j in range(3):
        for n in range(3):
            tot = ZERO
            for n1 in range(n + j + 1):
                c = cgc_su11(k1, k2, j, n1, n + j - n1, n, Q)
                tot = tot + c * c
            assert float(abs(tot - 1)) < 1e-40


def test_cgc_selection_and_domain():
    assert float(abs(cgc_su11(Fraction(3, 10), Fraction(2, 5),
                              1, 1, 1, 3, Q))) == 0.0
    with pytest.raises(DomainError):
        cgc_su11(0, Fraction(2, 5), 1, 1, 1, 1, Q)


# ---------------------------------------------------------------------------
# weighted trace
# ---------------------------------------------------------------------------

def test_haar_trace_matches_haar():
    ga = generator("Aq-SL2", "gamma", Q)
    be = generator("Aq-SL2", "beta", Q)
    al = generator("Aq-SL2", "alpha", Q)
    de = generator("Aq-SL2", "delta", Q)
    cases = [normal_form("Aq-SL2", [], Q), ga * be, ga * ga * be * be,
             al * de, al * ga * be * de,
             spherical_rho(TAU, SIGMA, Q) ** 2,
             spherical_rho(TAU, math.inf, Q) ** 2]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for x in cases:
            assert float(abs(haar_trace(x, N=200, M=64) - haar(x))) < 1e-45


def test_haar_trace_truncation_warning():
    ga = generator("Aq-SL2", "gamma", Q)
    be = generator("Aq-SL2", "beta", Q)
    with pytest.warns(TruncationWarning):
        haar_trace(ga * be, N=10, M=8)


def test_haar_trace_wrong_algebra():
    with pytest.raises(DomainError):
        haar_trace(generator("Uq-sl2", "A", Q))


# ---------------------------------------------------------------------------
# eigenvectors in the infinite-dimensional representation
# ---------------------------------------------------------------------------

def test_asc_eigenvector_jacobi_action():
    """The image of the spherical element is the expected tridiagonal
    operator, and the stated vectors are its eigenvectors on both spectral
    branches."""
    import mpmath
    th, N = 0.7, 80
    rep = pi_inf(th, N, Q)
    rho = spherical_rho(TAU, math.inf, Q)
    q2 = Q * Q
    qt = _qpow(Q, TAU)
    with mpmath.mp.workprec(PREC):
        eith = NumScalar(mpmath.mp.expj(th), PREC)
    i = NumScalar(1j, PREC)
    for n in (0, 3, 30):
        img = rep.apply_element(rho, rep.basis_vector(n))
        want = [ZERO] * (N + 1)
        if n + 1 <= N:
            want[n + 1] = i * qt * Q ** n * eith * (ONE - q2 ** (n + 1)).sqrt()
        want[n] = -(ONE - qt * qt) * q2 ** n
        if n > 0:
            want[n - 1] = -i * qt * Q ** (n - 1) / eith \
                * (ONE - q2 ** n).sqrt()
        assert max(float(abs(a - b)) for a, b in zip(img, want)) < 1e-45
    for kk in (0, 2):
        for lam in (-q2 ** kk, qt * qt * q2 ** kk):
            v = asc_eigenvector(lam, TAU, th, N, Q)
            img = rep.apply_element(rho, v)
            assert max(float(abs(img[t] - lam * v[t]))
                       for t in range(N - 1)) < 1e-40
            assert float(abs(v[0] - 1)) == 0.0


def test_asc_eigenvector_norms():
    th, N = 0.0, 120
    q2 = Q * Q
    qt = _qpow(Q, TAU)
    for kk in (0, 1, 3):
        v = asc_eigenvector(-q2 ** kk, TAU, th, N, Q)
        nrm = sum((a * a.conjugate() for a in v), ZERO)
        want = Q ** (-2 * kk) * qpochhammer(q2, q2, kk) \
            * qpochhammer(-q2 / (qt * qt), q2, kk) \
            * qpochhammer(-qt * qt, q2, math.inf)
        assert float(abs(nrm - want)) < 1e-40
    for kk in (0, 2):
        v = asc_eigenvector(qt * qt * q2 ** kk, TAU, th, N, Q)
        nrm = sum((a * a.conjugate() for a in v), ZERO)
        want = Q ** (-2 * kk) * qpochhammer(q2, q2, kk) \
            * qpochhammer(-q2 * qt * qt, q2, kk) \
            * qpochhammer(-1 / (qt * qt), q2, math.inf)
        assert float(abs(nrm - want)) < 1e-40


def test_limit_element_shift_action():
    """The infinite-parameter elements shift the eigenvalue by q^{2n},
    with a big q-Jacobi prefactor (phase convention of the theta = 0
    representation)."""
    N = 80
    rep = pi_inf(0.0, N, Q)
    D = generator("Uq-sl2", "D", Q)
    q2 = Q * Q
    qt = _qpow(Q, TAU)
    for (l, n) in [(1, 1), (2, 1), (2, 2)]:
        b = gen_matrix_element(l, 0, n, TAU, math.inf, Q)
        Db = act_left(D, b)
        for kk in (0, 1):
            mu = -q2 ** kk
            v = asc_eigenvector(mu, TAU, 0.0, N, Q)
            lhs = rep.apply_element(Db, v)
            fp = FamilyParams("big-q-jacobi", (n, n, qt * qt, ONE), q2)
            pref = _limit_c(l, n, TAU, Q) \
                * _qpow(Q, n * (Fraction(TAU) + 1)) \
                * eval_poly(fp, l - n, mu)
            vs = asc_eigenvector(mu * q2 ** n, TAU, 0.0, N, Q)
            assert max(float(abs(lhs[t] - pref * vs[t]))
                       for t in range(N - 2 * l)) < 1e-38


# ---------------------------------------------------------------------------
# CSV dumps
# ---------------------------------------------------------------------------

def test_matrix_to_csv_roundtrip():
    sr = spin_rep(HALF, "unitary", Q)
    buf = io.StringIO()
    matrix_to_csv(sr.matrices["B"], buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "row,col,re,im"
    assert len(lines) == 5
    import csv
    rows = list(csv.reader(lines[1:]))
    vals = {(int(r), int(c)): complex(float(re), float(im))
            for r, c, re, im in rows}
    assert abs(vals[(0, 1)] - complex(float(abs(sr.matrices["B"][0][1])),
                                      0)) < 1e-12
    assert vals[(1, 0)] == 0
