from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perturbed_toeplitz import (DomainError, PoleError, Regime, RegimeError, apply_matrix, build_matrix,
                                charpoly_cheb, charpoly_hyper, charpoly_trig, chebyshev_u, g, g_minus,
                                g_minus_inverse, g_plus, g_plus_inverse, g_inverse, symbol_value)
from perturbed_toeplitz.toeplitz import g_double_prime, g_prime

from conftest import CTX256, CTX53, make, random_alphas


def test_build_matrix_zero():
    m = build_matrix(make(0, 3))
    expected = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert [[m[i, j] for j in range(3)] for i in range(3)] == expected


def test_build_matrix_corners():
    m = build_matrix(make((2, 1), 6))
    assert m[5, 0] == CTX256.complex(-2, -1)
    assert m[0, 5] == CTX256.complex(-2, 1)
    for i in range(6):
        for j in range(6):
            if (i, j) in ((5, 0), (0, 5)):
                continue
            want = 2 if i == j else (-1 if abs(i - j) == 1 else 0)
            assert m[i, j] == want


@given(st.fractions(-3, 3, max_denominator=1000), st.fractions(-3, 3, max_denominator=1000),
       st.integers(3, 12))
def test_build_matrix_hermitian_and_trace(re, im, n):
    m = build_matrix(make((re, im), n))
    assert m.is_hermitian()
    assert m.trace() == 2 * n


def test_apply_matrix_matches_dense():
    p = make(("0.3", "-1.7"), 7)
    m = build_matrix(p)
    v = [CTX256.complex(k, 1 - k) for k in range(7)]
    dense = [sum(m[i, j] * v[j] for j in range(7)) for i in range(7)]
    assert all(abs(a - b) == 0 for a, b in zip(apply_matrix(p, v), dense))


def test_dense_limit():
    with pytest.raises(DomainError):
        build_matrix(make(0, 5000))


@pytest.mark.parametrize("alpha,regime", [
    (0, Regime.ZERO), (1, Regime.CIRCULANT_PLUS), (-1, Regime.CIRCULANT_MINUS),
    ((0, 1), Regime.UNIMODULAR), (("0.6", "0.8"), Regime.UNIMODULAR), (0.6 + 0.8j, Regime.UNIMODULAR),
    (("0.3", "0.2"), Regime.WEAK), (("2", "1"), Regime.STRONG),
    (("0.6", "0.8000000000000000001"), Regime.STRONG),
])
def test_regime(alpha, regime):
    assert make(alpha, 5).regime is regime


def test_n_must_be_at_least_three():
    with pytest.raises(DomainError):
        make(0, 2)


@given(st.fractions(-3, 3, max_denominator=500), st.fractions(-3, 3, max_denominator=500))
def test_derived_constants(re, im):
    p = make((re, im), 10)
    c = CTX256
    a = complex(re, im)
    if a != -1:
        k = (1 - abs(a) ** 2) / abs(1 + a) ** 2
        l = abs(1 - a) / abs(1 + a)
        assert abs(float(p.k_alpha) - k) <= 1e-12 * max(1, abs(k))
        assert abs(float(p.l_alpha) - l) <= 1e-12 * max(1, l)
        assert (p.k_alpha == 0) == (p.abs2 == 1)
    else:
        assert p.k_alpha is None
    r = float(p.abs_alpha)
    if p.abs2 != 1:
        assert abs(float(p.n1_threshold) - 4 * (r + 1) / abs(r - 1)) <= 1e-9 * float(p.n1_threshold)
    else:
        assert p.n1_threshold is None
    if p.abs2 > 1:
        n2 = (20 * np.log(r + 1) - 4 * np.log(np.log(r))) / np.log(r)
        assert abs(float(p.n2_threshold) - n2) <= 1e-9 * abs(n2)
        assert abs(float(p.s_alpha) - (r - 1) ** 2 / r) <= 1e-12 * max(1, (r - 1) ** 2 / r)
    else:
        assert p.n2_threshold is None and p.s_alpha is None
    assert c.real(p.abs2) >= 0


def test_s_alpha_two():
    assert make(2, 8).s_alpha == CTX256.real("0.5")


def test_symbol_examples():
    c = CTX256
    assert abs(symbol_value(make(0, 5), c.pi) - 4) <= 4 * c.eps
    # n = 2 is below the family's minimum size; at x = 0 the value does not depend on n
    assert symbol_value(make(1, 3), 0) == -2


def test_symbol_against_reference():
    ref = mpmath.MPContext()
    ref.prec = 4000
    x = ref.pi / 5
    exact = 4 * ref.sin(x / 2) ** 2 - 2 * ref.re(ref.mpc(2, 1) * ref.exp(1j * 5 * x))
    c = CTX256
    val = symbol_value(make((2, 1), 6), c.pi / 5)
    assert abs(val - exact) <= 16 * c.eps


@given(st.floats(0, 3.14))
def test_symbol_zero_alpha_is_g(x):
    c = CTX256
    assert symbol_value(make(0, 7), x) == g(x, c)


def test_chebyshev_examples():
    c = CTX256
    assert chebyshev_u(2, 1, c) == 3
    assert abs(chebyshev_u(5, c.cos(c.pi / 6), c)) <= 64 * c.eps
    assert chebyshev_u(0, c.real("0.3"), c) == 1


def test_chebyshev_beyond_one_matches_exact_recurrence():
    c = CTX256
    t = Fraction(13, 10)
    u_prev, u = Fraction(1), 2 * t
    for _ in range(9):
        u_prev, u = u, 2 * t * u - u_prev
    exact = c.real(u)
    assert abs(chebyshev_u(10, c.real(t), c) - exact) <= 64 * c.eps * abs(exact)
    ref = mpmath.MPContext()
    ref.prec = 4000
    th = ref.acosh(ref.mpf(13) / 10)
    assert abs(exact - ref.sinh(11 * th) / ref.sinh(th)) <= 4 * c.eps * abs(exact)


@given(st.integers(0, 60), st.floats(0.01, 3.13))
def test_chebyshev_trig_form(m, x):
    c = CTX256
    x = c.real(x)
    val = chebyshev_u(m, c.cos(x), c)
    assert abs(val - c.sin((m + 1) * x) / c.sin(x)) <= c.two_pow(-200) * (m + 1) ** 2 / c.sin(x)


@given(st.integers(0, 40), st.floats(-6, -1.001))
def test_chebyshev_negative_side(m, t):
    c = CTX256
    val = chebyshev_u(m, c.real(t), c)
    mirror = chebyshev_u(m, c.real(-t), c)
    assert abs(val - (-1) ** m * mirror) <= c.two_pow(-200) * abs(mirror)


def test_chebyshev_negative_degree():
    with pytest.raises(DomainError):
        chebyshev_u(-1, 0, CTX256)


@given(st.fractions(-3, 3, max_denominator=100), st.fractions(-3, 3, max_denominator=100),
       st.integers(3, 40))
def test_charpoly_at_zero_and_four(re, im, n):
    p = make((re, im), n)
    a2 = re * re + im * im
    at0 = (-1) ** n * (n * (1 - a2) + (1 - re) ** 2 + im ** 2)
    sign = (-1) ** n
    at4 = n * (1 - a2) + (1 - sign * re) ** 2 + im ** 2
    c = CTX256
    assert abs(charpoly_cheb(p, 0) - at0) <= c.two_pow(-230) * max(1, abs(at0))
    assert abs(charpoly_cheb(p, 4) - at4) <= c.two_pow(-230) * max(1, abs(at4))


def test_charpoly_zero_alpha_n4_at_two():
    assert charpoly_cheb(make(0, 4), 2) == 1


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(3, 20), st.floats(-3, 7))
@settings(max_examples=60)
def test_charpoly_matches_dense_determinant(re, im, n, lam):
    p = make((re, im), n, CTX53)
    dense = build_matrix(p).to_numpy()
    det = np.linalg.det(lam * np.eye(n) - dense).real
    val = float(charpoly_cheb(p, lam))
    scale = max(1.0, abs(lam - 2) + 2 + abs(complex(re, im))) ** n
    assert abs(val - det) <= 1e-10 * scale


@given(st.fractions(-3, 3, max_denominator=1000), st.fractions(-3, 3, max_denominator=1000),
       st.integers(3, 64), st.floats(0.001, 3.14))
@settings(max_examples=200)
def test_three_forms_trig(re, im, n, x):
    p = make((re, im), n)
    if p.regime in (Regime.CIRCULANT_PLUS, Regime.CIRCULANT_MINUS):
        return
    c = CTX256
    try:
        trig = charpoly_trig(p, x)
    except PoleError:
        return
    cheb = charpoly_cheb(p, g(x, c))
    assert abs(trig - cheb) <= c.two_pow(-256 + 16) * max(1, abs(cheb))


@given(st.fractions(-3, 3, max_denominator=1000), st.fractions(-3, 3, max_denominator=1000),
       st.integers(3, 64), st.floats(0.01, 3.0), st.sampled_from(["below", "above"]))
@settings(max_examples=200)
def test_three_forms_hyper(re, im, n, x, branch):
    p = make((re, im), n)
    c = CTX256
    lam = g_minus(x, c) if branch == "below" else g_plus(x, c)
    cheb = charpoly_cheb(p, lam)
    hyp = charpoly_hyper(p, x, branch)
    assert abs(hyp - cheb) <= c.two_pow(-256 + 16) * max(1, abs(cheb))


def test_charpoly_hyper_example():
    p = make((2, 1), 10)
    c = CTX256
    for branch, lam in (("below", g_minus(c.real("0.3"), c)), ("above", g_plus(c.real("0.3"), c))):
        assert abs(charpoly_hyper(p, c.real("0.3"), branch) - charpoly_cheb(p, lam)) <= c.two_pow(-230)


def test_charpoly_hyper_domain():
    with pytest.raises(DomainError):
        charpoly_hyper(make(2, 5), 0, "below")
    with pytest.raises(DomainError):
        charpoly_hyper(make(2, 5), 1, "sideways")


def test_charpoly_hyper_no_negative_root_in_weak_regime():
    p = make(("0.3", "0"), 20)   # N1 ~ 7.4
    c = CTX256
    vals = [charpoly_hyper(p, c.real(k) / 50, "below") for k in range(1, 400)]
    assert all(v > 0 for v in vals) or all(v < 0 for v in vals)


def test_charpoly_trig_zero_alpha_roots():
    p = make(0, 7)
    c = CTX256
    for j in range(1, 8):
        assert abs(charpoly_trig(p, j * c.pi / 8)) <= c.two_pow(-240)


def test_charpoly_trig_nonzero_at_grid():
    p = make(("0.4", "0.5"), 9)
    c = CTX256
    for j in range(1, 9):
        x = j * c.pi / 9
        assert abs(charpoly_cheb(p, g(x, c))) > c.two_pow(-100)
        if j % 2 == 0:
            assert abs(charpoly_trig(p, x)) > c.two_pow(-100)
        else:
            with pytest.raises(PoleError):
                charpoly_trig(p, x)


def test_charpoly_trig_errors():
    c = CTX256
    with pytest.raises(RegimeError):
        charpoly_trig(make(1, 5), 1)
    with pytest.raises(DomainError):
        charpoly_trig(make(("0.5", "0"), 5), 0)
    with pytest.raises(PoleError):
        charpoly_trig(make(("0.5", "0"), 6), c.pi / 6)


def test_g_family_examples():
    c = CTX256
    assert g(0, c) == 0
    assert abs(g(c.pi, c) - 4) <= 4 * c.eps
    assert abs(g(c.pi / 2, c) - 2) <= 4 * c.eps
    assert g_minus(0, c) == 0
    assert g_plus(0, c) == 4
    x = c.real("0.7")
    assert g_prime(x, c) == 2 * c.sin(x)
    assert g_double_prime(x, c) == 2 * c.cos(x)


def test_g_complex_extension():
    m = mpmath.MPContext()
    m.prec = 256
    c = CTX256
    gi = 4 * m.sin(m.mpc(0, 1) / 2) ** 2
    gpi = 4 * m.sin((m.pi + m.mpc(0, 1)) / 2) ** 2
    assert abs(gi - g_minus(1, c)) <= 8 * c.eps
    assert abs(gpi - g_plus(1, c)) <= 8 * c.eps * 5


def test_g_monotone():
    c = CTX256
    xs = [k * c.pi / 200 for k in range(201)]
    vals = [g(x, c) for x in xs]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    hs = [c.real(k) / 20 for k in range(200)]
    lo = [g_minus(x, c) for x in hs]
    hi = [g_plus(x, c) for x in hs]
    assert all(b < a for a, b in zip(lo, lo[1:]))
    assert all(b > a for a, b in zip(hi, hi[1:]))


@given(st.floats(0, 3.14159))
def test_g_inverse(x):
    c = CTX256
    assert abs(g_inverse(g(x, c), c) - x) <= c.two_pow(-200)


@given(st.floats(0.001, 20))
def test_hyperbolic_inverses(x):
    c = CTX256
    assert abs(g_minus_inverse(g_minus(x, c), c) - x) <= c.two_pow(-200) * x
    assert abs(g_plus_inverse(g_plus(x, c), c) - x) <= c.two_pow(-200) * x


def test_inverse_domains():
    c = CTX256
    with pytest.raises(DomainError):
        g_inverse(5, c)
    with pytest.raises(DomainError):
        g_minus_inverse(1, c)
    with pytest.raises(DomainError):
        g_plus_inverse(3, c)


def test_with_n_and_precision():
    p = make(("0.25", "-0.5"), 9)
    q = p.with_n(12)
    assert q.n == 12 and q.alpha_re == p.alpha_re
    r = p.with_precision(CTX53)
    assert r.ctx == CTX53 and r.abs2 == p.abs2


def test_random_alpha_helper_is_seeded():
    assert random_alphas(3, 4, 0, 1) == random_alphas(3, 4, 0, 1)
