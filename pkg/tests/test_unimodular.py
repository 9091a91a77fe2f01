from fractions import Fraction

import numpy as np
import pytest

from perturbed_toeplitz import (DomainError, Regime, RegimeError, ZeroVector, apply_matrix, closed_form_spectrum,
                                eigvec_circulant, g, oracle_eigenvalues, theta_circulant, theta_unimodular)

from conftest import CTX256, lapack_eigenvalues, make


def unit_alphas(seed, count):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        # rational points on the unit circle: ((1 - t^2), 2t) / (1 + t^2)
        t = int(rng.integers(-40, 41)), int(rng.integers(1, 41))
        a, b = t[0] * t[0], t[1] * t[1]
        out.append((f"{(b - a)}/{a + b}", f"{2 * t[0] * t[1]}/{a + b}"))
    return [x for x in out if x not in (("1/1", "0/1"),)]


def parse(a):
    return Fraction(a[0]), Fraction(a[1])


def test_alpha_i_theta():
    c = CTX256
    for n in (3, 4, 9):
        p = make((0, 1), n)
        for j in range(1, n + 1):
            assert abs(theta_unimodular(p, j) - (j - c.real("0.5")) * c.pi / n) <= 8 * c.eps


def test_alpha_i_n4_spectrum():
    c = CTX256
    cf = closed_form_spectrum(make((0, 1), 4))
    ref = [0.15224093497742597, 1.2346331352698199, 2.7653668647301797, 3.8477590650225735]
    assert all(abs(float(a) - b) < 1e-14 for a, b in zip(cf.eigenvalues, ref))
    for k, v in zip((1, 3, 5, 7), cf.eigenvalues):
        assert abs(v - g(k * c.pi / 8, c)) <= 8 * c.eps


def test_theta_unimodular_in_interval_and_increasing():
    c = CTX256
    for a in unit_alphas(1, 15):
        p = make(parse(a), 11)
        if p.regime is not Regime.UNIMODULAR:
            continue
        th = [theta_unimodular(p, j) for j in range(1, 12)]
        assert all(b > a_ for a_, b in zip(th, th[1:]))
        for j, t in enumerate(th, start=1):
            assert (j - 1) * c.pi / 11 < t < j * c.pi / 11


def test_theta_unimodular_errors():
    with pytest.raises(RegimeError):
        theta_unimodular(make(("0.5", "0"), 5), 1)
    with pytest.raises(RegimeError):
        theta_unimodular(make(1, 5), 1)
    with pytest.raises(DomainError):
        theta_unimodular(make((0, 1), 5), 6)


def test_circulant_examples():
    c = CTX256
    assert theta_circulant(1, 6, 1, c) == 0
    cf = closed_form_spectrum(make(1, 6))
    assert [round(float(v), 12) for v in cf.eigenvalues] == [0, 1, 1, 3, 3, 4]
    assert [m for _, m in cf.multiplicity_pattern] == [1, 2, 2, 1]
    cf = closed_form_spectrum(make(-1, 4))
    expected = [g(c.pi / 4, c)] * 2 + [g(3 * c.pi / 4, c)] * 2
    assert all(abs(a - b) <= 8 * c.eps for a, b in zip(cf.eigenvalues, expected))
    ref = [0.5857864376269049, 0.5857864376269049, 3.414213562373095, 3.414213562373095]
    assert all(abs(float(a) - b) < 1e-14 for a, b in zip(cf.eigenvalues, ref))


@pytest.mark.parametrize("n", range(3, 14))
def test_circulant_pairing(n):
    plus = closed_form_spectrum(make(1, n))
    mults = [m for _, m in plus.multiplicity_pattern]
    assert mults[0] == 1
    assert all(m == 2 for m in mults[1:len(mults) - (1 if n % 2 == 0 else 0)])
    if n % 2 == 0:
        assert mults[-1] == 1
    minus = closed_form_spectrum(make(-1, n))
    mults = [m for _, m in minus.multiplicity_pattern]
    assert all(m == 2 for m in mults[:n // 2])
    if n % 2:
        assert mults[-1] == 1
    assert all(b >= a for a, b in zip(plus.eigenvalues, plus.eigenvalues[1:]))


def test_circulant_vectors():
    c = CTX256
    assert all(v == 1 for v in eigvec_circulant(1, 7, 1, c))
    v = eigvec_circulant(1, 6, 2, c)
    assert all(abs(x - c.sin(2 * k * c.pi / 6)) <= 4 * c.eps for k, x in zip(range(1, 7), v))
    with pytest.raises(ZeroVector):
        eigvec_circulant(1, 6, 6, c)
    sub = eigvec_circulant(1, 6, 6, c, substitute=True)
    assert all(abs(x - (-1) ** k) <= 4 * c.eps for k, x in zip(range(1, 7), sub))


def _rel_residual(p, v, lam):
    c = p.ctx
    w = [c.complex(x) for x in v]
    av = apply_matrix(p, w)
    num = c.sqrt(c.fsum(abs(a - lam * x) ** 2 for a, x in zip(av, w)))
    return num / c.sqrt(c.fsum(abs(x) ** 2 for x in w))


@pytest.mark.parametrize("sign", [1, -1])
def test_circulant_residuals(sign):
    c = CTX256
    for n in range(3, 13):
        p = make(sign, n)
        for j in range(1, n + 1):
            try:
                v = eigvec_circulant(sign, n, j, c)
            except ZeroVector:
                v = eigvec_circulant(sign, n, j, c, substitute=True)
            lam = g(theta_circulant(sign, n, j, c), c)
            assert _rel_residual(p, v, lam) <= c.two_pow(-256 + 24)


@pytest.mark.parametrize("sign", [1, -1])
def test_double_eigenvalue_vectors_independent(sign):
    c = CTX256
    for n in range(3, 13):
        th = [theta_circulant(sign, n, j, c) for j in range(1, n + 1)]
        for j in range(1, n):
            if th[j - 1] != th[j]:
                continue
            u = eigvec_circulant(sign, n, j, c, substitute=True)
            w = eigvec_circulant(sign, n, j + 1, c, substitute=True)
            uu = c.fsum(x * x for x in u)
            ww = c.fsum(x * x for x in w)
            uw = c.fsum(x * y for x, y in zip(u, w))
            assert uu * ww - uw * uw > c.real("1e-10")


def test_closed_form_matches_oracle():
    for a in unit_alphas(2, 10):
        al = parse(a)
        for n in (5, 16, 33, 64):
            p = make(al, n)
            if p.regime is not Regime.UNIMODULAR:
                continue
            cf = closed_form_spectrum(p)
            ref = oracle_eigenvalues(p).eigenvalues
            assert max(abs(float(x) - y) for x, y in zip(cf.eigenvalues, ref)) < 1e-12
            assert all(b > a_ for a_, b in zip(cf.eigenvalues, cf.eigenvalues[1:]))


def test_closed_form_matches_lapack():
    cf = closed_form_spectrum(make((0, 1), 4))
    ref = lapack_eigenvalues((0, 1), 4)
    assert max(abs(float(x) - y) for x, y in zip(cf.eigenvalues, ref)) < 1e-14


def test_closed_form_regime_error():
    with pytest.raises(RegimeError):
        closed_form_spectrum(make(("0.5", "0.1"), 5))
    with pytest.raises(DomainError):
        theta_circulant(1, 2, 1, CTX256)
