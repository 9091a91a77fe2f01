"""The matrix family A(alpha, n) and its characteristic polynomial.

A(alpha, n) is the n x n Hermitian tridiagonal Toeplitz matrix with 2 on the
diagonal, -1 on both off-diagonals, -alpha in the corner (n, 1) and
-conj(alpha) in the corner (1, n).

alpha is kept as an exact pair of rationals, so regime boundaries
(alpha = 0, +-1, |alpha| = 1) are decided without rounding.  The derived
constants are rounded once, to the precision of the attached context.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, PoleError, RegimeError
from .precision import DEFAULT_BITS, PrecisionContext, as_fraction, tanh_half_n

DENSE_LIMIT = 4096


class Regime(enum.Enum):
    ZERO = "zero"
    WEAK = "weak"
    UNIMODULAR = "unimodular"
    CIRCULANT_PLUS = "circulant_plus"
    CIRCULANT_MINUS = "circulant_minus"
    STRONG = "strong"


def _parse_alpha(alpha) -> tuple[Fraction, Fraction]:
    if isinstance(alpha, tuple):
        re, im = alpha
        return as_fraction(re), as_fraction(im)
    if isinstance(alpha, complex):
        return as_fraction(alpha.real), as_fraction(alpha.imag)
    if hasattr(alpha, "imag") and hasattr(alpha, "real") and not isinstance(alpha, (int, Fraction)):
        return as_fraction(alpha.real), as_fraction(alpha.imag)
    return as_fraction(alpha), Fraction(0)


@dataclass(frozen=True)
class PerturbationParams:
    """(alpha, n) together with the regime and the derived constants.

    Construct through :meth:`create`.  ``alpha_re``/``alpha_im`` are exact;
    every other numeric field is a Real of ``ctx``.  Fields that are
    meaningless for the regime are ``None`` (e.g. ``n2_threshold`` for
    |alpha| <= 1, ``k_alpha`` for alpha = -1).
    """

    alpha_re: Fraction
    alpha_im: Fraction
    n: int
    ctx: PrecisionContext = field(repr=False)
    regime: Regime
    abs2: Fraction                   # |alpha|^2, exact
    abs_alpha: object
    alpha: object                    # Complex
    k_alpha: object
    l_alpha: object
    n1_threshold: object
    n2_threshold: object
    s_alpha: object
    log_abs: object = None           # ln|alpha|, accurate near |alpha| = 1

    @classmethod
    def create(cls, alpha, n: int, ctx: PrecisionContext | None = None) -> "PerturbationParams":
        ctx = ctx or PrecisionContext(DEFAULT_BITS)
        if int(n) != n or n < 3:
            raise DomainError(f"n must be an integer >= 3, got {n!r}")
        n = int(n)
        re, im = _parse_alpha(alpha)
        abs2 = re * re + im * im
        plus2 = (1 + re) ** 2 + im ** 2     # |1 + alpha|^2
        minus2 = (1 - re) ** 2 + im ** 2    # |1 - alpha|^2

        if abs2 == 0:
            regime = Regime.ZERO
        elif im == 0 and re == 1:
            regime = Regime.CIRCULANT_PLUS
        elif im == 0 and re == -1:
            regime = Regime.CIRCULANT_MINUS
        elif abs2 == 1:
            regime = Regime.UNIMODULAR
        elif abs2 < 1:
            regime = Regime.WEAK
        else:
            regime = Regime.STRONG

        abs_alpha = ctx.sqrt(ctx.real(abs2))
        k_alpha = ctx.real((1 - abs2) / plus2) if plus2 else None
        l_alpha = ctx.sqrt(ctx.real(minus2 / plus2)) if plus2 else None
        n1 = n2 = s = log_a = None
        if Fraction(1, 2) <= abs2 <= 2:
            log_a = ctx.log1p(ctx.real(abs2 - 1)) / 2
        elif abs2 != 0:
            log_a = ctx.ln(ctx.real(abs2)) / 2
        if abs2 != 1:
            # |alpha| - 1 = (|alpha|^2 - 1)/(|alpha| + 1) avoids cancellation
            gap = ctx.real(abs2 - 1) / (abs_alpha + 1)
            n1 = 4 * (abs_alpha + 1) / abs(gap)
            if abs2 > 1:
                n2 = (20 * ctx.ln(abs_alpha + 1) - 4 * ctx.ln(log_a)) / log_a
                s = gap * gap / abs_alpha
        return cls(re, im, n, ctx, regime, abs2, abs_alpha, ctx.complex(re, im),
                   k_alpha, l_alpha, n1, n2, s, log_a)

    def with_n(self, n: int) -> "PerturbationParams":
        return PerturbationParams.create((self.alpha_re, self.alpha_im), n, self.ctx)

    def with_precision(self, ctx: PrecisionContext) -> "PerturbationParams":
        return PerturbationParams.create((self.alpha_re, self.alpha_im), self.n, ctx)

    @property
    def alpha_complex(self) -> complex:
        return complex(float(self.alpha_re), float(self.alpha_im))

    def abs_plus2(self, sign: int = 1) -> Fraction:
        """|alpha + sign|^2, exact."""
        return (self.alpha_re + sign) ** 2 + self.alpha_im ** 2

    def abs_minus2(self, sign: int = 1) -> Fraction:
        """|alpha - sign|^2, exact."""
        return (self.alpha_re - sign) ** 2 + self.alpha_im ** 2

    @property
    def det_value(self) -> Fraction:
        """det A = n(1 - |alpha|^2) + |1 - alpha|^2 (exact)."""
        return self.n * (1 - self.abs2) + self.abs_minus2(1)

    def fixed_point_certified(self) -> bool:
        """True when the interior map is provably contractive (n > N1)."""
        return self.n1_threshold is not None and self.n > self.n1_threshold

    def extremes_certified(self) -> bool:
        return self.regime is Regime.STRONG and self.n > self.n2_threshold


@dataclass(frozen=True)
class DenseMatrix:
    """Read-only dense copy of A(alpha, n); entries are Complex values."""

    n: int
    entries: np.ndarray  # object array of Complex

    def __getitem__(self, ij):
        return self.entries[ij]

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(z) for z in row] for row in self.entries], dtype=np.complex128)

    def is_hermitian(self) -> bool:
        m = self.entries
        return all(m[i, j] == m[j, i].conjugate() for i in range(self.n) for j in range(self.n))

    def trace(self):
        return sum(self.entries[i, i] for i in range(self.n))


def build_matrix(p: PerturbationParams) -> DenseMatrix:
    n = p.n
    if n > DENSE_LIMIT:
        raise DomainError(f"dense matrices are only built for n <= {DENSE_LIMIT}")
    c = p.ctx
    zero, two, minus_one = c.complex(0), c.complex(2), c.complex(-1)
    m = np.empty((n, n), dtype=object)
    m.fill(zero)
    for i in range(n):
        m[i, i] = two
        if i + 1 < n:
            m[i, i + 1] = minus_one
            m[i + 1, i] = minus_one
    m[n - 1, 0] = -p.alpha
    m[0, n - 1] = -c.conj(p.alpha)
    return DenseMatrix(n, m)


def apply_matrix(p: PerturbationParams, v):
    """A(alpha, n) @ v in O(n) from the band and the two corners."""
    n = p.n
    alpha = p.alpha
    out = [None] * n
    for k in range(n):
        acc = 2 * v[k]
        if k > 0:
            acc -= v[k - 1]
        if k + 1 < n:
            acc -= v[k + 1]
        out[k] = acc
    out[0] -= p.ctx.conj(alpha) * v[n - 1]
    out[n - 1] -= alpha * v[0]
    return out


# -- changes of variable ---------------------------------------------------

def g(x, ctx: PrecisionContext):
    s = ctx.sin(ctx.real(x) / 2)
    return 4 * s * s


def g_prime(x, ctx: PrecisionContext):
    return 2 * ctx.sin(x)


def g_double_prime(x, ctx: PrecisionContext):
    return 2 * ctx.cos(x)


def g_minus(x, ctx: PrecisionContext):
    s = ctx.sinh(ctx.real(x) / 2)
    return -4 * s * s


def g_plus(x, ctx: PrecisionContext):
    s = ctx.sinh(ctx.real(x) / 2)
    return 4 + 4 * s * s


def g_inverse(lam, ctx: PrecisionContext):
    """theta in [0, pi] with g(theta) = lam, for lam in [0, 4]."""
    lam = ctx.real(lam)
    if lam < 0 or lam > 4:
        raise DomainError(f"g^-1 needs lam in [0, 4], got {lam}")
    return 2 * ctx.atan2(ctx.sqrt(lam), ctx.sqrt(4 - lam))


def g_minus_inverse(lam, ctx: PrecisionContext):
    lam = ctx.real(lam)
    if lam > 0:
        raise DomainError(f"g_-^-1 needs lam <= 0, got {lam}")
    return 2 * ctx.asinh(ctx.sqrt(-lam) / 2)


def g_plus_inverse(lam, ctx: PrecisionContext):
    lam = ctx.real(lam)
    if lam < 4:
        raise DomainError(f"g_+^-1 needs lam >= 4, got {lam}")
    return 2 * ctx.asinh(ctx.sqrt(lam - 4) / 2)


def symbol_value(p: PerturbationParams, x):
    """Generating symbol 4 sin^2(x/2) - 2 Re(alpha e^{i(n-1)x})."""
    c = p.ctx
    x = c.real(x)
    cs, sn = c.cos_sin((p.n - 1) * x)
    re_part = p.alpha.real * cs - p.alpha.imag * sn
    return g(x, c) - 2 * re_part


# -- Chebyshev polynomials of the second kind ------------------------------

def chebyshev_u(m: int, t, ctx: PrecisionContext):
    """U_m(t).

    Three-term recurrence while |t| <= 1 + 2^-20; beyond that the
    recurrence amplifies rounding error, so the sinh closed form is used.
    """
    if m < 0:
        raise DomainError(f"Chebyshev degree must be >= 0, got {m}")
    t = ctx.real(t)
    if abs(t) <= 1 + ctx.two_pow(-20):
        u_prev, u = ctx.real(1), 2 * t
        if m == 0:
            return u_prev
        for _ in range(m - 1):
            u_prev, u = u, 2 * t * u - u_prev
        return u
    sign = 1 if t > 0 or m % 2 == 0 else -1
    th = ctx.acosh(abs(t))
    return sign * ctx.check(ctx.sinh((m + 1) * th) / ctx.sinh(th), "chebyshev_u")


def charpoly_cheb(p: PerturbationParams, lam):
    """det(lam I - A) = U_n(t) - |alpha|^2 U_{n-2}(t) - 2(-1)^n Re(alpha), t = (lam-2)/2."""
    c = p.ctx
    n = p.n
    t = (c.real(lam) - 2) / 2
    re_term = 2 * c.real(p.alpha_re)
    if n % 2 == 0:
        re_term = -re_term
    return chebyshev_u(n, t, c) - c.real(p.abs2) * chebyshev_u(n - 2, t, c) + re_term


def _require_not_circulant(p: PerturbationParams):
    if p.regime in (Regime.CIRCULANT_PLUS, Regime.CIRCULANT_MINUS):
        raise RegimeError("the trigonometric form is undefined for alpha = +-1")


def charpoly_trig(p: PerturbationParams, x):
    """det(g(x) I - A) in the tan(nx/2) form, for x in (0, pi)."""
    _require_not_circulant(p)
    c = p.ctx
    x = c.real(x)
    if not 0 < x < c.pi:
        raise DomainError(f"charpoly_trig needs x in (0, pi), got {x}")
    half = p.n * x / 2
    cs, sn = c.cos_sin(half)
    if abs(cs) < c.two_pow(-(c.mantissa_bits // 2)):
        raise PoleError(f"tan(nx/2) pole at x={x}")
    tn = sn / cs
    cot = c.cos(x) / c.sin(x)
    k, l = p.k_alpha, p.l_alpha
    sign = -1 if p.n % 2 == 0 else 1   # (-1)^(n+1)
    num = sign * c.real(p.abs_plus2(1)) * (tn * tn - 2 * k * cot * tn - l * l)
    return num / (1 + tn * tn)


def charpoly_hyper(p: PerturbationParams, x, branch: str):
    """det(lam I - A) at lam = g_-(x) ("below") or g_+(x) ("above"), x > 0."""
    c = p.ctx
    x = c.real(x)
    if not x > 0:
        raise DomainError(f"charpoly_hyper needs x > 0, got {x}")
    t = tanh_half_n(x, p.n, c)
    # 1 - t^2 = 4e/(1+e)^2 with e = exp(-nx); formed directly to avoid cancellation.
    e = c.exp(-p.n * x)
    one_minus_t2 = 4 * e / ((1 + e) * (1 + e))
    coth = c.cosh(x) / c.sinh(x)
    cross = 2 * c.real(p.abs2 - 1) * t * coth
    if branch == "below":
        a, b = p.abs_plus2(1), p.abs_minus2(1)
        prefactor = -1 if p.n % 2 else 1
    elif branch == "above":
        sigma = -1 if p.n % 2 else 1
        a, b = p.abs_plus2(sigma), p.abs_minus2(sigma)
        prefactor = 1
    else:
        raise DomainError(f"branch must be 'below' or 'above', got {branch!r}")
    val = prefactor * (c.real(a) * t * t - cross + c.real(b)) / one_minus_t2
    return c.check(val, "charpoly_hyper")
