"""Extreme eigenvalues for |alpha| > 1.

With lam = g_-(x) (below 0) or lam = g_+(x) (above 4) the characteristic
equation becomes x = arctanh(psi(tanh(nx/2))).  For n > N2 the right-hand
side maps S = [ln|alpha|/2, 3 ln|alpha|/2] into itself with Lipschitz
constant at most 4/(|alpha|+1)^2, so plain iteration from ln|alpha|
converges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, NoConvergence, RegimeError
from .precision import arctanh_safe, tanh_half_n
from .toeplitz import PerturbationParams, Regime, g_minus, g_plus
from .weak import MAX_ITERATIONS, ThetaSolution, stop_tolerance


def _require_strong(p: PerturbationParams):
    if p.regime is not Regime.STRONG:
        raise RegimeError(f"strong-perturbation routine called with regime {p.regime.value}")


@dataclass(frozen=True)
class StrongSegment:
    lower: object
    upper: object

    @classmethod
    def of(cls, p: PerturbationParams) -> "StrongSegment":
        _require_strong(p)
        half = p.log_abs / 2
        return cls(half, 3 * half)

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class PsiFunction:
    params: PerturbationParams
    corner_sign: str  # "plus" for the first eigenvalue, "alternating" for the last

    @classmethod
    def for_extreme(cls, p: PerturbationParams, which: str) -> "PsiFunction":
        if which == "first":
            return cls(p, "plus")
        if which == "last":
            return cls(p, "alternating")
        raise DomainError(f"which must be 'first' or 'last', got {which!r}")

    @property
    def sigma(self) -> int:
        if self.corner_sign == "plus":
            return 1
        return -1 if self.params.n % 2 else 1

    def coefficients(self):
        p = self.params
        c = p.ctx
        s = self.sigma
        return c.real(2 * (p.abs2 - 1)), c.real(p.abs_plus2(s)), c.real(p.abs_minus2(s))


def psi(f: PsiFunction, t):
    """2(|alpha|^2-1) t / (|alpha+s|^2 t^2 + |alpha-s|^2)."""
    _require_strong(f.params)
    num, a, b = f.coefficients()
    t = f.params.ctx.real(t)
    return num * t / (a * t * t + b)


def psi_prime(f: PsiFunction, t):
    _require_strong(f.params)
    num, a, b = f.coefficients()
    t = f.params.ctx.real(t)
    den = a * t * t + b
    return num * (b - a * t * t) / (den * den)


def strong_map(p: PerturbationParams, which: str, x):
    """arctanh(psi(tanh(nx/2))); raises ArctanhDomain if psi >= 1."""
    f = PsiFunction.for_extreme(p, which)
    return arctanh_safe(psi(f, tanh_half_n(x, p.n, p.ctx)), p.ctx)


def solve_theta_extreme(p: PerturbationParams, which: str, *, max_iter: int = MAX_ITERATIONS,
                        require_certified: bool = True) -> ThetaSolution:
    """Fixed point of the strong map started at ln|alpha|.

    lambda_1 = g_-(theta_first), lambda_n = g_+(theta_last).  The map is only
    proven contractive for n > N2; pass ``require_certified=False`` to iterate
    anyway (NoConvergence or ArctanhDomain then signal failure).
    """
    _require_strong(p)
    if require_certified and not p.n > p.n2_threshold:
        raise RegimeError(f"n={p.n} <= N2={float(p.n2_threshold):.4g}: extreme eigenvalues "
                          f"are not certified outside [0, 4]")
    c = p.ctx
    j = 1 if which == "first" else p.n
    branch = "hyper_below" if which == "first" else "hyper_above"
    tol = stop_tolerance(c)
    x = p.log_abs
    step = None
    for it in range(1, max_iter + 1):
        x_new = strong_map(p, which, x)
        step = abs(x_new - x)
        x = x_new
        if step <= tol:
            offset = extreme_offset(p, which, max_iter=max_iter)
            return ThetaSolution(c.check(x, "solve_theta_extreme"), j, branch, it, step, "fixed_point",
                                 offset=offset)
    raise NoConvergence(f"strong fixed point ({which}), n={p.n}", max_iter, step)


def extreme_offset(p: PerturbationParams, which: str, *, max_iter: int = MAX_ITERATIONS):
    """delta = theta - ln|alpha| for the extreme solution, with full relative accuracy.

    delta shrinks like |alpha|^-n, far below the absolute resolution of
    theta itself.  Since psi(1) = tanh(ln|alpha|), subtracting the two
    arctanh values gives the equivalent fixed-point equation

        delta = arctanh((psi(T) - psi(1)) / (1 - psi(T) psi(1))),
        psi(T) - psi(1) = -2(|a|^2-1) (1-T) (b - aT) / ((aT^2 + b)(a + b)),

    with 1 - T = 2e/(1+e), e = exp(-n (ln|alpha| + delta)), in which no
    term cancels.
    """
    _require_strong(p)
    c = p.ctx
    num, a, b = PsiFunction.for_extreme(p, which).coefficients()
    psi1 = num / (a + b)
    base = p.log_abs
    tol = stop_tolerance(c)
    delta = c.real(0)
    step = None
    for _ in range(max_iter):
        e = c.exp(-p.n * (base + delta))
        gap = 2 * e / (1 + e)          # 1 - tanh(n theta / 2)
        t = 1 - gap
        d_psi = -num * gap * (b - a * t) / ((a * t * t + b) * (a + b))
        new = arctanh_safe(d_psi / (1 - (psi1 + d_psi) * psi1), c)
        step = abs(new - delta)
        delta = new
        if step <= tol * abs(delta):
            return delta
    raise NoConvergence(f"extreme offset ({which}), n={p.n}", max_iter, step)


def extreme_asymptotic_error(p: PerturbationParams, which: str, offset):
    """lambda^asympt - lambda for an extreme eigenvalue, from delta = theta - ln|alpha|.

    g_-(L) - g_-(L + d) = 4 sinh(L + d/2) sinh(d/2); the g_+ case flips the sign.
    """
    _require_strong(p)
    c = p.ctx
    val = 4 * c.sinh(p.log_abs + offset / 2) * c.sinh(offset / 2)
    if which == "first":
        return val
    if which == "last":
        return -val
    raise DomainError(f"which must be 'first' or 'last', got {which!r}")


def extreme_eigenvalue(p: PerturbationParams, sol: ThetaSolution):
    if sol.branch == "hyper_below":
        return g_minus(sol.theta, p.ctx)
    if sol.branch == "hyper_above":
        return g_plus(sol.theta, p.ctx)
    raise DomainError(f"not an extreme solution: branch {sol.branch!r}")


def lambda_limit_extreme(p: PerturbationParams, which: str):
    """-s_alpha for the first eigenvalue, 4 + s_alpha for the last."""
    _require_strong(p)
    if which == "first":
        return -p.s_alpha
    if which == "last":
        return 4 + p.s_alpha
    raise DomainError(f"which must be 'first' or 'last', got {which!r}")


def theta_limit_bound(p: PerturbationParams):
    """C4(alpha)/|alpha|^n with C4 = |alpha|^3 exp(|alpha|^3 / ln|alpha|)."""
    _require_strong(p)
    c = p.ctx
    a = p.abs_alpha
    a3 = a ** 3
    return a3 * c.exp(a3 / p.log_abs - p.n * p.log_abs)


def spectral_gaps(p: PerturbationParams, eigenvalues):
    """(lambda_2 - lambda_1, lambda_n - lambda_{n-1}); both tend to s_alpha."""
    _require_strong(p)
    if len(eigenvalues) != p.n:
        raise DomainError("spectrum length does not match n")
    return eigenvalues[1] - eigenvalues[0], eigenvalues[-1] - eigenvalues[-2]
