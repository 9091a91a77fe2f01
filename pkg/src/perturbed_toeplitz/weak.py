"""Interior eigenvalues: the characteristic equation theta = (j*pi + eta(theta))/n.

For every j the eigenvalue lambda_j = g(theta_j) with theta_j in the
localization interval I_{n,j} = ((j-1)pi/n, j*pi/n).  theta_j is the fixed
point of f(x) = (j*pi + eta_j(x))/n, which is a contraction once n > N1.
Below that threshold the same equation is solved by bisection on I_{n,j}.

eta is evaluated from sin x and cos x instead of cot x.  Writing
a = (-1)^(j+1) k cos x and R = sqrt(a^2 + l^2 sin^2 x), the inner quantity
q = (-1)^(j+1) k cot x + sqrt(k^2 cot^2 x + l^2) equals P/Q with

    a >= 0:  P = a + R,        Q = sin x
    a <  0:  P = l^2 sin x,    Q = R - a

Both P and Q are non-negative and never cancel, and the pair stays finite
at x = 0 and x = pi, so eta = -2 atan2(P, Q) (even j) or -2 atan2(Q, P)
(odd j) is analytic through the endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, FallbackUnavailable, NoConvergence, RegimeError
from .precision import PrecisionContext
from .toeplitz import PerturbationParams, Regime, g, g_double_prime, g_prime

MAX_ITERATIONS = 10_000
NEAR_UNIMODULAR_BITS = 40


def stop_tolerance(ctx: PrecisionContext):
    """Fixed-point stop tolerance 2^(-mantissa_bits + 8)."""
    return ctx.two_pow(8 - ctx.mantissa_bits)


@dataclass(frozen=True)
class EtaFunction:
    params: PerturbationParams
    parity: str  # "odd" or "even", the parity of j

    @classmethod
    def for_index(cls, params: PerturbationParams, j: int) -> "EtaFunction":
        return cls(params, "odd" if j % 2 else "even")

    @property
    def odd(self) -> bool:
        return self.parity == "odd"


@dataclass(frozen=True)
class ThetaSolution:
    """A solved change-of-variable point and how it was obtained."""

    theta: object
    j: int
    branch: str                 # "trig", "hyper_below", "hyper_above"
    iterations: int
    final_step: object
    method: str                 # "fixed_point", "bisection", "closed_form", "asymptotic", "oracle"
    flags: tuple = field(default=())
    offset: object = None       # extremes only: theta - ln|alpha| to full relative precision


def _check_eta_domain(p: PerturbationParams):
    if p.regime in (Regime.CIRCULANT_PLUS, Regime.CIRCULANT_MINUS):
        raise DomainError("eta is undefined for alpha = +-1")


def _pq(p: PerturbationParams, odd: bool, x):
    c = p.ctx
    cs, sn = c.cos_sin(x)
    if sn < 0:
        sn = c.real(0)
    k, l = p.k_alpha, p.l_alpha
    a = k * cs if odd else -k * cs
    r = c.sqrt(a * a + (l * sn) ** 2)
    if a >= 0:
        return a + r, sn, r, sn
    return l * l * sn, r - a, r, sn


def eta(e: EtaFunction, x):
    p = e.params
    _check_eta_domain(p)
    c = p.ctx
    x = c.real(x)
    if p.k_alpha == 0:
        lq = p.l_alpha if not e.odd else 1 / p.l_alpha
        return -2 * c.atan(lq)
    P, Q, _, _ = _pq(p, e.odd, x)
    if e.odd:
        return -2 * c.atan2(Q, P)
    return -2 * c.atan2(P, Q)


def eta_prime(e: EtaFunction, x):
    """Derivative of eta; equals -2k P Q / (R sin x (P^2 + Q^2)), rewritten
    per branch so that sin x cancels analytically."""
    p = e.params
    _check_eta_domain(p)
    c = p.ctx
    x = c.real(x)
    k = p.k_alpha
    if k == 0:
        return c.real(0)
    cs, sn = c.cos_sin(x)
    l = p.l_alpha
    a = k * cs if e.odd else -k * cs
    r = c.sqrt(a * a + (l * sn) ** 2)
    if a >= 0:
        s = a + r
        return -2 * k * s / (r * (s * s + sn * sn))
    d = r - a
    l2 = l * l
    return -2 * k * l2 * d / (r * (l2 * l2 * sn * sn + d * d))


def u_root(p: PerturbationParams, parity: str, x):
    """Root of the quadratic in tan(nx/2): k cot x + (-1)^(j+1) sqrt(k^2 cot^2 x + l^2)."""
    if p.regime not in (Regime.WEAK, Regime.ZERO):
        raise RegimeError("u_root is defined for |alpha| < 1 only")
    c = p.ctx
    x = c.real(x)
    if not 0 < x < c.pi:
        raise DomainError(f"u_root needs x in (0, pi), got {x}")
    odd = parity == "odd"
    P, Q, _, _ = _pq(p, odd, x)
    q = P / Q
    return q if odd else -q


def f_map(e: EtaFunction, j: int, n: int, x):
    c = e.params.ctx
    y = (j * c.pi + eta(e, x)) / n
    return min(max(y, c.real(0)), c.pi)    # rounding can push j = n past pi


def _closed_form_unimodular(p: PerturbationParams, j: int):
    c = p.ctx
    lq = p.l_alpha if j % 2 == 0 else 1 / p.l_alpha
    return (j * c.pi - 2 * c.atan(lq)) / p.n


def near_unimodular(p: PerturbationParams) -> bool:
    if p.regime is Regime.UNIMODULAR:
        return True
    if p.regime not in (Regime.WEAK, Regime.STRONG):
        return False
    c = p.ctx
    return abs(p.abs_alpha - 1) < c.two_pow(-NEAR_UNIMODULAR_BITS)


def _check_index(p: PerturbationParams, j: int):
    if p.regime is Regime.STRONG:
        if not 2 <= j <= p.n - 1:
            raise RegimeError(f"for |alpha| > 1 interior indices are 2..n-1, got j={j}")
    elif not 1 <= j <= p.n:
        raise DomainError(f"index j={j} outside 1..{p.n}")


def solve_fixed_point(p: PerturbationParams, j: int, max_iter: int = MAX_ITERATIONS) -> ThetaSolution:
    c = p.ctx
    e = EtaFunction.for_index(p, j)
    tol = stop_tolerance(c)
    jpi = j * c.pi
    n = p.n
    x = (2 * j - 1) * c.pi / (2 * n)
    step = None
    for it in range(1, max_iter + 1):
        x_new = (jpi + eta(e, x)) / n
        step = abs(x_new - x)
        x = x_new
        if step <= tol:
            return ThetaSolution(c.check(x, "solve_theta_interior"), j, "trig", it, step, "fixed_point")
    raise NoConvergence(f"fixed point for j={j}, n={n}", max_iter, step)


def phase_residual(p: PerturbationParams, j: int, x):
    """n x - j pi - eta_j(x); zero exactly at the solutions of tan(nx/2) = u_j(x) in I_{n,j}."""
    c = p.ctx
    return p.n * x - j * c.pi - eta(EtaFunction.for_index(p, j), x)


def solve_bisection(p: PerturbationParams, j: int) -> ThetaSolution:
    c = p.ctx
    n = p.n
    lo = (j - 1) * c.pi / n
    hi = j * c.pi / n
    f_lo = phase_residual(p, j, lo)
    f_hi = phase_residual(p, j, hi)
    if not (f_lo < 0 < f_hi):
        raise FallbackUnavailable(f"no sign change on I_(n,j) for j={j}, n={n} "
                                  f"(f(lo)={c.to_float(f_lo):.3g}, f(hi)={c.to_float(f_hi):.3g})")
    # |theta - f(theta)| <= (1 + max|eta'|/n) * width and max|eta'| <= N1, so
    # shrinking the bracket by that factor keeps the fixed-point residual
    # below the shared stop tolerance.
    tol = stop_tolerance(c) / (1 + p.n1_threshold / n)
    it = 0
    while hi - lo > tol:
        it += 1
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        if phase_residual(p, j, mid) < 0:
            lo = mid
        else:
            hi = mid
    theta = (lo + hi) / 2
    return ThetaSolution(theta, j, "trig", it, hi - lo, "bisection")


def solve_theta_interior(p: PerturbationParams, j: int, method: str = "auto") -> ThetaSolution:
    """theta_j in I_{n,j} solving theta = (j*pi + eta_j(theta))/n.

    method "auto" iterates the map when n > N1 (where it is a proven
    contraction) and bisects otherwise; "fixed_point" and "bisection" force
    one route.  Unimodular and near-unimodular alpha use the closed form.
    """
    _check_eta_domain(p)
    _check_index(p, j)
    if near_unimodular(p):
        flags = () if p.regime is Regime.UNIMODULAR else ("near_unimodular",)
        return ThetaSolution(_closed_form_unimodular(p, j), j, "trig", 0, p.ctx.real(0),
                             "closed_form", flags)
    if method == "auto":
        method = "fixed_point" if p.fixed_point_certified() else "bisection"
    if method == "fixed_point":
        return solve_fixed_point(p, j)
    if method == "bisection":
        return solve_bisection(p, j)
    raise DomainError(f"unknown interior method {method!r}")


def theta_asymptotic_interior(p: PerturbationParams, j: int):
    """j pi/n + eta/n + eta eta'/n^2, everything evaluated at j pi/n."""
    _check_eta_domain(p)
    _check_index(p, j)
    c = p.ctx
    n = p.n
    x = j * c.pi / n
    e = EtaFunction.for_index(p, j)
    h = eta(e, x)
    return x + h / n + h * eta_prime(e, x) / (n * n)


def lambda_asymptotic_interior(p: PerturbationParams, j: int):
    """Three-term expansion of lambda_j around g(j pi/n); error O(n^-3)."""
    _check_eta_domain(p)
    _check_index(p, j)
    c = p.ctx
    n = p.n
    x = j * c.pi / n
    e = EtaFunction.for_index(p, j)
    h = eta(e, x)
    hp = eta_prime(e, x)
    gp = g_prime(x, c)
    return (g(x, c) + gp * h / n
            + (gp * h * hp + g_double_prime(x, c) * h * h / 2) / (n * n))
