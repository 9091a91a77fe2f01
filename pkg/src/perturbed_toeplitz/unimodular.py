"""Explicit spectra for |alpha| = 1.

For alpha != +-1 the eta functions are constants and theta_j has a direct
formula.  alpha = 1 (circulant) and alpha = -1 (anti-circulant) have double
eigenvalues; each double eigenvalue gets a sine and a cosine eigenvector,
listed in that order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, RegimeError, ZeroVector
from .precision import PrecisionContext
from .toeplitz import PerturbationParams, Regime, g


def theta_unimodular(p: PerturbationParams, j: int):
    if p.regime is not Regime.UNIMODULAR:
        raise RegimeError("theta_unimodular needs |alpha| = 1, alpha != +-1")
    if not 1 <= j <= p.n:
        raise DomainError(f"index j={j} outside 1..{p.n}")
    c = p.ctx
    lq = p.l_alpha if j % 2 == 0 else 1 / p.l_alpha
    return j * c.pi / p.n - 2 * c.atan(lq) / p.n


def _circulant_numerator(sign: int, j: int) -> int:
    # theta = m * pi / n
    if sign == 1:
        return j - (1 - (-1) ** j) // 2
    if sign == -1:
        return j - (1 + (-1) ** j) // 2
    raise DomainError(f"sign must be +1 or -1, got {sign}")


def theta_circulant(sign: int, n: int, j: int, ctx: PrecisionContext):
    """theta_j for alpha = sign: (j - (1 -+ (-1)^j)/2) pi / n."""
    if n < 3 or not 1 <= j <= n:
        raise DomainError(f"need n >= 3 and 1 <= j <= n, got n={n}, j={j}")
    return _circulant_numerator(sign, j) * ctx.pi / n


def _is_sine_branch(sign: int, j: int) -> bool:
    # alpha = 1: j = 2q is the sine vector; alpha = -1: j = 2q - 1 is.
    return j % 2 == 0 if sign == 1 else j % 2 == 1


def eigvec_circulant(sign: int, n: int, j: int, ctx: PrecisionContext, *, substitute: bool = False):
    """Eigenvector for alpha = sign, index j.

    Raises ZeroVector when the sine branch lands on theta = 0 or pi.  With
    ``substitute=True`` the cosine vector for the same theta is returned in
    that case (all ones for theta = 0, alternating signs for theta = pi).
    """
    m = _circulant_numerator(sign, j)
    sine = _is_sine_branch(sign, j)
    if sine and m % n == 0:
        if not substitute:
            raise ZeroVector(f"sine eigenvector vanishes for alpha={sign}, n={n}, j={j}")
        sine = False
    theta = m * ctx.pi / n
    f = ctx.sin if sine else ctx.cos
    return [f(k * theta) for k in range(1, n + 1)]


@dataclass(frozen=True)
class ClosedFormSpectrum:
    thetas: list
    eigenvalues: list
    multiplicity_pattern: list  # [(eigenvalue, multiplicity), ...] ascending


def _pattern(values, ctx: PrecisionContext):
    tol = ctx.two_pow(16 - ctx.mantissa_bits)
    out = []
    for v in values:
        if out and abs(out[-1][0] - v) <= tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def closed_form_spectrum(p: PerturbationParams) -> ClosedFormSpectrum:
    c = p.ctx
    if p.regime is Regime.UNIMODULAR:
        thetas = [theta_unimodular(p, j) for j in range(1, p.n + 1)]
    elif p.regime is Regime.CIRCULANT_PLUS:
        thetas = [theta_circulant(1, p.n, j, c) for j in range(1, p.n + 1)]
    elif p.regime is Regime.CIRCULANT_MINUS:
        thetas = [theta_circulant(-1, p.n, j, c) for j in range(1, p.n + 1)]
    elif p.regime is Regime.ZERO:
        thetas = [j * c.pi / (p.n + 1) for j in range(1, p.n + 1)]
    else:
        raise RegimeError(f"no closed form for regime {p.regime.value}")
    eigenvalues = [g(t, c) for t in thetas]
    return ClosedFormSpectrum(thetas, eigenvalues, _pattern(eigenvalues, c))
