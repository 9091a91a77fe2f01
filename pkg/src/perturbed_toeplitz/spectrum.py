"""Full spectra of A(alpha, n): dispatch, assembly, eigenvectors, residuals."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, RegimeError, SolverError, ZeroVector
from .oracle import extreme_eigenvalues_bisection, oracle_eigenvalues
from .precision import FAST_BITS
from .strong import extreme_eigenvalue, solve_theta_extreme
from .toeplitz import (DENSE_LIMIT, PerturbationParams, Regime, apply_matrix, g, g_inverse, g_minus_inverse,
                       g_plus_inverse)
from .unimodular import closed_form_spectrum, eigvec_circulant
from .weak import (ThetaSolution, lambda_asymptotic_interior, solve_theta_interior,
                   theta_asymptotic_interior)

METHODS = ("auto", "fixed_point", "asymptotic", "oracle")
# interior solver values are accepted against a 53-bit oracle within this distance
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with the theta they came from and how each was found.

    ``effective_bits`` is the precision the values can be trusted to: the
    working precision, or 53 when any value was taken from the double
    precision oracle.
    """

    params: PerturbationParams
    eigenvalues: list
    thetas: list
    methods: list
    localization_certified: bool
    requested: str = "auto"
    effective_bits: int = 0
    notes: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.params.n

    def identity_tolerance(self):
        c = self.params.ctx
        return c.two_pow(32 - self.effective_bits) * self.n

    def trace_error(self):
        c = self.params.ctx
        return abs(c.fsum(self.eigenvalues) - 2 * self.n)

    def det_error(self):
        """Relative error of the eigenvalue product against the exact determinant.

        When the determinant is exactly zero the product is compared with the
        product of all but the smallest-magnitude eigenvalue instead.
        """
        c = self.params.ctx
        prod = c.real(1)
        for v in self.eigenvalues:
            prod *= v
        det = self.params.det_value
        if det != 0:
            ref = c.real(det)
            return abs(prod - ref) / abs(ref)
        mags = sorted(abs(v) for v in self.eigenvalues)
        rest = c.real(1)
        for v in mags[1:]:
            rest *= v
        return abs(prod) / rest

    def identities_hold(self) -> bool:
        tol = self.identity_tolerance()
        return self.trace_error() <= tol and self.det_error() <= tol

    def multiplicities(self) -> list[int]:
        """Multiplicity of each eigenvalue, per index."""
        c = self.params.ctx
        tol = c.two_pow(16 - self.effective_bits) * 4
        vals = self.eigenvalues
        out = []
        for v in vals:
            out.append(sum(1 for w in vals if abs(w - v) <= tol))
        return out


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: object
    vector: list
    residual: object
    j: int = 0


def _closed_form(p: PerturbationParams):
    cf = closed_form_spectrum(p)
    sols = [ThetaSolution(t, j, "trig", 0, p.ctx.real(0), "closed_form")
            for j, t in enumerate(cf.thetas, start=1)]
    return cf.eigenvalues, sols


def _theta_from_lambda(p: PerturbationParams, j: int, lam, method: str) -> ThetaSolution:
    c = p.ctx
    lam = c.real(lam)
    if lam < 0:
        theta, branch = g_minus_inverse(lam, c), "hyper_below"
    elif lam > 4:
        theta, branch = g_plus_inverse(lam, c), "hyper_above"
    else:
        theta, branch = g_inverse(lam, c), "trig"
    return ThetaSolution(theta, j, branch, 0, c.real(0), method)


def _value(p: PerturbationParams, sol: ThetaSolution):
    c = p.ctx
    if sol.branch == "trig":
        return g(sol.theta, c)
    return extreme_eigenvalue(p, sol)


def _oracle_spectrum(p: PerturbationParams, requested: str) -> Spectrum:
    if p.n > DENSE_LIMIT:
        raise DomainError(f"oracle limited to n <= {DENSE_LIMIT}")
    res = oracle_eigenvalues(p, FAST_BITS)
    c = p.ctx
    vals = [c.real(v) for v in res.eigenvalues]
    sols = [_theta_from_lambda(p, j, v, "oracle") for j, v in enumerate(vals, start=1)]
    return Spectrum(p, vals, sols, ["oracle"] * p.n, False, requested, FAST_BITS)


def _asymptotic_spectrum(p: PerturbationParams) -> Spectrum:
    c = p.ctx
    n = p.n
    if p.regime in (Regime.CIRCULANT_PLUS, Regime.CIRCULANT_MINUS):
        vals, sols = _closed_form(p)
        return Spectrum(p, vals, sols, ["closed_form"] * n, True, "asymptotic", c.mantissa_bits)
    vals, sols, methods = [], [], []
    for j in range(1, n + 1):
        if p.regime is Regime.STRONG and j in (1, n):
            theta = p.log_abs
            branch = "hyper_below" if j == 1 else "hyper_above"
            sol = ThetaSolution(theta, j, branch, 0, c.real(0), "asymptotic")
            lam = -p.s_alpha if j == 1 else 4 + p.s_alpha
        else:
            sol = ThetaSolution(theta_asymptotic_interior(p, j), j, "trig", 0, c.real(0), "asymptotic")
            lam = lambda_asymptotic_interior(p, j)
        vals.append(lam)
        sols.append(sol)
        methods.append("asymptotic")
    return Spectrum(p, vals, sols, methods, False, "asymptotic", c.mantissa_bits)


def _strong_extremes(p: PerturbationParams, method: str):
    """Extreme theta solutions, or None where the analytic route is unavailable.

    Returns (first, last, certified, notes).
    """
    if p.extremes_certified():
        return solve_theta_extreme(p, "first"), solve_theta_extreme(p, "last"), True, ()
    if method == "fixed_point":
        try:
            lo = solve_theta_extreme(p, "first", require_certified=False)
            hi = solve_theta_extreme(p, "last", require_certified=False)
        except (SolverError, DomainError):
            lo = hi = None
        # theta = 0 is always a fixed point (psi(0) = 0) but never an eigenvalue;
        # any positive fixed point is the unique root outside [0, 4].
        floor = p.ctx.two_pow(-p.ctx.mantissa_bits / 4)
        if lo is not None and lo.theta > floor and hi.theta > floor:
            return lo, hi, False, ("uncertified_extremes",)
    try:
        lo = extreme_eigenvalues_bisection(p, "first")
        hi = extreme_eigenvalues_bisection(p, "last")
    except SolverError:
        return None, None, False, ("oracle_extremes",)
    return (_theta_from_lambda(p, 1, lo, "oracle"), _theta_from_lambda(p, p.n, hi, "oracle"), True,
            ("bisection_extremes",))


def full_spectrum(p: PerturbationParams, method: str = "auto") -> Spectrum:
    """All n eigenvalues in ascending order.

    ``auto`` uses closed forms where they exist, the interior fixed point
    (or bisection below N1) and the hyperbolic fixed point for the strong
    extremes (or an oracle below N2).  ``fixed_point`` forces iteration
    wherever it is defined, ``asymptotic`` returns the expansions and
    ``oracle`` the 53-bit Jacobi values.
    """
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")
    c = p.ctx
    n = p.n
    if method == "oracle":
        return _oracle_spectrum(p, method)
    if method == "asymptotic":
        return _asymptotic_spectrum(p)

    closed = p.regime in (Regime.UNIMODULAR, Regime.CIRCULANT_PLUS, Regime.CIRCULANT_MINUS)
    if closed or (p.regime is Regime.ZERO and method == "auto"):
        vals, sols = _closed_form(p)
        return Spectrum(p, vals, sols, ["closed_form"] * n, True, method, c.mantissa_bits)

    interior_method = "fixed_point" if method == "fixed_point" else "auto"
    if p.regime in (Regime.WEAK, Regime.ZERO):
        sols = [solve_theta_interior(p, j, interior_method) for j in range(1, n + 1)]
        vals = [g(s.theta, c) for s in sols]
        return Spectrum(p, vals, sols, [s.method for s in sols], True, method, c.mantissa_bits)

    if p.regime is not Regime.STRONG:
        raise RegimeError(f"unhandled regime {p.regime.value}")
    first, last, certified, notes = _strong_extremes(p, method)
    if first is None and n > DENSE_LIMIT:
        raise RegimeError(f"strong regime with n={n} <= N2={float(p.n2_threshold):.4g}: extremes not "
                          f"bracketed and n exceeds the oracle limit {DENSE_LIMIT}")
    interior = [solve_theta_interior(p, j, interior_method) for j in range(2, n)]
    if first is not None:
        sols = [first] + interior + [last]
        vals = [_value(p, s) for s in sols]
        return Spectrum(p, vals, sols, [s.method for s in sols], certified, method, c.mantissa_bits, notes)

    # Extremes may sit inside [0, 4]; take them from the Jacobi oracle and
    # keep each interior value only if the oracle confirms it.
    ref = [c.real(v) for v in oracle_eigenvalues(p, FAST_BITS).eigenvalues]
    sols = [_theta_from_lambda(p, 1, ref[0], "oracle")]
    for s in interior:
        lam = g(s.theta, c)
        if abs(lam - ref[s.j - 1]) <= CROSS_CHECK_TOL:
            sols.append(s)
        else:
            sols.append(_theta_from_lambda(p, s.j, ref[s.j - 1], "oracle"))
    sols.append(_theta_from_lambda(p, n, ref[-1], "oracle"))
    vals = [ref[0]] + [_value(p, s) if s.method != "oracle" else ref[s.j - 1] for s in sols[1:-1]] + [ref[-1]]
    return Spectrum(p, vals, sols, [s.method for s in sols], False, method, FAST_BITS, notes)


def _norm2(v, ctx):
    return ctx.sqrt(ctx.fsum(z.real * z.real + z.imag * z.imag for z in v))


def residual(p: PerturbationParams, pair: EigenPair):
    """||A v - lam v||_2 / ||v||_2 via the banded product."""
    c = p.ctx
    av = apply_matrix(p, pair.vector)
    diff = [a - pair.eigenvalue * v for a, v in zip(av, pair.vector)]
    return _norm2(diff, c) / _norm2(pair.vector, c)


def _raw_vector(p: PerturbationParams, sol: ThetaSolution):
    c = p.ctx
    n = p.n
    th = sol.theta
    abar = c.conj(p.alpha)
    if p.regime is Regime.CIRCULANT_PLUS:
        return [c.complex(x) for x in eigvec_circulant(1, n, sol.j, c, substitute=True)]
    if p.regime is Regime.CIRCULANT_MINUS:
        return [c.complex(x) for x in eigvec_circulant(-1, n, sol.j, c, substitute=True)]
    if sol.branch == "trig":
        return [c.sin(k * th) + abar * c.sin((n - k) * th) for k in range(1, n + 1)]
    # exp(-n ln|alpha|) pre-scaling keeps the sinh terms bounded
    scale = c.exp(-n * p.log_abs)
    if sol.branch == "hyper_below":
        return [scale * (c.sinh(k * th) + abar * c.sinh((n - k) * th)) for k in range(1, n + 1)]
    if sol.branch == "hyper_above":
        out = []
        for k in range(1, n + 1):
            s1 = -1 if k % 2 else 1
            s2 = -1 if (k + n) % 2 else 1
            out.append(scale * (s1 * c.sinh(k * th) + s2 * abar * c.sinh((n - k) * th)))
        return out
    raise DomainError(f"unknown branch {sol.branch!r}")


def eigenvector(p: PerturbationParams, sol: ThetaSolution) -> EigenPair:
    """Eigenpair built from a solved theta, normalized so the largest component is 1."""
    if sol.method in ("asymptotic", "oracle"):
        raise DomainError(f"eigenvectors are only built from solved theta, not from {sol.method!r} values")
    c = p.ctx
    v = _raw_vector(p, sol)
    mags = [abs(z) for z in v]
    big = max(range(len(v)), key=mags.__getitem__)
    if mags[big] < c.two_pow(8 - c.mantissa_bits):
        raise ZeroVector(f"eigenvector for j={sol.j} vanished; theta={sol.theta} is likely wrong")
    pivot = v[big]
    v = [z / pivot for z in v]
    lam = _value(p, sol)
    pair = EigenPair(lam, v, c.real(0), sol.j)
    return EigenPair(lam, v, residual(p, pair), sol.j)


def eigenpairs(spec: Spectrum) -> list:
    """Eigenpairs for every theta-solved index of a spectrum (others get None)."""
    out = []
    for sol in spec.thetas:
        if sol.method in ("asymptotic", "oracle"):
            out.append(None)
        else:
            out.append(eigenvector(spec.params, sol))
    return out
