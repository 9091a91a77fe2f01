"""Ground-truth eigenvalues that share no code with the analytic solvers.

The Hermitian matrix H = X + iY is embedded in the real symmetric matrix
[[X, -Y], [Y, X]], whose spectrum is that of H with every eigenvalue
doubled.  Cyclic Jacobi rotations diagonalize the embedding; sweeps use the
round-robin ordering so that each round applies n disjoint rotations at once
(vectorized with numpy).  At 53 bits the work is done in float64; at higher
precision the same code runs on object arrays of context Reals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoBracket, NoConvergence, PairMismatch, RegimeError
from .precision import FAST_BITS, PrecisionContext
from .toeplitz import DENSE_LIMIT, DenseMatrix, PerturbationParams, Regime, build_matrix, charpoly_cheb

MAX_SWEEPS = 60


@dataclass(frozen=True)
class OracleResult:
    eigenvalues: list
    offdiag_norm: object
    sweeps: int


def _round_robin(size: int):
    """size - 1 rounds of size/2 disjoint index pairs covering every pair once."""
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        half = size // 2
        top, bottom = players[:half], players[half:][::-1]
        p = np.array([min(a, b) for a, b in zip(top, bottom)])
        q = np.array([max(a, b) for a, b in zip(top, bottom)])
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


class _FloatOps:
    dtype = np.float64

    @staticmethod
    def sqrt(x):
        return np.sqrt(x)

    @staticmethod
    def hypot1(x):
        return np.hypot(x, 1.0)

    @staticmethod
    def two_pow(k):
        return 2.0 ** k

    @staticmethod
    def convert(x):
        return x


class _MpOps:
    dtype = object

    def __init__(self, ctx: PrecisionContext):
        self.ctx = ctx
        self._sqrt = np.frompyfunc(ctx.sqrt, 1, 1)

    def sqrt(self, x):
        return self._sqrt(x)

    def hypot1(self, x):
        return self._sqrt(x * x + 1)

    def two_pow(self, k):
        return self.ctx.two_pow(k)

    def convert(self, x):
        return self.ctx.real(x)


def _offdiag_norm(a, ops):
    b = a.copy()
    np.fill_diagonal(b, 0)
    return ops.sqrt(np.sum(b * b))


def _sweep(a, rounds, ops):
    zero = ops.convert(0)
    one = ops.convert(1)
    for p, q in rounds:
        apq = a[p, q]
        active = apq != 0
        if not np.any(active):
            continue
        p, q, apq = p[active], q[active], apq[active]
        theta = (a[q, q] - a[p, p]) / (2 * apq)
        sign = np.where(theta >= zero, one, -one)
        t = sign / (np.abs(theta) + ops.hypot1(theta))
        c = one / ops.hypot1(t)
        s = t * c
        c_col, s_col = c[:, None], s[:, None]
        rp, rq = a[p, :].copy(), a[q, :].copy()
        a[p, :] = c_col * rp - s_col * rq
        a[q, :] = s_col * rp + c_col * rq
        cp, cq = a[:, p].copy(), a[:, q].copy()
        a[:, p] = cp * c - cq * s
        a[:, q] = cp * s + cq * c
        a[p, q] = zero
        a[q, p] = zero


def _embed(m: DenseMatrix, ops, ctx: PrecisionContext):
    n = m.n
    if ops.dtype is np.float64:
        h = m.to_numpy()
        x, y = h.real, h.imag
    else:
        x = np.empty((n, n), dtype=object)
        y = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                z = m.entries[i, j]
                x[i, j] = ctx.real(z.real)
                y[i, j] = ctx.real(z.imag)
    top = np.concatenate([x, -y], axis=1)
    bottom = np.concatenate([y, x], axis=1)
    return np.concatenate([top, bottom], axis=0)


def dense_hermitian_eigenvalues(m: DenseMatrix, ctx: PrecisionContext | None = None) -> OracleResult:
    """Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi.

    Sweeps until the off-diagonal Frobenius norm of the embedding is at most
    2^(-bits/2) ||m||_F, then runs one more sweep (quadratic convergence takes
    it to rounding level).  Coincident pairs are collapsed by sorting.
    """
    ctx = ctx or PrecisionContext(FAST_BITS)
    if m.n > DENSE_LIMIT:
        raise DomainError(f"oracle limited to n <= {DENSE_LIMIT}")
    ops = _FloatOps() if ctx.mantissa_bits <= FAST_BITS else _MpOps(ctx)
    a = _embed(m, ops, ctx)
    size = a.shape[0]
    fro = ops.sqrt(np.sum(a * a) / 2)   # ||m||_F
    threshold = fro * ops.two_pow(-ctx.mantissa_bits / 2)
    rounds = _round_robin(size)
    off = _offdiag_norm(a, ops)
    sweeps = 0
    while off > threshold:
        if sweeps >= MAX_SWEEPS:
            raise NoConvergence("Jacobi oracle", sweeps, off)
        _sweep(a, rounds, ops)
        sweeps += 1
        off = _offdiag_norm(a, ops)
    _sweep(a, rounds, ops)
    sweeps += 1
    off = _offdiag_norm(a, ops)

    d = sorted(a[i, i] for i in range(size))
    pair_tol = fro * ops.two_pow(-ctx.mantissa_bits / 4)
    for i in range(0, size, 2):
        if abs(d[i + 1] - d[i]) > pair_tol:
            raise PairMismatch(f"embedding eigenvalues {d[i]} and {d[i + 1]} do not pair up")
    if ops.dtype is np.float64:
        values = [float(v) for v in d[0::2]]
    else:
        values = d[0::2]
    return OracleResult(values, off, sweeps)


def oracle_eigenvalues(p: PerturbationParams, bits: int = FAST_BITS) -> OracleResult:
    """Jacobi oracle for A(alpha, n) at ``bits`` of precision."""
    ctx = PrecisionContext(bits)
    q = p if p.ctx == ctx else p.with_precision(ctx)
    return dense_hermitian_eigenvalues(build_matrix(q), ctx)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def extreme_eigenvalues_bisection(p: PerturbationParams, which: str):
    """Bisection on det(lam I - A) below 0 ("first") or above 4 ("last").

    A is A(0, n) (positive definite, spectrum in (0, 4)) plus a rank-two
    perturbation with one negative and one positive eigenvalue, so at most
    one eigenvalue lies below 0 and at most one above 4: a sign change on
    the bracket certifies exactly one root.
    """
    if p.regime is not Regime.STRONG:
        raise RegimeError("extreme-eigenvalue bisection needs |alpha| > 1")
    c = p.ctx
    bound = 4 * p.abs_alpha
    if which == "first":
        lo, hi = -bound, c.real(0)
    elif which == "last":
        lo, hi = c.real(4), 4 + bound
    else:
        raise DomainError(f"which must be 'first' or 'last', got {which!r}")
    f_lo, f_hi = _sign(charpoly_cheb(p, lo)), _sign(charpoly_cheb(p, hi))
    if f_lo == 0 or f_hi == 0 or f_lo == f_hi:
        raise NoBracket(f"no sign change of det(lam I - A) on [{c.to_float(lo)}, {c.to_float(hi)}] "
                        f"for n={p.n}")
    width = c.two_pow(8 - c.mantissa_bits)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        f_mid = _sign(charpoly_cheb(p, mid))
        if f_mid == 0:
            return mid
        if f_mid == f_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
