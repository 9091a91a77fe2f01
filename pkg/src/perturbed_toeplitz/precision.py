"""Configurable-precision real/complex arithmetic.

Every numerical routine in the package receives a :class:`PrecisionContext`
and performs its arithmetic through it.  The context owns a private mpmath
context, so two contexts with different precisions never interfere and no
global state is touched.  This is the only module that imports mpmath.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath.ctx_mp_python import _mpf
from mpmath.libmp import repr_dps, to_str

from .errors import ArctanhDomain, DomainError, NonFiniteError

DEFAULT_BITS = 256
FAST_BITS = 53


@functools.lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    # Contexts are never mutated after creation, so sharing them is safe.
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, in binary digits of the significand."""

    mantissa_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < FAST_BITS:
            raise DomainError(f"mantissa_bits must be an integer >= {FAST_BITS}, "
                              f"got {self.mantissa_bits!r}")

    @property
    def _m(self) -> mpmath.MPContext:
        return _mp_context(self.mantissa_bits)

    # -- constructors ------------------------------------------------------

    def real(self, x):
        """Round ``x`` (int, Fraction, float, decimal string, mpf) to this precision."""
        if isinstance(x, Rational) and not isinstance(x, int):
            return self._m.mpf(x.numerator) / x.denominator
        return self._m.mpf(x)

    def complex(self, re, im=0):
        return self._m.mpc(self.real(re), self.real(im))

    @property
    def pi(self):
        return +self._m.pi

    @property
    def eps(self):
        """2**(1 - mantissa_bits)."""
        return self._m.ldexp(self._m.mpf(1), 1 - self.mantissa_bits)

    def two_pow(self, k):
        return self._m.ldexp(self._m.mpf(1), int(k))

    # -- elementary kernels (mpmath rounds these correctly or within 1 ulp) --

    def sqrt(self, x):
        return self._m.sqrt(x)

    def sin(self, x):
        return self._m.sin(x)

    def cos(self, x):
        return self._m.cos(x)

    def cos_sin(self, x):
        return self._m.cos_sin(x)

    def tan(self, x):
        return self._check(self._m.tan(x), "tan")

    def atan(self, x):
        return self._m.atan(x)

    def atan2(self, y, x):
        return self._m.atan2(y, x)

    def acos(self, x):
        return self._m.acos(x)

    def acosh(self, x):
        return self._m.acosh(x)

    def sinh(self, x):
        return self._m.sinh(x)

    def asinh(self, x):
        return self._m.asinh(x)

    def cosh(self, x):
        return self._m.cosh(x)

    def tanh(self, x):
        return self._m.tanh(x)

    def exp(self, x):
        return self._m.exp(x)

    def expm1(self, x):
        return self._m.expm1(x)

    def ln(self, x):
        if x <= 0:
            raise DomainError(f"ln of non-positive value {x}")
        return self._m.ln(x)

    def log1p(self, x):
        if x <= -1:
            raise DomainError(f"log1p of value {x} <= -1")
        return self._m.log1p(x)

    def atanh(self, x):
        return self._m.atanh(x)

    def fabs(self, x):
        return self._m.fabs(x)

    def conj(self, z):
        return self._m.conj(z)

    def modulus(self, z):
        return abs(self._m.mpc(z))

    def ldexp(self, x, k):
        return self._m.ldexp(x, k)

    def fsum(self, terms):
        return self._m.fsum(terms)

    def is_finite(self, x) -> bool:
        return bool(self._m.isfinite(x))

    def _check(self, value, operation: str):
        if not self._m.isfinite(value):
            raise NonFiniteError(operation, value)
        return value

    def check(self, value, operation: str):
        """Return ``value`` unchanged, raising NonFiniteError on NaN/inf."""
        return self._check(value, operation)

    # -- formatting --------------------------------------------------------

    def to_str(self, x) -> str:
        """Decimal string that parses back to the same binary value."""
        return to_str(self._m.mpf(x)._mpf_, repr_dps(self.mantissa_bits))

    def to_float(self, x) -> float:
        return float(x)


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, float, decimal string, Fraction or mpf.

    Floats are read through their shortest decimal repr, so 0.6 means 3/5
    rather than the nearest binary double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise DomainError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, _mpf):
        man, exp = x.man_exp
        return Fraction(man) * Fraction(2) ** exp
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def tanh_half_n(x, n: int, ctx: PrecisionContext):
    """tanh(n*x/2) written as 1 - 2e/(1+e), e = exp(-n*x).

    Only exp of a non-positive argument is formed, so the evaluation cannot
    overflow; 1 - e is taken as -expm1(-n*x) to keep relative accuracy for
    small n*x.
    """
    if n < 1:
        raise DomainError(f"tanh_half_n needs n >= 1, got {n}")
    if not x > 0:
        raise DomainError(f"tanh_half_n needs x > 0, got {x}")
    y = -(n * ctx.real(x))
    e = ctx.exp(y)
    return ctx.check(-ctx.expm1(y) / (1 + e), "tanh_half_n")


def arctanh_safe(t, ctx: PrecisionContext):
    """Inverse hyperbolic tangent, refusing |t| >= 1."""
    t = ctx.real(t)
    if not abs(t) < 1:
        raise ArctanhDomain(f"arctanh argument {t} is outside (-1, 1)")
    return ctx.check(ctx.atanh(t), "arctanh_safe")
