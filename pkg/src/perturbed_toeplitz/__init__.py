"""Spectra of the Hermitian tridiagonal Toeplitz matrix with corner perturbations."""

from .errors import (ArctanhDomain, DomainError, FallbackUnavailable, NoBracket, NoConvergence,
                     NonFiniteError, PairMismatch, PoleError, RegimeError, SolverError, ToeplitzError,
                     ZeroVector)
from .oracle import OracleResult, dense_hermitian_eigenvalues, extreme_eigenvalues_bisection, oracle_eigenvalues
from .precision import DEFAULT_BITS, FAST_BITS, PrecisionContext, arctanh_safe, tanh_half_n
from .spectrum import EigenPair, Spectrum, eigenpairs, eigenvector, full_spectrum, residual
from .strong import (PsiFunction, StrongSegment, extreme_asymptotic_error, extreme_eigenvalue, extreme_offset,
                     lambda_limit_extreme, psi, psi_prime,
                     solve_theta_extreme, spectral_gaps, strong_map, theta_limit_bound)
from .toeplitz import (DenseMatrix, PerturbationParams, Regime, apply_matrix, build_matrix, charpoly_cheb,
                       charpoly_hyper, charpoly_trig, chebyshev_u, g, g_inverse, g_minus, g_minus_inverse,
                       g_plus, g_plus_inverse, symbol_value)
from .unimodular import ClosedFormSpectrum, closed_form_spectrum, eigvec_circulant, theta_circulant, theta_unimodular
from .weak import (EtaFunction, ThetaSolution, eta, eta_prime, f_map, lambda_asymptotic_interior,
                   solve_theta_interior, theta_asymptotic_interior, u_root)

__all__ = [name for name in dir() if not name.startswith("_")]
