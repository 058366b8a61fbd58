"""chirpwave: free evolution of chirped wave packets.

A chirp ``exp(i alpha x^2)`` on top of a profile ``phi`` evolves under the free
Hamiltonian as a chirp, a squeeze and a free step of modified duration.  This
package evaluates that factorized evolution, its zeroth- and first-order
approximations, exact closed forms for Airy, Airy-Gauss, Sinc and Bessel
profiles, and an independent spectral oracle to check them against.
"""
from .factorization import FactorCoeffs, apply_chirp, f4_asymptotics, f4_sweep, factor_coeffs
from .gridfield import Grid, WaveField, default_grid, density, l2_norm, make_grid, rel_l2_error, sample
from .propagators import (
    AliasingError,
    EvolvedField,
    chirped_oracle,
    exact_evolution,
    factorized_propagation,
    psi0,
    psi1,
    spectral_free_step,
)
from .specfun import QuadratureError, QuadratureSpec, airy_ai, bessel_jn, generalized_bessel
from .states import Airy, AiryGauss, Bessel, Gaussian, Sinc, Tabulated, parse_state

__version__ = "0.1.0"

__all__ = [
    "Grid", "WaveField", "default_grid", "make_grid", "sample", "density", "l2_norm", "rel_l2_error",
    "FactorCoeffs", "factor_coeffs", "f4_asymptotics", "f4_sweep", "apply_chirp",
    "AliasingError", "EvolvedField", "chirped_oracle", "exact_evolution", "factorized_propagation",
    "psi0", "psi1", "spectral_free_step",
    "QuadratureError", "QuadratureSpec", "airy_ai", "bessel_jn", "generalized_bessel",
    "Airy", "AiryGauss", "Bessel", "Gaussian", "Sinc", "Tabulated", "parse_state",
]
