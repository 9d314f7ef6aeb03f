"""Gaussian Toeplitz/Weyl symbol calculus on Bargmann spaces.

Decides boundedness and composability of Toeplitz operators whose symbols
are exponentials of complex quadratic forms, computes composed phase-space
and Toeplitz exponents in closed form, and verifies every closed form
against a Gaussian-quadrature oracle.
"""

from ._backend import HAVE_COMPILED, backend_name
from .calculus import (CriticalValue, DegenerateStationaryPhase, Gate,
                       PipelineReport, compose_toeplitz, critical_value,
                       gaussian_value, legendre_invert, toeplitz_to_weyl,
                       weyl_to_toeplitz)
from .forms import (HoloForm, LambdaRestriction, MixedForm, RealForm, Weight,
                    dual_form, model_weight, polarize, restrict_to_lambda,
                    weight_parts)
from .linalg import (Definiteness, DefinitenessReport, SingularMatrixError,
                     classify, herm_eigs, solve_det)
from .model import (ExtendedSymbol, RadialSymbol, coherent_action,
                    extended_compose, radial_analyze, radial_compose,
                    sequential_coherent)
from .oracle import (ConstantEstimate, DecayError, QuadratureGrid,
                     bergman_apply, composition_constant, constant_estimate,
                     toeplitz_apply, toeplitz_chain, weyl_symbol_numeric)
from .symplectic import (AntiLinearMap, CanonicalMap, FundamentalMatrix,
                         GraphError, KernelPhase, PhaseFunction, PhaseReport,
                         SpectralGateError, adjoint_map, cayley,
                         compose_fundamental, fio_kernel_phase,
                         form_from_fundamental, fundamental_matrix,
                         inverse_cayley, involution, phase_checks, positivity,
                         pushforward_weight, weyl_generating_phase)

__version__ = "0.1.0"
