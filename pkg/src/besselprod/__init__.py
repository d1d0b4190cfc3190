"""Closed-form and numerical integrals of products of Bessel functions."""

from .asymptotics import ModeTriple, fresnel, triple_product_approx, two_product_approx
from .bessel_core import (J_ONLY, GeneralSolution, bessel_j, bessel_y, bessel_zero,
                          bessel_zeros, z_derivative, z_eval)
from .coeff_db import BinaryIndex, CoeffRecord, Database, generate
from .errors import (BesselProdError, ConvergenceError, DegeneracyError, DomainError,
                     IntegrityError, NotFoundError, ParseError, PreconditionError,
                     StepSizeError, UnsupportedOrderError)
from .fourier_bessel import build_series, reconstruct
from .quadrature import Factor, ProductIntegralSpec, integrate, integrate_extended

__version__ = "0.1.0"
