"""Finite-genus backgrounds of the focusing NLS equation and their long-time asymptotics."""

from .asymptotics import AsymptoticBundle, AsymptoticSolver, RegimeParams, cubic_residual, varpi_lambda
from .background import (Background, BackgroundParams, ExtendedSurfaceData, canonical_divisor, m_alg, model_even,
                         model_odd, q_alg, solve_extended, validate_extended)
from .cauchy import build_delta, delta_contour, g_even, g_odd, pc_local_data
from .errors import FiniteGapError
from .phase import find_collisions, solve_phase, stationary_points
from .scattering import ScatteringData, make_rational_r, zero_reflection
from .special import airy, airy_parametrix, hm_solution, pc_beta
from .surface import BranchSet, SurfacePoint, build_surface
from .theta import ThetaContext, theta
from .verify import FieldGrid, nls_residual, split_step

__version__ = "0.1.0"
