"""Pedal curves and surfaces of conics and quadrics, and the Minkowski norms they define."""
from __future__ import annotations

from .errors import *  # noqa: F401,F403
from .report import CONVEX, DEGENERATE, INCONCLUSIVE, NOT_CONVEX, ConvexityReport
from .plane import (ORIGIN2, ParamCurve2, PedalConfig2, convexity_functional, frenet, is_strongly_convex,
                    origin_classification, pedal_curvature_quotient, pedal_d1, pedal_eval)
from .surface import ORIGIN3, ParamSurface3, PedalConfig3, is_strongly_convex_surface, pedal_surface_eval, second_form
from .curves import CircleSpec, EllipseSpec, OffsetPedalCircleSpec
from .surfaces import EllipsoidSpec, SphereSpec
from .minkowski import (MinkowskiNorm, ellipsoid_norm, fundamental_tensor, indicatrix_consistency,
                        norm_convexity_scan, offset_circle_norm, slope_norm)
from .families import FAMILIES, closed_form, run_engine
from .sweep import BoundaryResult, SweepSpec, find_boundaries, find_boundary

__version__ = "0.1.0"
