"""Spherical curves from angular momentum and helicoidal surfaces in the 3-sphere."""

from ._backend import BACKEND
from .associated import (AssociatedParams, HelicoidParams, associated_from_params,
                         conjugate_pitches, isometry_pullback, isothermal_forms,
                         params_from_associated, verify_association)
from .errors import (ConvergenceError, DegenerateError, DomainError, EmptyValidityError,
                     GeometryError, HelisphereError, NegativeRadicandError, NoOscillationError,
                     PitchError, PitchMismatchError, PoleError, RangeError, SingularityError,
                     ToleranceError)
from .export import (Mesh, build_mesh, parse_momentum_spec, read_curve_csv,
                     stereographic_project, write_curve_csv, write_obj, write_reports)
from .families import (CatenaryParams, SmallCircleParams, catenary, closure_function,
                       closure_residual, great_circle, parallel, small_circle,
                       solve_beta_for_rotation)
from .momentum import (MomentumProfile, ProfileCurve, ReconstructionConfig,
                       arc_length_of_height, curvature_from_momentum, eval_momentum,
                       momentum_of_samples, reconstruct_curve, z_period_and_rotation)
from .oracles import (brendle_kusner_check, fd_forms, intrinsic_gauss, otsuki_check)
from .prescribe import (PrescriptionResult, momentum_from_extrinsic, momentum_from_mean,
                        round_trip_mean)
from .report import CheckReport
from .surface import (FormsAtPoint, HelicoidalSurface, area_density, extrinsic_and_gauss,
                      first_form, forms, immerse, mean_curvature,
                      principal_curvatures_rotational, second_form, unit_normal)

__version__ = "0.1.0"
