"""Discrete-time TASEP, the ABDF particle model and quasi-particle weak
solutions of Burgers' equation, driven by one shared noise field."""

from .abdf import (AbdfConfig, Lambda0Report, abdf_flow, abdf_step, abdf_trajectory,
                   activation_record, activation_record_right, check_config, validate_lambda0,
                   vacuum)
from .burgers_field import (BurgersFrame, Profile, QuasiParticle, SiteClassification,
                            build_frame, classify_sites, evaluate, integer_time_profile,
                            profile, reconstruct, reconstruct_trajectory, trajectory)
from .domain import Domain
from .errors import (AmbiguousVacuumError, InconsistentConfigError, InvalidConfigError,
                     InvalidDomainError, ReconstructionError, SupportError, TasepBurgersError,
                     TimeRangeError, VerificationError)
from .noise import NoiseField, noise_bit, noise_row
from .pairmap import AlternatingSegment, maximal_alternating_segments, pair_forward, pair_inverse
from .tasep import TasepConfig, alternating, tasep_flow, tasep_step, tasep_trajectory
from .verification import (EdgeSegment, TestFunction, bijection_check, conjugacy_check,
                           continuity_check, edges, lax_condition, rankine_hugoniot_residual,
                           total_mass, weak_residual)

__version__ = "0.1.0"
