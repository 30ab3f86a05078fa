"""Certified small-volume contact mapping tori over the even ball, and the
systolic-ratio lower bounds they produce on odd spheres."""

from .bumps import BumpSpec, SupportedMap, bump_action, bump_calabi, bump_flow, \
    bump_map, compose_action, eta_correction
from .certificates import Certificate, Check, summarize
from .collar import GammaInfeasibleError, ProfileCurve, TauProfile, budget_ledger, \
    build_gamma, collar_volume_bounds, contact_positivity, return_time_profile, \
    verify_gamma
from .core import InputError, SectorGeometry, ball_in_sector_margin, lambda_eval, \
    omega_pair, sector_index, sector_membership
from .cutoffs import CutoffChi, ProfileJoinError, ProfileUhat, ProfileV, SmoothStep, \
    build_chi, build_uhat, build_v, verify_chi
from .packing import BallFamily, max_feasible_radius, pack_sector, replicate_orbit, \
    verify_packing
from .plug import PlugDescriptor, PlugParams, build_plug, min_period_bound, \
    plug_grid, primitive_shift_check, rescale_plug, torus_volume, \
    torus_volume_certificate, verify_b1_to_b4
from .radial import Isotopy, RadialHamiltonian, ScaledProfile, action_oracle, \
    calabi_oracle, calabi_radial, isotopy_of, radial_action, radial_flow, \
    radial_velocity
from .sphere import SphereChart, sphere_certificate, standard_alpha_eval, \
    verify_pullback, zoll_baseline

__version__ = "0.1.0"
