"""Certified approximate roots of homogeneous complex polynomial systems
by homotopy continuation, with a deterministic starting-pair construction
that extracts its randomness from the input's own fractional digits."""

from .conditioning import (Certificate, certify_root, mu_bound, mu_exact,
                           newton_step)
from .errors import (AntipodalEndpoints, ContinuationFailed, DegenerateKernel,
                     EntropyExhausted, NotARoot, RoundsExceeded,
                     SingularJacobian)
from .homotopy import HcOutcome, PathTrace, StepConstants, hc, hc_checked, path_oracle
from .projective import ProjectivePoint, dist_proj, dist_sphere, geodesic, standard_unitary
from .randomization import (BpPair, bp, bp_split, face_decompose, face_recompose,
                            floor_frac_unit, kernel_vector, psi_expand, sibuya,
                            sphere_floor, sphere_frac, trig_poly)
from .solver import (SolveReport, SolverConfig, bp_solve, dbp, extract_noise,
                     random_unit_system)
from .systems import (DegreeProfile, PolySystem, compose_linear, from_real_coords,
                      normalized, parse_system, system_from_obj, system_to_obj,
                      to_real_coords, weyl_inner, weyl_norm, weyl_norm_sq_monomial)

__version__ = "0.1.0"
