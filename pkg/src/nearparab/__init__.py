"""Arithmetic and dynamics of quadratic polynomials with a neutral fixed
point: modified continued fractions, perturbed Fatou coordinates,
near-parabolic renormalization, and ergodic-average experiments at
arbitrary precision."""

from . import errors
from .errors import (CacheCorrupt, ChartDiverged, EscapeDetected, NearParabError,
                     NearRational, NewtonDiverged, NoCycleFound, NonBrjunoSuspected,
                     NoReturn, OutsideDomain, OutsideRegime, PoleArgument,
                     PrecisionExhausted, ZeroArgument)
from .rotation import (BiSequenceTable, BrjunoProfile, RotationNumber,
                       bisequence, bisequence_limit, brjuno_profile,
                       closest_return_times, expand_cf, good_levels,
                       is_high_type, synthesize_alpha)
from .presets import make_preset, parse_digits
from .dynamics import (NeutralQuadratic, OrbitTrace, SiegelEstimate,
                       birkhoff_average, birkhoff_averages, density_estimate,
                       find_small_cycle, iterate, make_map, siegel_estimate)
from .fatou import (FatouChart, build_fatou_chart, covering_T, covering_T_inv,
                    exp_lift, exp_proj, fatou_inverse, lift_chi,
                    multiplier_phase_error, renorm_multiplier, renormalize_eval)
from .heights import (DichotomyReport, HeightChain, dichotomy_diagnostics,
                      propagate_heights, yoccoz_height_compare)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
