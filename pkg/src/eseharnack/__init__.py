"""Solver and differential-Harnack verification harness for f_t = lap(f) + f^p."""

from .blowup import (BlowupReport, blowup_report, blowup_threshold,
                     center_monotonicity_check, classify_regime,
                     estimate_blowup_time, first_threshold_hit,
                     normalize_threshold_time, ode_blowup_time, ode_oracle,
                     tail_fit)
from .classical import (PairVerdict, PathSpec, classical_harnack_check,
                        dp_min_path_cost, min_path_cost, path_cost,
                        random_pairs)
from .constants import (AdmissibilityVerdict, BestFeasibility, FeasibleRegion,
                        HarnackConstants, best_feasibility, blowup_preset,
                        check_admissible, check_classical_hypothesis,
                        feasible_region, preset, preset_names)
from .field import (Field, Grid, gaussian_halfwidth, grad_sq, hessian_sq,
                    laplacian, log_field, require_positive)
from .harnack import (HarnackReport, LocalizerSpec, ResidualStats,
                      certify_verdict, default_window, evolution_residual,
                      f_form, h0_report, harnack_h0, harnack_hr,
                      localizer_min_b, make_localizer, phi_r)
from .integrate import (ConstantIC, GaussianIC, ProblemSpec, RescaleSpec,
                        SolveTrace, StepConfig, TabulatedIC, TraceStatus,
                        initial_field, rescale_field, rescale_problem,
                        rescale_trace, solve, step)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
