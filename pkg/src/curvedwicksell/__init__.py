"""Section and unfolding operators for ball processes in constant curvature."""

from .geometry import (Curvature, SpaceParams, alpha, beta, cos_k,
                       embed_check, volume_weight)
from .measures import (AtomMixture, EmpiricalSample, RadiusDistribution,
                       TabulatedDensity, distribution_from_dict,
                       load_distribution, save_distribution)
from .quadrature import QuadratureError, QuadratureSpec, integrate_1d
from .section import (BallProcess, SectionProfile, cumulative_weight,
                      intensity_ratio, intensity_ratio_closed_form,
                      section_density, section_distribution, section_expect,
                      section_profile, section_tail)
from .simulate import (SimulationConfig, SimulationResult, ks_distance,
                       simulate_sections)
from .unfold import (UnfoldInconsistencyError, UnfoldInput, unfold_profile,
                     unfold_tail, unfold_tail_flat, unfold_tail_negative,
                     unfold_tail_positive)

__all__ = [
    "Curvature", "SpaceParams", "alpha", "beta", "cos_k", "embed_check",
    "volume_weight",
    "AtomMixture", "EmpiricalSample", "RadiusDistribution",
    "TabulatedDensity", "distribution_from_dict", "load_distribution",
    "save_distribution",
    "QuadratureError", "QuadratureSpec", "integrate_1d",
    "BallProcess", "SectionProfile", "cumulative_weight", "intensity_ratio",
    "intensity_ratio_closed_form", "section_density", "section_distribution",
    "section_expect", "section_profile", "section_tail",
    "SimulationConfig", "SimulationResult", "ks_distance",
    "simulate_sections",
    "UnfoldInconsistencyError", "UnfoldInput", "unfold_profile",
    "unfold_tail", "unfold_tail_flat", "unfold_tail_negative",
    "unfold_tail_positive",
]

__version__ = "0.1.0"
