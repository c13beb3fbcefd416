"""cmc surfaces of revolution in Nil: closed forms, profile ODE, spinor
energy, descent minimization, and the S^2 x R companion family."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import s2xr  # noqa: F401
except ImportError:  # core built out-of-tree (plain CMake build)
    from _core import *  # noqa: F401,F403
    from _core import s2xr  # noqa: F401

__all__ = [
    "EvalMode",
    "QuadratureResult",
    "n3_of_r",
    "conformal_factor",
    "area",
    "volume",
    "spinor_energy",
    "spinor_energy_complex",
    "willmore",
    "isoperimetric_residual",
    "isoperimetric_residual_corrected",
    "Topology",
    "ProfileSample",
    "ProfileCurve",
    "RevolutionReport",
    "generate_cmc_profile",
    "profile_closed_form_distance",
    "revolution_report",
    "energy_reduced",
    "reduced_integrand_sup",
    "read_profile_csv",
    "write_profile_csv",
    "perturb",
    "DescentOptions",
    "DescentTraceRow",
    "DescentTrace",
    "minimize_energy",
    "el_residual_sup",
    "s2xr",
]
