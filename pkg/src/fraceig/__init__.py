"""Variational eigenvalues of fractional p-Laplacian-type nonlocal
operators on 1D and 2D grids, with sweep harnesses for the s -> 1,
p -> infinity and kernel-homogenization limits."""

from .asymptotics import (SweepReport, hausdorff_distance, homogenization_sweep,
                          richardson_extrapolate, sweep_p, sweep_s)
from .backend import backend_name
from .eigensolve import (CertificateResult, EigenResult, SolverOptions,
                         first_eigenpair, first_eigenpair_weighted,
                         infinity_eigen_certificate, local_eigenvalue_1d,
                         local_spectrum_box, spectrum_linear)
from .functional import (NumericError, dirichlet_energy_local, f_n,
                         gagliardo_energy, holder_quotient_sup, k_constant,
                         k_constant_closed_form, lq_norm, weighted_energy)
from .geometry import (Domain, GridFunction, build_box, build_interval,
                       distance_function, inradius, load_masked_grid)
from .kernels import (ConstantKernel, Kernel, PeriodicProductKernel,
                      TabulatedKernel, kernel_average)
from .params import FracParams
from .quadrature import EnergyForm, Quadrature, get_quadrature

__version__ = "1.0.0"

__all__ = [
    "Domain", "GridFunction", "build_interval", "build_box",
    "load_masked_grid", "distance_function", "inradius",
    "FracParams",
    "Kernel", "ConstantKernel", "PeriodicProductKernel", "TabulatedKernel",
    "kernel_average",
    "Quadrature", "EnergyForm", "get_quadrature",
    "NumericError", "gagliardo_energy", "f_n", "weighted_energy", "lq_norm",
    "holder_quotient_sup", "k_constant", "k_constant_closed_form",
    "dirichlet_energy_local",
    "SolverOptions", "EigenResult", "CertificateResult", "first_eigenpair",
    "first_eigenpair_weighted", "spectrum_linear", "local_eigenvalue_1d",
    "local_spectrum_box", "infinity_eigen_certificate",
    "SweepReport", "sweep_s", "sweep_p", "homogenization_sweep",
    "richardson_extrapolate", "hausdorff_distance",
    "backend_name",
    "__version__",
]
