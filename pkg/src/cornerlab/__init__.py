"""Corner-singularity laboratory for the Poisson problem on plane sectors.

The package solves -Delta u = f on a truncated circular sector with
Dirichlet, Neumann or mixed boundary conditions on the two legs, splits the
solution into a regular part, a polynomial lift and explicit corner
singularity terms c * r^lambda * trig(lambda*phi), and measures Sobolev /
Besov smoothness of fields through K-functional decay.  Everything lives on
a log-radial x uniform-angular grid, where the radial Mellin transform
reduces to an ordinary Fourier transform.
"""

from .geometry import BoundaryCondition, SectorGeometry, EigenSpectrum, build_spectrum, eigenfunction
from .grids import Grid, ScalarField
from .cutoffs import Cutoff, SmoothCutoff
from .quadrature import angular_quadrature, radial_quadrature, integrate_field
from .laplacian import laplacian_apply, laplacian_residual
from .polylift import BivariatePoly, LogHarmonic, Lift, build_pij, assemble_P, eval_lift, eval_laplacian_of_cutoff_lift
from .modal import ModalField, project, reconstruct, solve_radial_mode, solve_poisson, neumann_log_coefficient
from .mellin import MellinLine, mellin_eval, mellin_forward, mellin_inverse, operator_solve_line, two_line_residue
from .sif import SingularTerm, Decomposition, singular_function, stress_intensity_direct, stress_intensity_dual, decompose
from .besov import WeightedNormSpec, KCurve, weighted_norm, k_functional, k_curve, regularity_exponent, sif_functional_bound_probe
from .fdsolve import solve_poisson_fd
from .zfield import ZField

__version__ = "0.1.0"
