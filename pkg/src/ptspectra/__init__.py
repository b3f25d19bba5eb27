"""Spectra of H = p^2 + s x^N by truncated diagonalization, complex-contour shooting and WKB."""

__version__ = "0.1.0"

from .basis import (
    BasisConfig,
    hamiltonian_matrix,
    momentum_squared_matrix,
    position_matrix,
    power_matrix,
)
from .eigen import EigenvalueSet, eigenvalues, hermitian_eigenvalues
from .potential import PolynomialPotential, PotentialSpec, parse_coupling
from .shooting import (
    ContourSpec,
    ShootingConfig,
    default_wedges,
    find_eigenvalue,
    spectrum,
    wronskian,
)
from .truncation import (
    ConvergenceTrace,
    LadderConfig,
    Status,
    converged_real_spectrum,
    run_ladder,
    scale_scan,
)
from .wkb import wkb_closed_form, wkb_quadrature
