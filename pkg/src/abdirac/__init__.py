"""abdirac: the 2D massless Dirac operator in an Aharonov-Bohm field.

Partial-wave decomposition, the diagonalizing Bessel-type transform with its
closed-form fractional-power kernels, exact spectral time evolution, and a
numerical verification harness for the local smoothing / KSS / weighted
Strichartz estimates the operator satisfies.
"""

__version__ = "0.1.0"

from .backend import BACKEND
from .grids import (EnergyGrid, RadialGrid, RadialSpinor, l2_norm,
                    make_energy_grid, make_radial_grid)
from .partialwave import ChannelSet, SpinorField, decompose, synthesize
from .spectral import (Channel, FieldSetup, SpectralCoeff, TransformOperator,
                       eigenfunction, forward_transform, inverse_transform)

__all__ = [
    "BACKEND", "__version__",
    "RadialGrid", "EnergyGrid", "RadialSpinor", "make_radial_grid",
    "make_energy_grid", "l2_norm",
    "SpinorField", "ChannelSet", "decompose", "synthesize",
    "Channel", "FieldSetup", "SpectralCoeff", "TransformOperator",
    "eigenfunction", "forward_transform", "inverse_transform",
]
