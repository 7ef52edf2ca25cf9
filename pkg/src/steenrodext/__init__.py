"""Exact homological algebra over the mod-2 Steenrod algebra.

Bit-packed GF(2) linear algebra, the Steenrod algebra in admissible and
Milnor bases, degreewise-finite graded modules, minimal free resolutions
with Ext charts, connecting homomorphisms and their Yoneda cross-check,
and end-to-end E3-chart verification for the fibers of squaring
operations on mod-2 and integral Eilenberg-Mac Lane spectra.
"""

from steenrodext.gf2 import BitMatrix, EchelonForm, kernel_basis, quotient_basis, row_reduce, solve
from steenrodext.steenrod import AlgebraElement, DegreeOverflowError, SteenrodAlgebra
from steenrodext.modules import (
    FreeModule,
    GradedModule,
    ModuleHom,
    SESFactorization,
    ShortExact,
    build_A,
    build_A_mod_Sq1,
    direct_sum,
    factor_les,
    min_generator_degrees,
    sq_map,
    sqZ_map,
    suspend,
    trivial_module,
    u_map,
)
from steenrodext.resolution import ChainMap, ExtChart, Resolution, ext_chart, lift_hom, minimal_resolution
from steenrodext.connecting import (
    ConnectingMap,
    DMap,
    TwoExtension,
    connecting_map,
    d_map,
    e3_chart,
    kernel_cokernel,
    long_exact_check,
    two_extension,
    yoneda_compose,
)
from steenrodext.fibers import (
    ClosedFormChart,
    FiberReport,
    expected_chart,
    projection_filtration_report,
    run_fiber,
    sparsity_collapse_check,
)

__all__ = [
    "AlgebraElement",
    "BitMatrix",
    "ChainMap",
    "ClosedFormChart",
    "ConnectingMap",
    "DMap",
    "DegreeOverflowError",
    "EchelonForm",
    "ExtChart",
    "FiberReport",
    "FreeModule",
    "GradedModule",
    "ModuleHom",
    "Resolution",
    "SESFactorization",
    "ShortExact",
    "SteenrodAlgebra",
    "TwoExtension",
    "build_A",
    "build_A_mod_Sq1",
    "connecting_map",
    "d_map",
    "direct_sum",
    "e3_chart",
    "expected_chart",
    "ext_chart",
    "factor_les",
    "kernel_basis",
    "kernel_cokernel",
    "lift_hom",
    "long_exact_check",
    "min_generator_degrees",
    "minimal_resolution",
    "projection_filtration_report",
    "quotient_basis",
    "row_reduce",
    "run_fiber",
    "solve",
    "sparsity_collapse_check",
    "sq_map",
    "sqZ_map",
    "suspend",
    "trivial_module",
    "two_extension",
    "u_map",
    "yoneda_compose",
]

__version__ = "0.1.0"
