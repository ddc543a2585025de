"""Braverman-Kazhdan kernels for finite general linear groups, computed geometrically
and spectrally."""

from .chartab import CharacterTable, ClassFunction, dixon_table
from .dltheory import TorusCharacter, TorusType, dl_character, lusztig_series, torus_types
from .errors import BudgetError, SpecError
from .fourier import c_pair, gamma_from_kernel, kernel_from_gamma, restricted_fourier
from .group import ClassTable, StandardGroupSpec
from .transfer import RhoFlatSpec, bk_kernel_geometric, bk_kernel_spectral, compare_kernels

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CharacterTable",
    "ClassFunction",
    "ClassTable",
    "RhoFlatSpec",
    "SpecError",
    "StandardGroupSpec",
    "TorusCharacter",
    "TorusType",
    "bk_kernel_geometric",
    "bk_kernel_spectral",
    "c_pair",
    "compare_kernels",
    "dixon_table",
    "dl_character",
    "gamma_from_kernel",
    "kernel_from_gamma",
    "lusztig_series",
    "restricted_fourier",
    "torus_types",
]
