"""Exact local normal zeta functions of the free class-2 nilpotent groups F_{2,d},
with brute-force ideal counts of the associated Lie rings as an independent check."""

__version__ = "0.1.0"

from .laurent import FactoredRat, LaurentPoly, fr_equal, fr_series  # noqa: E402
from .zetacore import SubsetPair, ZetaParams, enumerate_pairs, local_zeta, term_A_IJ  # noqa: E402

__all__ = [
    "FactoredRat",
    "LaurentPoly",
    "SubsetPair",
    "ZetaParams",
    "enumerate_pairs",
    "fr_equal",
    "fr_series",
    "local_zeta",
    "term_A_IJ",
]
