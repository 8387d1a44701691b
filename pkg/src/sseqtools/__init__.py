"""Admissible-basis Steenrod algebra arithmetic, the periodic unstable
resolution and its Ext charts, Bockstein spectral sequences, cosimplicial
calculators, and Andre-Quillen cohomology over Q, with chart rendering."""

__version__ = "0.1.0"

from .steenrod import (SteenrodElement, admissible_basis, adem_normal_form,
                       beta_left_multiply, excess)
from .unstable import (FreeUnstableModule, TrivialCoefficients,
                       beta_resolution_map, ext_chart, free_module_basis,
                       q_module_basis, verify_resolution_exactness)
from .specseq import (BigradedPage, DifferentialData, GradedAbelianGroup,
                      SpectralSequence, bockstein_from_chain_complex,
                      bockstein_pages, compare_bockstein_uass, turn_page,
                      uass_em_chart)
from .cosimplicial import (BicosimplicialVectorSpace, CochainComplex,
                           CosimplicialVectorSpace, DoubleCochainComplex,
                           FiniteBicosimplicialSet, check_pi00_lemma,
                           cohomotopy, conormalize, diagonal,
                           eilenberg_zilber_check, pi0_equalizer,
                           totalization_ss)
from .aq import (CoefficientModule, GradedCommutativePresentation,
                 algebra_hom_parametrization, aq_one, derivations,
                 genus_lift_report)
from .render import render_chart

__all__ = [name for name in dir() if not name.startswith("_")]
