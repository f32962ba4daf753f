"""thomstem: Thom-space cell calculus over Picard tori.

Exact exterior-algebra arithmetic, index-bundle Chern characters,
Steenrod-square detection of attaching maps, and Atiyah-Hirzebruch
assembly of stable cohomotopy groups, with trivial/nontrivial/unknown
verdicts for user-supplied class assignments.
"""

from ._backend import BACKEND as kernel_backend
from .ahss import (ColumnEntry, GroupReport, assemble, evaluate_class,
                   vanishing_certificate)
from .chern import (BigradedClass, BundleData, ManifoldData,
                    chern_character_index, connected_sum, index_bundle,
                    make_homology_torus)
from .exterior import (ExteriorClass, Monomial, RankMismatchError, add, mod2,
                       scale, sq_torus, top_coefficient, wedge)
from .stems import (AbelianGroup, OutOfTableError, StemElement, compose,
                    eta, eta_sq, nu_multiple, one, stem_group, zero)
from .thom import (AttachLabel, StableCell, StableCellComplex,
                   infer_attachments, skeletal_quotient,
                   sphere_bundle_quotient, sq_thom, suspend, thom_cells)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup", "AttachLabel", "BigradedClass", "BundleData",
    "ColumnEntry", "ExteriorClass", "GroupReport", "ManifoldData",
    "Monomial", "OutOfTableError", "RankMismatchError", "StableCell",
    "StableCellComplex", "StemElement", "add", "assemble",
    "chern_character_index", "compose", "connected_sum", "eta", "eta_sq",
    "evaluate_class", "index_bundle", "infer_attachments", "kernel_backend",
    "make_homology_torus", "mod2", "nu_multiple", "one", "scale",
    "skeletal_quotient", "sphere_bundle_quotient", "sq_thom", "sq_torus",
    "stem_group", "suspend", "thom_cells", "top_coefficient",
    "vanishing_certificate", "wedge", "zero",
]
