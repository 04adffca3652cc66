"""Exact verification of the equivalence between constructible sheaves on the loop space of C
and graded modules over the nodal ring Q[x, y, 1/y]/(x(y-1))."""

__version__ = "0.1.0"

from .laurent import LaurentMatrix, LaurentPoly
from .modules import FPModule, ModuleMap, map_ops
from .nodal_graded import GeneratorId, WindowDiagram, ext_truncated, graded_hom, structure_generator, twist
from .strat_quiver import ProjectiveId, QuiverRep, check_rep, hom_projectives, quiver_presentation
from .mirror import apply_F, apply_G, roundtrip_check, verify_compat, verify_ff
from .gcft import conv_monodromy, conv_shift, spectral_tensor_skyscraper, verify_intertwine
from .report import VerificationReport

__all__ = [
    "LaurentPoly", "LaurentMatrix", "FPModule", "ModuleMap", "map_ops",
    "GeneratorId", "WindowDiagram", "ext_truncated", "graded_hom", "structure_generator", "twist",
    "ProjectiveId", "QuiverRep", "check_rep", "hom_projectives", "quiver_presentation",
    "apply_F", "apply_G", "roundtrip_check", "verify_compat", "verify_ff",
    "conv_monodromy", "conv_shift", "spectral_tensor_skyscraper", "verify_intertwine",
    "VerificationReport",
]
