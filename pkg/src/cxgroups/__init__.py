"""Complexes of groups over finite scwols: quotients, developments,
coverings, and the correspondence between overgroups and coverings."""
from .groups import GroupHom, Perm, PermGroup
from .scwol import Scwol, ScwolMorphism, barycentric_subdivision, scwol_from_complex, simplicial_complex, validate_scwol
from .fp_groups import Presentation, abelianization, pi1_presentation, simplify, todd_coxeter
from .complexes import CogMorphism, ComplexOfGroups, MorphismToGroup, is_covering, validate_cog, validate_morphism
from .actions import ChoiceData, Quotient, ScwolAction, automorphism_group, covolume, induced_morphism
from .developments import develop, is_developable, kernel_NT, recover_cog, universal_cover
from .functoriality import induced_maps, lambda_T, main_lemma_check, reconstruct_morphism, theta_iso
from .bijection import OvergroupContext, bijection_audit, conjugacy_oracle, conjugacy_solve, map_a, map_b

__all__ = [
    "GroupHom", "Perm", "PermGroup",
    "Scwol", "ScwolMorphism", "barycentric_subdivision", "scwol_from_complex", "simplicial_complex", "validate_scwol",
    "Presentation", "abelianization", "pi1_presentation", "simplify", "todd_coxeter",
    "CogMorphism", "ComplexOfGroups", "MorphismToGroup", "is_covering", "validate_cog", "validate_morphism",
    "ChoiceData", "Quotient", "ScwolAction", "automorphism_group", "covolume", "induced_morphism",
    "develop", "is_developable", "kernel_NT", "recover_cog", "universal_cover",
    "induced_maps", "lambda_T", "main_lemma_check", "reconstruct_morphism", "theta_iso",
    "OvergroupContext", "bijection_audit", "conjugacy_oracle", "conjugacy_solve", "map_a", "map_b",
]

__version__ = "0.1.0"
