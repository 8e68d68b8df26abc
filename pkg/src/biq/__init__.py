"""First-order bi-intuitionistic logic over constant-domain Kripke models.

Subpackages: `syntax` (formulas, parsing, enumeration), `upsets`
(ultimately periodic set algebra), `kripke` (finite models and forcing),
`asim` (bi-asimulation games and separation), `counterexample` (the
symbolic interpolation counterexample suite), `cli` (the `biq` command).
"""

from .syntax import (
    Atom, Bottom, Top, And, Or, Implies, CoImplies, Forall, Exists,
    Const, Var, Formula, Signature, format_formula, mints_formulas,
    parse_formula,
)
from .upsets import UPSet
from .kripke import FiniteModel, PointedModel, forces, validate_model

__all__ = [
    "Atom", "Bottom", "Top", "And", "Or", "Implies", "CoImplies", "Forall",
    "Exists", "Const", "Var", "Formula", "Signature", "format_formula",
    "mints_formulas", "parse_formula", "UPSet", "FiniteModel", "PointedModel",
    "forces", "validate_model",
]
