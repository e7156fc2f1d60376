"""mullsem: executable semantics for linear logic types with fixpoints.

Parses and variance-checks type expressions with least/greatest
fixpoint binders and interprets them in concrete models: the
relational model, non-uniform totality spaces (focused orthogonality
over relations), finite phase spaces, and weighted relations over
continuous semirings.
"""

from .budgets import Budgets, DEFAULT_BUDGETS
from .formula import (Bot, Context, EMPTY_CONTEXT, Formula, Lolli, Mu, Neg,
                      Nu, OfCourse, One, Par, Plus, Sort, Tensor, Top, Var,
                      WhyNot, With, Zero, alpha_eq, check_variance, free_vars,
                      nnf, parse, substitute, to_text)
from .lattice import FiniteLattice, MonotoneOp, gfp, lfp
from .phase import (PhaseSpace, fact_closure, holds, interpret_phase,
                    parse_phase_space, search_counter_model)
from .relmodel import (Carrier, Elem, Relation, compose_rel,
                       functor_on_relations, interpret_carrier)
from .totality import (TotalitySpace, UpFamily, biclosure,
                       check_total_morphism, interpret_totality, orthogonal)
from .wrel import (FunExpr, PoleSpec, SemiringMatrix, Verdict, bipolar_member,
                   check_uniformity, compose, is_admissible_pole,
                   kleene_fixpoint, orthogonal_pair)

__version__ = "0.1.0"

__all__ = [
    "Budgets", "DEFAULT_BUDGETS",
    "Bot", "Context", "EMPTY_CONTEXT", "Formula", "Lolli", "Mu", "Neg", "Nu",
    "OfCourse", "One", "Par", "Plus", "Sort", "Tensor", "Top", "Var",
    "WhyNot", "With", "Zero", "alpha_eq", "check_variance", "free_vars",
    "nnf", "parse", "substitute", "to_text",
    "FiniteLattice", "MonotoneOp", "gfp", "lfp",
    "PhaseSpace", "fact_closure", "holds", "interpret_phase",
    "parse_phase_space", "search_counter_model",
    "Carrier", "Elem", "Relation", "compose_rel", "functor_on_relations",
    "interpret_carrier",
    "TotalitySpace", "UpFamily", "biclosure", "check_total_morphism",
    "interpret_totality", "orthogonal",
    "FunExpr", "PoleSpec", "SemiringMatrix", "Verdict", "bipolar_member",
    "check_uniformity", "compose", "is_admissible_pole", "kleene_fixpoint",
    "orthogonal_pair",
    "__version__",
]
