"""Tree-decompositions with unbreakable or irreducible bags, bag audits, layered sqrt-width decompositions and 1-planar gadgets."""

from .decomposition import BagProfile, TreeDecomposition, lex_less, normalise, profile
from .drawing import Crossing, Drawing
from .errors import FormatError, InvariantViolation, PreconditionError, SizeCapError
from .exact import pathwidth_exact, treewidth, treewidth_exact, validate
from .gadget import GadgetResult, build_gadget, verify_gadget
from .graph import Graph
from .layered import Layering, shallow_peel, sqrt_decomposition, tree_cotree_decomposition
from .minors import is_minor, is_subdivision_of
from .planar import BagClass, Embedding, classify_nonseparable, is_planar, planarity_embed
from .refine import Level, refine_to_fixpoint
from .separations import Separation, is_breakable, is_reducible

__version__ = "0.1.0"

__all__ = [
    "BagClass",
    "BagProfile",
    "Crossing",
    "Drawing",
    "Embedding",
    "FormatError",
    "GadgetResult",
    "Graph",
    "InvariantViolation",
    "Layering",
    "Level",
    "PreconditionError",
    "Separation",
    "SizeCapError",
    "TreeDecomposition",
    "build_gadget",
    "classify_nonseparable",
    "is_breakable",
    "is_minor",
    "is_planar",
    "is_reducible",
    "is_subdivision_of",
    "lex_less",
    "normalise",
    "pathwidth_exact",
    "planarity_embed",
    "profile",
    "refine_to_fixpoint",
    "shallow_peel",
    "sqrt_decomposition",
    "tree_cotree_decomposition",
    "treewidth",
    "treewidth_exact",
    "validate",
    "verify_gadget",
]
