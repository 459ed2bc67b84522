"""Trees, coloured operads and their nerves, forests of finite pointed sets,
and the symmetric monoidal envelope of an operad nerve, at desk scale."""

from .trees import Tree, corolla, enumerate_trees, eta, parse_term, to_term
from .omega import OmegaMorphism, elementary_faces, hom_set
from .operads import Assoc, Com, Dendrex, OmegaOperad, load_operad, nerve_dendrices, omega_as_operad
from .subcomplexes import Subcomplex, boundary, extend, inner_horn, leaf_horn, root_horn, spine
from .forests import Chain, PointedMap, chain_to_forest, parse_chain, render_ascii, render_dot
from .envelope import (Bounds, DecObject, EnvSimplex, cocartesian_lift, env_simplices, fiber_compare,
                       inner_fillers, is_cocartesian, segal_compare)

__version__ = "0.1.0"

__all__ = [
    "Tree", "corolla", "enumerate_trees", "eta", "parse_term", "to_term",
    "OmegaMorphism", "elementary_faces", "hom_set",
    "Assoc", "Com", "Dendrex", "OmegaOperad", "load_operad", "nerve_dendrices", "omega_as_operad",
    "Subcomplex", "boundary", "extend", "inner_horn", "leaf_horn", "root_horn", "spine",
    "Chain", "PointedMap", "chain_to_forest", "parse_chain", "render_ascii", "render_dot",
    "Bounds", "DecObject", "EnvSimplex", "cocartesian_lift", "env_simplices", "fiber_compare",
    "inner_fillers", "is_cocartesian", "segal_compare",
]
