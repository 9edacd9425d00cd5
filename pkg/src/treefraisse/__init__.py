"""Epimorphisms, amalgamations and inverse sequences of finite trees.

Graphs are reflexive and symmetric: every vertex carries an implicit loop.
"""

from .amalgamation import (
    AmalgamationError,
    AmalgamationResult,
    NoAmalgamationError,
    amalgamate,
    confluent_amalgamate,
    end_preserving_amalgamate,
    monotone_amalgamate,
    pullback,
    search_amalgamate,
    tree_amalgamate,
    unfolding_amalgamate,
)
from .factorization import Factorization, ml_factorize
from .families import FAMILIES, family, run_suite
from .graph import Graph, canonical_form, enumerate_rooted_trees, enumerate_trees, is_tree, labelled
from .limits import BuildConfig, InverseSequence, approximant_report, build_sequence
from .morphisms import GraphMap, PropertyReport, check, compose, enumerate_epis
from .rooted import RootedTree

__version__ = "0.1.0"
