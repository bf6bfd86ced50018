"""Exact graded-module tools for building matrices of linear forms of constant rank."""
from .betti import BettiTable, herzog_kuhl, koszul_betti, predict_truncation_betti, recurrence_poly
from .exact import GF, QQ
from .graded import GradedFreeMap, GradedFreeModule, GradedModuleWindow
from .pencil import LinearPencil, assert_constant_rank, rank_profile
from .reduction import reduce, sample_reduction
from .tree import build_tree

__version__ = "0.1.0"
