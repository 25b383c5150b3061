"""Nested algebraic Bethe ansatz for the trigonometric gl(N) chain.

Exact rational (gmpy2) and complex float backends for the R-matrix, the
monodromy of an inhomogeneous vector-representation chain, and off-shell
Bethe vectors written as sums over partitions of the Bethe parameters.
"""

from .bethe import (BetheParams, bv_left, bv_right, gl3_explicit, normalized_bv_gl3,
                    omega_reverse, oracle_perm, prebv_B, prebv_Bhat, prebv_C, prebv_Chat)
from .chain import ChainModel, evaluate_word, monodromy_entry, transfer_matrix
from .field import EXACT, FLOAT
from .onshell import bethe_residual, eigen_residual_left, eigen_residual_right, solve_bethe, tau
from .words import WordSum, apply_phi, apply_psi, canonicalize

__version__ = "0.1.0"

__all__ = [
    "EXACT", "FLOAT", "BetheParams", "ChainModel", "WordSum",
    "apply_phi", "apply_psi", "bethe_residual", "bv_left", "bv_right", "canonicalize",
    "eigen_residual_left", "eigen_residual_right", "evaluate_word", "gl3_explicit",
    "monodromy_entry", "normalized_bv_gl3", "omega_reverse", "oracle_perm",
    "prebv_B", "prebv_Bhat", "prebv_C", "prebv_Chat", "solve_bethe", "tau",
    "transfer_matrix",
]
