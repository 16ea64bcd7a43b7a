"""Compile the Schur transform into two-level rotations and check the result."""
from .cg import CGBlock, cg_block, cg_qubit, cg_qudit
from .circuit import SchurCircuit, build_schur_circuit, expand_full_matrix, schur_matrix
from .combinatorics import Tableau, dim_Q, enumerate_tableaux, multiplicity, partitions
from .errors import LabelOutOfRange, NotUnitary, RealizationNotInvariant, SchurTransformError, SpaceCapExceeded
from .layout import BasisLayout, SchurLabel, decode, encode, layout_for, multiplicity_labeling
from .twolevel import TwoLevelRotation, decompose, sequence_length
from .verifier import verify_all

__all__ = [
    "BasisLayout",
    "CGBlock",
    "LabelOutOfRange",
    "NotUnitary",
    "RealizationNotInvariant",
    "SchurCircuit",
    "SchurLabel",
    "SchurTransformError",
    "SpaceCapExceeded",
    "Tableau",
    "TwoLevelRotation",
    "build_schur_circuit",
    "cg_block",
    "cg_qubit",
    "cg_qudit",
    "decode",
    "decompose",
    "dim_Q",
    "encode",
    "enumerate_tableaux",
    "expand_full_matrix",
    "layout_for",
    "multiplicity",
    "multiplicity_labeling",
    "partitions",
    "schur_matrix",
    "sequence_length",
    "verify_all",
]
