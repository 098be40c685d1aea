"""Exact decoding toolkit for triangular color codes.

Decoding is phrased as a switches-and-lights puzzle on the code lattice
(faces are lights, qubits are switches) and solved to provable optimality
as a weighted partial MaxSAT problem, with a Monte-Carlo harness for
logical-error-rate and threshold studies.
"""

from .code import ColorCode, Face, build_triangular_code
from .decoder import DecodeResult, Decoder, decode, decode_oracle, estimate_distance
from .gf2 import BitMatrix, BitVec
from .lightsout import LightsOutInstance, SolutionSet
from .maxsat import MaxSatInstance, SolveStatus

__all__ = [
    "BitMatrix",
    "BitVec",
    "ColorCode",
    "DecodeResult",
    "Decoder",
    "Face",
    "LightsOutInstance",
    "MaxSatInstance",
    "SolutionSet",
    "SolveStatus",
    "build_triangular_code",
    "decode",
    "decode_oracle",
    "estimate_distance",
]

__version__ = "0.1.0"
