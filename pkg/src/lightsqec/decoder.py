"""Syndrome-in, minimum-weight-estimate-out decoding for color codes.

``Decoder`` pre-encodes the MaxSAT instance of a code once and reuses it
across syndromes (only the assumption layer changes per call). The
brute-force coset oracle and the distance estimator live here as well.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Tuple

from . import gf2, lightsout, maxsat
from .code import ColorCode
from .gf2 import BitMatrix, BitVec
from .lightsout import LightsOutInstance
from .maxsat import MaxSatInstance, SolveOutcome, SolveStatus

_ORACLE_GUARD = 25


class NonConvergedError(RuntimeError):
    """The solver hit its timeout before proving optimality."""


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode call.

    For OPTIMAL results the estimate satisfies H·estimate = syndrome and has
    provably minimum Hamming weight; a NON_CONVERGED result carries the
    all-zeros estimate (the non-convergence policy: apply nothing, record a
    likely failure).
    """

    estimate: BitVec
    weight: int
    status: SolveStatus
    solve_time: float


class PuzzleSolver:
    """Reusable exact solver for one switch/light puzzle."""

    def __init__(self, puzzle: LightsOutInstance) -> None:
        self.puzzle = puzzle
        self.instance: MaxSatInstance = maxsat.encode(puzzle)

    def solve(
        self, syndrome: BitVec, timeout: Optional[float] = None
    ) -> Tuple[SolveOutcome, float]:
        """Solve under the given light configuration; returns (outcome, seconds)."""
        maxsat.set_syndrome(self.instance, syndrome)
        start = time.perf_counter()
        outcome = maxsat.solve(self.instance, timeout)
        return outcome, time.perf_counter() - start

    def switches_of(self, outcome: SolveOutcome) -> BitVec:
        assert outcome.assignment is not None
        return self.instance.switch_projection(outcome.assignment)


class Decoder:
    """Minimum-weight decoder for a fixed code, reusable across syndromes."""

    def __init__(self, code: ColorCode) -> None:
        self.code = code
        self._solver = PuzzleSolver(
            lightsout.from_color_code(code, BitVec.zeros(code.n_faces))
        )

    def decode(self, syndrome: BitVec, timeout: Optional[float] = None) -> DecodeResult:
        if syndrome.length != self.code.n_faces:
            raise gf2.DimensionMismatchError(
                f"syndrome length {syndrome.length} does not match "
                f"{self.code.n_faces} faces"
            )
        outcome, seconds = self._solver.solve(syndrome, timeout)
        if outcome.status is SolveStatus.OPTIMAL:
            estimate = self._solver.switches_of(outcome)
            return DecodeResult(
                estimate=estimate,
                weight=outcome.assignment.objective,
                status=SolveStatus.OPTIMAL,
                solve_time=seconds,
            )
        if outcome.status is SolveStatus.NON_CONVERGED:
            return DecodeResult(
                estimate=BitVec.zeros(self.code.n_qubits),
                weight=0,
                status=SolveStatus.NON_CONVERGED,
                solve_time=seconds,
            )
        raise ValueError("syndrome is inconsistent with the check matrix")


def decode(
    code: ColorCode, syndrome: BitVec, timeout: Optional[float] = None
) -> DecodeResult:
    """One-shot decode; build a ``Decoder`` instead when decoding repeatedly."""
    return Decoder(code).decode(syndrome, timeout)


def decode_check_matrix(
    matrix: BitMatrix, syndrome: BitVec, timeout: Optional[float] = None
) -> DecodeResult:
    """Decode against a bare check matrix (no lattice metadata required)."""
    puzzle = LightsOutInstance(
        n_switches=matrix.cols,
        n_lights=matrix.rows,
        toggles=tuple(matrix.row(i).support() for i in range(matrix.rows)),
        init=syndrome,
    )
    solver = PuzzleSolver(puzzle)
    outcome, seconds = solver.solve(syndrome, timeout)
    if outcome.status is SolveStatus.OPTIMAL:
        return DecodeResult(
            estimate=solver.switches_of(outcome),
            weight=outcome.assignment.objective,
            status=SolveStatus.OPTIMAL,
            solve_time=seconds,
        )
    if outcome.status is SolveStatus.NON_CONVERGED:
        return DecodeResult(
            estimate=BitVec.zeros(matrix.cols),
            weight=0,
            status=SolveStatus.NON_CONVERGED,
            solve_time=seconds,
        )
    raise ValueError("syndrome is inconsistent with the check matrix")


def decode_oracle(code: ColorCode, syndrome: BitVec) -> BitVec:
    """Independent ground truth: exhaustive minimum over the solution coset.

    Walks particular-solution + every nullspace combination (Gray code), so
    it is guarded to nullspace dimensions <= 25. Weight ties break toward
    the lexicographically smallest bit string, making outputs reproducible
    fixtures.
    """
    if syndrome.length != code.n_faces:
        raise gf2.DimensionMismatchError(
            f"syndrome length {syndrome.length} does not match {code.n_faces} faces"
        )
    particular = gf2.solve(code.H, syndrome)
    if particular is None:
        raise ValueError("syndrome is inconsistent with the check matrix")
    basis = gf2.nullspace_basis(code.H)
    if len(basis) > _ORACLE_GUARD:
        raise ValueError(f"nullspace dimension {len(basis)} exceeds enumeration guard")
    basis_bits = [vec.bits for vec in basis]
    n = code.n_qubits

    def lex_key(bits: int) -> str:
        return BitVec(n, bits).to_string()

    best_bits = particular.bits
    best_weight = best_bits.bit_count()
    best_key: Optional[str] = None
    current = particular.bits
    for step in range(1, 1 << len(basis_bits)):
        current ^= basis_bits[(step & -step).bit_length() - 1]
        weight = current.bit_count()
        if weight > best_weight:
            continue
        if weight < best_weight:
            best_bits, best_weight, best_key = current, weight, None
            continue
        if best_key is None:
            best_key = lex_key(best_bits)
        key = lex_key(current)
        if key < best_key:
            best_bits, best_key = current, key
    return BitVec(n, best_bits)


def estimate_distance(code: ColorCode, timeout: Optional[float] = None) -> int:
    """Minimum weight of a kernel vector anticommuting with the logical.

    Solves the MaxSAT instance whose hard constraints are H·r = 0 plus one
    extra parity pinning r·logical = 1; the optimum equals the code
    distance. Raises NonConvergedError if the timeout elapses first.
    """
    toggles = tuple(face.qubits for face in code.faces) + (code.logical.support(),)
    init = BitVec.from_indices(code.n_faces + 1, [code.n_faces])
    puzzle = LightsOutInstance(
        n_switches=code.n_qubits,
        n_lights=code.n_faces + 1,
        toggles=toggles,
        init=init,
    )
    outcome, _ = PuzzleSolver(puzzle).solve(init, timeout)
    if outcome.status is SolveStatus.NON_CONVERGED:
        raise NonConvergedError("distance estimation hit the solver timeout")
    if outcome.status is not SolveStatus.OPTIMAL:
        raise ValueError("code admits no logical operator")
    return outcome.assignment.objective
