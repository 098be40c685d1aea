"""Monte-Carlo harness: sample errors, decode, count logical failures.

Noise models: independent bit flips with probability p per qubit, and a
phenomenological model with p-flips per qubit per round plus q-flips on
measurement outcomes, decoded on the stacked puzzle.

Determinism: every sample draws from its own numpy stream derived from
(seed, sample index), so results are identical for any worker count and
any chunking of the batch.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import lightsout
from .code import ColorCode, build_triangular_code, is_logical_error, syndrome
from .decoder import Decoder, PuzzleSolver
from .gf2 import BitVec
from .maxsat import SolveStatus

_CHUNK = 256


@dataclass(frozen=True)
class BitFlipNoise:
    """Each qubit flips independently with probability p; perfect syndromes."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be a probability, got {self.p}")


@dataclass(frozen=True)
class PhenomenologicalNoise:
    """Per-round qubit flips (p) plus measurement-outcome flips (q).

    ``rounds`` counts detector layers; the final round is measured
    noiselessly. Leaving q unset uses q = p.
    """

    p: float
    rounds: int
    q: Optional[float] = None

    def __post_init__(self) -> None:
        if self.q is None:
            object.__setattr__(self, "q", self.p)
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ValueError("p and q must be probabilities")
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")


NoiseModel = Union[BitFlipNoise, PhenomenologicalNoise]


@dataclass(frozen=True)
class SampleOutcome:
    logical: bool
    non_converged: bool
    decode_us: float


@dataclass(frozen=True)
class SimRecord:
    """Aggregate of one (distance, p) Monte-Carlo point."""

    distance: int
    p: float
    samples: int
    logical_errors: int
    non_converged: int
    ler: float
    ler_stderr: float
    mean_decode_us: float
    seed: int


CSV_COLUMNS = (
    "distance",
    "p",
    "samples",
    "logical_errors",
    "non_converged",
    "ler",
    "ler_stderr",
    "mean_decode_us",
    "seed",
)


def _bits_from_bools(flags: np.ndarray) -> int:
    return int.from_bytes(
        np.packbits(flags, bitorder="little").tobytes(), "little"
    )


class _Sampler:
    """Per-worker state: the pre-encoded solver plus cached masks."""

    def __init__(
        self, code: ColorCode, noise: NoiseModel, timeout: Optional[float]
    ) -> None:
        self.code = code
        self.noise = noise
        self.timeout = timeout
        self.h_rows = code.H.row_bits
        if isinstance(noise, BitFlipNoise):
            self.decoder = Decoder(code)
        else:
            self.stack = lightsout.build_stack(code, noise.rounds)
            self.solver = PuzzleSolver(self.stack)

    def _classify(self, residual_bits: int) -> bool:
        residual = BitVec(self.code.n_qubits, residual_bits)
        if not syndrome(self.code, residual).is_zero:
            return True  # leftover syndrome (non-convergence): count as failure
        return is_logical_error(self.code, residual)

    def sample(self, rng: np.random.Generator) -> SampleOutcome:
        if isinstance(self.noise, BitFlipNoise):
            return self._sample_bitflip(rng)
        return self._sample_phenomenological(rng)

    def _sample_bitflip(self, rng: np.random.Generator) -> SampleOutcome:
        n = self.code.n_qubits
        error_bits = _bits_from_bools(rng.random(n) < self.noise.p)
        synd = 0
        for i, row in enumerate(self.h_rows):
            synd |= ((row & error_bits).bit_count() & 1) << i
        result = self.decoder.decode(
            BitVec(self.code.n_faces, synd), timeout=self.timeout
        )
        residual = error_bits ^ result.estimate.bits
        return SampleOutcome(
            logical=self._classify(residual),
            non_converged=result.status is SolveStatus.NON_CONVERGED,
            decode_us=result.solve_time * 1e6,
        )

    def _sample_phenomenological(self, rng: np.random.Generator) -> SampleOutcome:
        noise = self.noise
        code = self.code
        n = code.n_qubits
        n_faces = code.n_faces
        rounds = noise.rounds
        cumulative = 0
        previous = 0
        detectors = 0
        for t in range(rounds):
            cumulative ^= _bits_from_bools(rng.random(n) < noise.p)
            measured = 0
            for i, row in enumerate(self.h_rows):
                measured |= ((row & cumulative).bit_count() & 1) << i
            if t < rounds - 1:  # final round is noiseless
                measured ^= _bits_from_bools(rng.random(n_faces) < noise.q)
            detectors |= (measured ^ previous) << (t * n_faces)
            previous = measured
        outcome, seconds = self.solver.solve(
            BitVec(n_faces * rounds, detectors), timeout=self.timeout
        )
        if outcome.status is SolveStatus.OPTIMAL:
            bits = outcome.assignment.values.bits
            qubit_mask = (1 << n) - 1
            correction = 0
            for t in range(rounds):
                correction ^= (bits >> (t * n)) & qubit_mask
            non_converged = False
        else:
            correction = 0
            non_converged = True
        return SampleOutcome(
            logical=self._classify(cumulative ^ correction),
            non_converged=non_converged,
            decode_us=seconds * 1e6,
        )


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """The stream for sample ``index`` of a batch seeded with ``seed``."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    )


def run_sample(
    code: ColorCode,
    noise: NoiseModel,
    rng: np.random.Generator,
    timeout: Optional[float] = None,
    _sampler: Optional[_Sampler] = None,
) -> SampleOutcome:
    """One Monte-Carlo trial: sample error, decode, classify the residual."""
    sampler = _sampler if _sampler is not None else _Sampler(code, noise, timeout)
    return sampler.sample(rng)


_worker_state: Optional[Tuple[_Sampler, int]] = None


def _init_worker(distance: int, noise: NoiseModel, timeout: Optional[float], seed: int) -> None:
    global _worker_state
    _worker_state = (_Sampler(build_triangular_code(distance), noise, timeout), seed)


def _run_chunk_worker(bounds: Tuple[int, int]) -> Tuple[int, int, float]:
    assert _worker_state is not None
    sampler, seed = _worker_state
    return _run_chunk(sampler, seed, bounds)


def _run_chunk(sampler: _Sampler, seed: int, bounds: Tuple[int, int]) -> Tuple[int, int, float]:
    start, stop = bounds
    logical = 0
    non_converged = 0
    decode_us = 0.0
    for index in range(start, stop):
        outcome = sampler.sample(sample_rng(seed, index))
        logical += outcome.logical
        non_converged += outcome.non_converged
        decode_us += outcome.decode_us
    return logical, non_converged, decode_us


def run_batch(
    code: ColorCode,
    noise: NoiseModel,
    samples: int,
    max_logical: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
    timeout: Optional[float] = None,
) -> SimRecord:
    """Aggregate up to ``samples`` trials into a SimRecord.

    Stops early once ``max_logical`` logical errors have accumulated,
    checked at fixed chunk boundaries so that the result is identical for
    every worker count.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    chunks = [
        (start, min(start + _CHUNK, samples)) for start in range(0, samples, _CHUNK)
    ]
    logical = 0
    non_converged = 0
    decode_us = 0.0
    done = 0

    def _accumulate(chunk: Tuple[int, int], result: Tuple[int, int, float]) -> bool:
        nonlocal logical, non_converged, decode_us, done
        logical += result[0]
        non_converged += result[1]
        decode_us += result[2]
        done = chunk[1]
        return max_logical is not None and logical >= max_logical

    if workers <= 1:
        sampler = _Sampler(code, noise, timeout)
        for chunk in chunks:
            if _accumulate(chunk, _run_chunk(sampler, seed, chunk)):
                break
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(
            processes=workers,
            initializer=_init_worker,
            initargs=(code.distance, noise, timeout, seed),
        ) as pool:
            for chunk, result in zip(chunks, pool.imap(_run_chunk_worker, chunks)):
                if _accumulate(chunk, result):
                    break

    p = noise.p
    ler = logical / done
    return SimRecord(
        distance=code.distance,
        p=p,
        samples=done,
        logical_errors=logical,
        non_converged=non_converged,
        ler=ler,
        ler_stderr=math.sqrt(ler * (1.0 - ler) / done),
        mean_decode_us=decode_us / done,
        seed=seed,
    )


def write_csv(path: str, records: Sequence[SimRecord]) -> None:
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.distance,
                    repr(r.p),
                    r.samples,
                    r.logical_errors,
                    r.non_converged,
                    repr(r.ler),
                    repr(r.ler_stderr),
                    repr(r.mean_decode_us),
                    r.seed,
                ]
            )


def read_csv(path: str) -> List[SimRecord]:
    with open(path, "r", newline="", encoding="ascii") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(
                f"unexpected CSV columns {reader.fieldnames!r}; "
                f"expected {','.join(CSV_COLUMNS)}"
            )
        records = []
        for row in reader:
            records.append(
                SimRecord(
                    distance=int(row["distance"]),
                    p=float(row["p"]),
                    samples=int(row["samples"]),
                    logical_errors=int(row["logical_errors"]),
                    non_converged=int(row["non_converged"]),
                    ler=float(row["ler"]),
                    ler_stderr=float(row["ler_stderr"]),
                    mean_decode_us=float(row["mean_decode_us"]),
                    seed=int(row["seed"]),
                )
            )
    return records
