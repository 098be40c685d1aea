"""Switch/light incidence structures ("LightsOut"-style puzzles).

Three builders are provided: the classic square-lattice puzzle, the color
code variant (faces are lights, qubits are switches), and a stacked
variant for repeated noisy syndrome measurement where extra "time-like"
switches join corresponding lights of consecutive layers.

Instances are stored light-major (one switch list per light) because both
constraint generation and validation iterate over lights; a switch-major
view is derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import gf2
from .code import ColorCode
from .gf2 import BitMatrix, BitVec


@dataclass(frozen=True)
class LightsOutInstance:
    """A puzzle: which switches toggle each light, and which lights start on."""

    n_switches: int
    n_lights: int
    toggles: Tuple[Tuple[int, ...], ...]
    init: BitVec

    def __post_init__(self) -> None:
        if len(self.toggles) != self.n_lights:
            raise ValueError("toggle table length does not match light count")
        if self.init.length != self.n_lights:
            raise ValueError("init length does not match light count")
        for light, switches in enumerate(self.toggles):
            if len(set(switches)) != len(switches):
                raise ValueError(f"duplicate switch in toggles of light {light}")
            for v in switches:
                if not 0 <= v < self.n_switches:
                    raise ValueError(f"switch index {v} out of range")

    def with_init(self, init: BitVec) -> "LightsOutInstance":
        return LightsOutInstance(self.n_switches, self.n_lights, self.toggles, init)

    def switch_to_lights(self) -> Tuple[Tuple[int, ...], ...]:
        """Switch-major view: the lights toggled by each switch."""
        table: List[List[int]] = [[] for _ in range(self.n_switches)]
        for light, switches in enumerate(self.toggles):
            for v in switches:
                table[v].append(light)
        return tuple(tuple(lights) for lights in table)

    def incidence_matrix(self) -> BitMatrix:
        """Lights x switches matrix A with A[l, v] = 1 iff switch v toggles light l."""
        return BitMatrix(
            self.n_lights,
            self.n_switches,
            tuple(sum(1 << v for v in switches) for switches in self.toggles),
        )


@dataclass(frozen=True)
class SolutionSet:
    """A switch set whose toggles turn every light off."""

    switches: BitVec


def light_state(inst: LightsOutInstance, switches: BitVec) -> BitVec:
    """Lights still on after applying a switch set to the initial configuration."""
    if switches.length != inst.n_switches:
        raise gf2.DimensionMismatchError("switch vector length mismatch")
    return inst.init ^ gf2.mat_vec_mul(inst.incidence_matrix(), switches)


def is_solution(inst: LightsOutInstance, switches: BitVec) -> bool:
    return light_state(inst, switches).is_zero


def from_color_code(code: ColorCode, syndrome: BitVec) -> LightsOutInstance:
    """Decoding puzzle of a code: lights = faces, switches = qubits, init = syndrome."""
    if syndrome.length != code.n_faces:
        raise gf2.DimensionMismatchError(
            f"syndrome length {syndrome.length} does not match {code.n_faces} faces"
        )
    return LightsOutInstance(
        n_switches=code.n_qubits,
        n_lights=code.n_faces,
        toggles=tuple(face.qubits for face in code.faces),
        init=syndrome,
    )


def classic_square(n: int, m: int, init: BitVec) -> LightsOutInstance:
    """Classic n x m puzzle: a switch toggles its own cell plus the 4-neighbours."""
    if n < 1 or m < 1:
        raise ValueError("grid dimensions must be positive")
    if init.length != n * m:
        raise gf2.DimensionMismatchError(
            f"init length {init.length} does not match {n * m} cells"
        )
    toggles: List[Tuple[int, ...]] = []
    for r in range(n):
        for c in range(m):
            cell = []
            for dr, dc in ((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < n and 0 <= cc < m:
                    cell.append(rr * m + cc)
            toggles.append(tuple(sorted(cell)))
    return LightsOutInstance(n * m, n * m, tuple(toggles), init)


def solve_any(inst: LightsOutInstance) -> Optional[SolutionSet]:
    """Some (not necessarily minimal) solution via Gaussian elimination, or None."""
    solution = gf2.solve(inst.incidence_matrix(), inst.init)
    if solution is None:
        return None
    return SolutionSet(switches=solution)


def build_stack(code: ColorCode, rounds: int) -> LightsOutInstance:
    """Stacked puzzle for ``rounds`` detector layers of repeated measurement.

    Layout: light (f, t) has index t * n_faces + f. Data switches come
    first, (q, t) at index t * n_qubits + q; a data switch toggles the
    layer-t lights of the faces containing q only (layers are differences
    of consecutive measurements, so an error arriving between rounds t-1
    and t shows up in layer t alone). Time-like switches follow, (f, t)
    at index rounds * n_qubits + t * n_faces + f for t < rounds - 1,
    toggling lights (f, t) and (f, t+1). The final round carries no
    time-like switches: it is taken as noiseless, closing the time
    boundary.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    n = code.n_qubits
    n_faces = code.n_faces
    time_base = rounds * n
    toggles: List[List[int]] = [[] for _ in range(n_faces * rounds)]
    for t in range(rounds):
        for face in code.faces:
            light = t * n_faces + face.index
            toggles[light].extend(t * n + q for q in face.qubits)
    for t in range(rounds - 1):
        for f in range(n_faces):
            switch = time_base + t * n_faces + f
            toggles[t * n_faces + f].append(switch)
            toggles[(t + 1) * n_faces + f].append(switch)
    n_switches = rounds * n + (rounds - 1) * n_faces
    return LightsOutInstance(
        n_switches=n_switches,
        n_lights=n_faces * rounds,
        toggles=tuple(tuple(sorted(t_)) for t_ in toggles),
        init=BitVec.zeros(n_faces * rounds),
    )


def to_text(inst: LightsOutInstance) -> str:
    """Fixture format: 'switches lights' header, one switch list per light, init bits."""
    lines = [f"{inst.n_switches} {inst.n_lights}"]
    lines.extend(" ".join(str(v) for v in switches) for switches in inst.toggles)
    lines.append(inst.init.to_string())
    return "\n".join(lines) + "\n"


def from_text(text: str) -> LightsOutInstance:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty puzzle description")
    try:
        n_switches, n_lights = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad puzzle header {lines[0]!r}") from exc
    if len(lines) < n_lights + 2:
        raise ValueError("puzzle description is truncated")
    toggles = tuple(
        tuple(int(tok) for tok in lines[1 + light].split()) for light in range(n_lights)
    )
    init = BitVec.from_string(lines[1 + n_lights])
    if init.length != n_lights:
        raise ValueError("init line length does not match light count")
    return LightsOutInstance(n_switches, n_lights, toggles, init)
