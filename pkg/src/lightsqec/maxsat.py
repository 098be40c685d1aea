"""Exact MaxSAT solving of switch/light puzzles.

The hard constraints are the per-light parity conditions, decomposed into
XOR chains of arity <= 3: a light with switches v1..vm contributes

    v1 (+) h1      = init(light)        (the "anchor")
    hi             = v_{i+1} (+) h_{i+1}    for i = 1..m-2
    h_{m-1}        = vm

with m-1 fresh helper variables. XORing the chain recovers the plain
parity constraint over v1..vm. Each soft constraint is the negation of one
switch variable with weight 1, so the optimum objective equals the minimum
number of toggled switches.

Syndrome reuse: the anchor does not hardcode init(light); instead it XORs
in one extra assumption variable per light whose *value* carries the
syndrome bit. ``set_syndrome`` rewrites only those values, leaving every
constraint untouched, so a single encoded instance serves any number of
decode calls.

The internal solver is an iterative weight-bounding search: for growing w
it runs a DPLL over the chain constraints under "at most w switches true"
(XOR constraints with a single unassigned variable propagate) and returns
at the first satisfiable w, which is therefore the proven optimum. The
search branches on the unassigned switches of the first unsatisfied
light, in ascending switch order, so results are deterministic; ties
between minimum-weight solutions go to the first one found under that
order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from . import gf2
from .gf2 import BitVec
from .lightsout import LightsOutInstance


class MaxSatError(Exception):
    """Base error for MaxSAT handling."""


class ModelParseError(MaxSatError):
    """A solver model file could not be parsed."""


class ModelValidationError(MaxSatError):
    """A parsed model violates the hard constraints."""


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    NON_CONVERGED = "non_converged"
    UNSATISFIABLE = "unsatisfiable"


@dataclass(frozen=True)
class XorConstraint:
    """XOR of the variables' values must equal ``parity``.

    Negated literals are folded into the parity bit, so only plain
    variable indices are stored; arity is always 1, 2 or 3.
    """

    variables: Tuple[int, ...]
    parity: int


@dataclass(frozen=True)
class Assignment:
    """A total assignment plus its soft-constraint objective."""

    values: BitVec
    objective: int


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    assignment: Optional[Assignment]


class MaxSatInstance:
    """Hard XOR chains plus unit soft constraints for one puzzle.

    Variable layout: switch variables first (= puzzle switches), then all
    helper variables, then one assumption variable per light. Only the
    assumption *values* change between syndromes.
    """

    def __init__(
        self,
        n_switches: int,
        n_helpers: int,
        n_lights: int,
        constraints: Tuple[XorConstraint, ...],
        light_anchor: Tuple[int, ...],
        light_switches: Tuple[Tuple[int, ...], ...],
        assumption_values: List[int],
        consistency_masks: Tuple[int, ...],
    ) -> None:
        self.n_switches = n_switches
        self.n_helpers = n_helpers
        self.n_lights = n_lights
        self.constraints = constraints
        self.light_anchor = light_anchor
        self.light_switches = light_switches
        # (literal, weight) soft constraints: not(switch_v) with weight 1.
        self.soft = tuple((v, 1) for v in range(n_switches))
        self.assumption_values = assumption_values
        self._consistency_masks = consistency_masks
        self._engine: Optional[_Engine] = None

    @property
    def n_vars(self) -> int:
        return self.n_switches + self.n_helpers + self.n_lights

    def assumption_var(self, light: int) -> int:
        return self.n_switches + self.n_helpers + light

    @property
    def syndrome(self) -> BitVec:
        return BitVec.from_bits(self.assumption_values)

    def structure_key(self) -> Tuple:
        """Hashable fingerprint of everything except the assumption values."""
        return (
            self.n_switches,
            self.n_helpers,
            self.n_lights,
            self.constraints,
            self.light_anchor,
            self.light_switches,
        )

    def clone(self) -> "MaxSatInstance":
        """Independent copy sharing the immutable constraint structure."""
        return MaxSatInstance(
            self.n_switches,
            self.n_helpers,
            self.n_lights,
            self.constraints,
            self.light_anchor,
            self.light_switches,
            list(self.assumption_values),
            self._consistency_masks,
        )

    def switch_projection(self, assignment: Assignment) -> BitVec:
        mask = (1 << self.n_switches) - 1
        return BitVec(self.n_switches, assignment.values.bits & mask)


def encode(puzzle: LightsOutInstance) -> MaxSatInstance:
    """Build the reusable MaxSAT instance for a puzzle.

    The puzzle's initial light configuration becomes the starting syndrome
    (over the assumption layer). A light with no switches yields the anchor
    "assumption = 0", which is the unsatisfiable marker once a syndrome
    turns that light on: no switch can ever fix it.
    """
    n_switches = puzzle.n_switches
    helper_base = n_switches
    n_helpers = sum(max(0, len(sw) - 1) for sw in puzzle.toggles)
    assume_base = n_switches + n_helpers

    constraints: List[XorConstraint] = []
    light_anchor: List[int] = []
    next_helper = helper_base
    for light, switches in enumerate(puzzle.toggles):
        assume = assume_base + light
        m = len(switches)
        light_anchor.append(len(constraints))
        if m == 0:
            constraints.append(XorConstraint((assume,), 0))
            continue
        if m == 1:
            constraints.append(XorConstraint((switches[0], assume), 0))
            continue
        helpers = list(range(next_helper, next_helper + m - 1))
        next_helper += m - 1
        constraints.append(XorConstraint((switches[0], helpers[0], assume), 0))
        for i in range(m - 2):
            constraints.append(
                XorConstraint((helpers[i], switches[i + 1], helpers[i + 1]), 0)
            )
        constraints.append(XorConstraint((helpers[-1], switches[-1]), 0))

    # Left-nullspace of the incidence matrix: a syndrome is satisfiable iff
    # it is orthogonal to every one of these masks. Computed once; empty for
    # full-rank check matrices.
    incidence_t = gf2.BitMatrix(
        puzzle.n_switches,
        puzzle.n_lights,
        tuple(
            sum(1 << l for l, sw in enumerate(puzzle.toggles) if v in set(sw))
            for v in range(puzzle.n_switches)
        ),
    )
    masks = tuple(vec.bits for vec in gf2.nullspace_basis(incidence_t))

    return MaxSatInstance(
        n_switches=n_switches,
        n_helpers=n_helpers,
        n_lights=puzzle.n_lights,
        constraints=tuple(constraints),
        light_anchor=tuple(light_anchor),
        light_switches=puzzle.toggles,
        assumption_values=[puzzle.init[l] for l in range(puzzle.n_lights)],
        consistency_masks=masks,
    )


def set_syndrome(inst: MaxSatInstance, syndrome: BitVec) -> None:
    """Point the instance at a new syndrome; constraints are untouched."""
    if syndrome.length != inst.n_lights:
        raise gf2.DimensionMismatchError(
            f"syndrome length {syndrome.length} does not match {inst.n_lights} lights"
        )
    for light in range(inst.n_lights):
        inst.assumption_values[light] = syndrome[light]


class _SearchTimeout(Exception):
    pass


class _Engine:
    """Reusable DPLL state for one MaxSatInstance."""

    _CHECK_EVERY = 2048

    def __init__(self, inst: MaxSatInstance) -> None:
        self.inst = inst
        n_vars = inst.n_vars
        self.n_switches = inst.n_switches
        self.cons_vars: List[Tuple[int, ...]] = [c.variables for c in inst.constraints]
        self.cons_parity: List[int] = [c.parity for c in inst.constraints]
        occ: List[List[int]] = [[] for _ in range(n_vars)]
        for ci, variables in enumerate(self.cons_vars):
            for v in variables:
                occ[v].append(ci)
        self.occ: List[Tuple[int, ...]] = [tuple(o) for o in occ]
        sw_lights: List[List[int]] = [[] for _ in range(inst.n_switches)]
        for light, switches in enumerate(inst.light_switches):
            for v in switches:
                sw_lights[v].append(light)
        self.switch_lights = [tuple(o) for o in sw_lights]
        self.full_light_mask = [
            sum(1 << v for v in switches) for switches in inst.light_switches
        ]
        # Mutable per-solve state.
        self.val = bytearray(n_vars)
        self.assigned = bytearray(n_vars)
        self.trail: List[int] = []
        self.cnt = [len(v) for v in self.cons_vars]
        self.acc = [0] * len(self.cons_vars)
        self.lt_unassigned = [len(sw) for sw in inst.light_switches]
        self.lt_acc = [0] * inst.n_lights
        self.lt_mask = list(self.full_light_mask)
        self.target = [0] * inst.n_lights
        self.trues = 0
        self.deadline: Optional[float] = None
        self._ops = 0

    # -- assignment / backtracking -------------------------------------

    def _assign(self, var: int, value: int, queue: List[int]) -> bool:
        """Record an assignment; returns False on an immediate conflict.

        All bookkeeping is completed even on conflict so that a trail-based
        backtrack stays symmetric.
        """
        self.val[var] = value
        self.assigned[var] = 1
        self.trail.append(var)
        if var < self.n_switches:
            self.trues += value
            for light in self.switch_lights[var]:
                self.lt_unassigned[light] -= 1
                self.lt_acc[light] ^= value
                self.lt_mask[light] &= ~(1 << var)
        ok = True
        for ci in self.occ[var]:
            self.cnt[ci] -= 1
            self.acc[ci] ^= value
            if self.cnt[ci] == 1:
                queue.append(ci)
            elif self.cnt[ci] == 0 and self.acc[ci] != self.cons_parity[ci]:
                ok = False
        return ok

    def _propagate(self, pending: List[Tuple[int, int]]) -> bool:
        """Assign everything in ``pending`` plus all consequences."""
        queue: List[int] = []
        for var, value in pending:
            if self.assigned[var]:
                if self.val[var] != value:
                    return False
                continue
            if not self._assign(var, value, queue):
                return False
        while queue:
            self._ops += 1
            if self._ops >= self._CHECK_EVERY:
                self._ops = 0
                if self.deadline is not None and time.monotonic() > self.deadline:
                    raise _SearchTimeout
            ci = queue.pop()
            if self.cnt[ci] != 1:
                continue
            forced_var = -1
            for v in self.cons_vars[ci]:
                if not self.assigned[v]:
                    forced_var = v
                    break
            value = self.cons_parity[ci] ^ self.acc[ci]
            if not self._assign(forced_var, value, queue):
                return False
        return True

    def _backtrack(self, mark: int) -> None:
        while len(self.trail) > mark:
            var = self.trail.pop()
            value = self.val[var]
            self.assigned[var] = 0
            if var < self.n_switches:
                self.trues -= value
                for light in self.switch_lights[var]:
                    self.lt_unassigned[light] += 1
                    self.lt_acc[light] ^= value
                    self.lt_mask[light] |= 1 << var
            for ci in self.occ[var]:
                self.cnt[ci] += 1
                self.acc[ci] ^= value

    # -- search ----------------------------------------------------------

    def _first_unsat_light(self) -> int:
        target = self.target
        acc = self.lt_acc
        for light in range(self.inst.n_lights):
            if acc[light] != target[light]:
                return light
        return -1

    def _lower_bound(self) -> int:
        """Greedy count of pairwise disjoint unsatisfied lights (admissible)."""
        used = 0
        bound = 0
        target = self.target
        acc = self.lt_acc
        masks = self.lt_mask
        for light in range(self.inst.n_lights):
            if acc[light] != target[light]:
                mask = masks[light]
                if mask == 0:
                    return 1 << 30  # dead light: unsatisfiable branch
                if mask & used == 0:
                    bound += 1
                    used |= mask
        return bound

    def _complete_with_falses(self) -> bool:
        pending = [
            (v, 0) for v in range(self.n_switches) if not self.assigned[v]
        ]
        return self._propagate(pending)

    def _search(self, w: int) -> bool:
        if self.trues > w:  # propagation may force switches true past the bound
            return False
        light = self._first_unsat_light()
        if light < 0:
            mark = len(self.trail)
            if self._complete_with_falses():
                return True
            self._backtrack(mark)  # defensive; cannot happen for parity chains
            return False
        if self.trues + self._lower_bound() > w:
            return False
        mask = self.lt_mask[light]
        candidates: List[int] = []
        while mask:
            low = mask & -mask
            candidates.append(low.bit_length() - 1)
            mask ^= low
        for i, var in enumerate(candidates):
            mark = len(self.trail)
            pending = [(u, 0) for u in candidates[:i]]
            pending.append((var, 1))
            if self._propagate(pending) and self._search(w):
                return True
            self._backtrack(mark)
        return False

    def solve(self, timeout: Optional[float]) -> SolveOutcome:
        inst = self.inst
        self.deadline = time.monotonic() + timeout if timeout is not None else None
        self._ops = 0
        syndrome_bits = 0
        for light, value in enumerate(inst.assumption_values):
            self.target[light] = value
            syndrome_bits |= value << light
        for mask in inst._consistency_masks:
            if (mask & syndrome_bits).bit_count() & 1:
                return SolveOutcome(SolveStatus.UNSATISFIABLE, None)
        self._backtrack(0)
        try:
            pending = [
                (inst.assumption_var(light), value)
                for light, value in enumerate(inst.assumption_values)
            ]
            if not self._propagate(pending):
                self._backtrack(0)
                return SolveOutcome(SolveStatus.UNSATISFIABLE, None)
            start = self.trues + self._lower_bound()
            for w in range(start, inst.n_switches + 1):
                if self.deadline is not None and time.monotonic() > self.deadline:
                    raise _SearchTimeout
                if self._search(w):
                    bits = 0
                    for var in range(inst.n_vars):
                        bits |= self.val[var] << var
                    assignment = Assignment(
                        values=BitVec(inst.n_vars, bits), objective=self.trues
                    )
                    self._backtrack(0)
                    return SolveOutcome(SolveStatus.OPTIMAL, assignment)
        except _SearchTimeout:
            self._backtrack(0)
            return SolveOutcome(SolveStatus.NON_CONVERGED, None)
        self._backtrack(0)
        return SolveOutcome(SolveStatus.UNSATISFIABLE, None)


def solve(inst: MaxSatInstance, timeout: Optional[float] = None) -> SolveOutcome:
    """Minimize toggled switches subject to the hard chain constraints.

    Returns OPTIMAL with a provably minimum-objective assignment,
    NON_CONVERGED if the wall-clock ``timeout`` (seconds) elapsed first, or
    UNSATISFIABLE when the hard constraints are inconsistent. Never returns
    an assignment violating a hard constraint.
    """
    if inst._engine is None:
        inst._engine = _Engine(inst)
    return inst._engine.solve(timeout)


# -- WCNF export / model import -----------------------------------------


def _xor_clauses(variables: Sequence[int], parity: int) -> List[Tuple[int, ...]]:
    """CNF expansion of an XOR constraint; literals are 1-based DIMACS ints."""
    k = len(variables)
    clauses: List[Tuple[int, ...]] = []
    for pattern in range(1 << k):
        bits = [(pattern >> i) & 1 for i in range(k)]
        if sum(bits) % 2 == parity:
            continue  # satisfying assignment, nothing to block
        clause = tuple(
            -(v + 1) if bit else (v + 1) for v, bit in zip(variables, bits)
        )
        clauses.append(clause)
    return clauses


def instantiated_constraints(
    inst: MaxSatInstance, syndrome: BitVec
) -> List[XorConstraint]:
    """Constraints with each assumption variable replaced by its syndrome bit."""
    if syndrome.length != inst.n_lights:
        raise gf2.DimensionMismatchError("syndrome length mismatch")
    assume_base = inst.n_switches + inst.n_helpers
    out: List[XorConstraint] = []
    for constraint in inst.constraints:
        variables = []
        parity = constraint.parity
        for v in constraint.variables:
            if v >= assume_base:
                parity ^= syndrome[v - assume_base]
            else:
                variables.append(v)
        out.append(XorConstraint(tuple(variables), parity))
    return out


def export_wcnf(
    inst: MaxSatInstance,
    syndrome: BitVec,
    path: str,
    legacy_top: bool = False,
) -> None:
    """Write the instance as WCNF with the anchors instantiated by ``syndrome``.

    Default dialect is the MaxSAT Evaluation 2022 format (hard clauses
    prefixed 'h', soft clauses prefixed by their weight); ``legacy_top``
    switches to the old "p wcnf <vars> <clauses> <top>" header with the top
    weight marking hard clauses. Variables are 1-based: switches come
    first, then helpers; assumption variables never appear in the file.
    """
    hard: List[Tuple[int, ...]] = []
    for constraint in instantiated_constraints(inst, syndrome):
        if not constraint.variables:
            if constraint.parity:
                # Light with no switches but a lit syndrome: emit an
                # explicitly empty (unsatisfiable) hard clause.
                hard.append(())
            continue
        hard.extend(_xor_clauses(constraint.variables, constraint.parity))
    soft = [(weight, -(v + 1)) for v, weight in inst.soft]
    n_file_vars = inst.n_switches + inst.n_helpers
    lines: List[str] = []
    if legacy_top:
        top = sum(w for w, _ in soft) + 1
        lines.append(f"p wcnf {n_file_vars} {len(hard) + len(soft)} {top}")
        hard_prefix = str(top)
    else:
        hard_prefix = "h"
    for clause in hard:
        lines.append(" ".join([hard_prefix, *map(str, clause), "0"]))
    for weight, lit in soft:
        lines.append(f"{weight} {lit} 0")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")


def _parse_model_tokens(tokens: List[str], n_file_vars: int) -> Dict[int, int]:
    if not tokens:
        raise ModelParseError("model file contains no assignment")
    bitstring_like = all(set(tok) <= {"0", "1"} for tok in tokens) and any(
        len(tok) > 1 for tok in tokens
    )
    values: Dict[int, int] = {}
    if bitstring_like or (len(tokens) == 1 and set(tokens[0]) <= {"0", "1"}):
        bits = "".join(tokens)
        if len(bits) < n_file_vars:
            raise ModelParseError(
                f"model assigns {len(bits)} variables, instance has {n_file_vars}"
            )
        for var in range(n_file_vars):
            values[var] = int(bits[var])
        return values
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError as exc:
            raise ModelParseError(f"bad literal {tok!r} in model") from exc
        if lit == 0:
            break
        values[abs(lit) - 1] = 1 if lit > 0 else 0
    missing = [v for v in range(n_file_vars) if v not in values]
    if missing:
        raise ModelParseError(f"model does not assign variable {missing[0] + 1}")
    return values


def import_model(inst: MaxSatInstance, path: str) -> Assignment:
    """Read a solver model ('v' line of signed literals, or a 0/1 string).

    The model is validated against the hard constraints under the
    instance's current syndrome; the objective is recomputed locally from
    the switch variables.
    """
    with open(path, "r", encoding="ascii", errors="replace") as handle:
        content = handle.read()
    v_payload: List[str] = []
    for line in content.splitlines():
        stripped = line.strip()
        if stripped.startswith(("v ", "v\t")) or stripped == "v":
            v_payload.extend(stripped[1:].split())
    if not v_payload:
        v_payload = [
            tok
            for line in content.splitlines()
            if not line.lstrip().startswith(("c", "o", "s"))
            for tok in line.split()
        ]
    n_file_vars = inst.n_switches + inst.n_helpers
    values = _parse_model_tokens(v_payload, n_file_vars)

    bits = 0
    for var in range(n_file_vars):
        bits |= values.get(var, 0) << var
    for light, value in enumerate(inst.assumption_values):
        bits |= value << inst.assumption_var(light)
    full = BitVec(inst.n_vars, bits)
    for constraint in inst.constraints:
        parity = 0
        for v in constraint.variables:
            parity ^= full[v]
        if parity != constraint.parity:
            raise ModelValidationError(
                f"model violates hard constraint over variables {constraint.variables}"
            )
    objective = (bits & ((1 << inst.n_switches) - 1)).bit_count()
    return Assignment(values=full, objective=objective)
