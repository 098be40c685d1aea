"""Triangular 6.6.6 color codes: lattice, checks, logical operator.

Construction
------------
The code of odd distance d lives on the axial triangular grid

    {(a, b) : a >= 0, b >= 0, a + b <= s},  s = 3 (d - 1) / 2.

Sites with (a - b) % 3 == 2 are face centers; the remaining sites carry the
qubits (they form the clipped hexagonal tiling). A face collects the grid
neighbours (a±1, b), (a, b±1), (a+1, b-1), (a-1, b+1) of its center that
fall inside the triangle, which leaves four qubits on boundary faces and
six in the bulk.

Index conventions (fixed so that d = 3 yields the canonical 7-qubit check
matrix [[1001011],[0101101],[0010111]] with qubit 0 at the triangle apex):

* qubits: the three corners (0,0), (s,0), (0,s) get indices 0, 1, 2; then
  the b = 0 side (ascending a), the a + b = s side (ascending b), the
  a = 0 side (ascending b); interior qubits follow in (a, b) order.
* faces: sorted by (a + b, a), i.e. row by row moving away from the apex.
* colors: faces with center a % 3 == 0 are blue, == 2 green, == 1 red.

Stored qubit coordinates are (row, position) = (a + b, b): row 0 holds the
apex and rows grow toward the far side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from . import gf2
from .gf2 import BitMatrix, BitVec

COLOR_NAMES = ("blue", "green", "red")
_COLOR_BY_AXIAL = {0: "blue", 2: "green", 1: "red"}

_BRUTEFORCE_GUARD = 25

_NEIGHBOR_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


class CodeConstructionError(ValueError):
    """Requested code parameters are invalid."""


@dataclass(frozen=True)
class Face:
    """One check of the code: a colored face and the qubits around it."""

    index: int
    color: str
    qubits: Tuple[int, ...]


@dataclass(frozen=True)
class ColorCode:
    """A triangular color code plus its check matrix and logical operator."""

    distance: int
    n_qubits: int
    faces: Tuple[Face, ...]
    H: BitMatrix
    logical: BitVec
    qubit_coords: Tuple[Tuple[int, int], ...]
    # Reduced echelon form of H, cached for fast rowspace-membership tests.
    h_echelon: Tuple[Tuple[int, ...], Tuple[int, ...]]

    @property
    def n_faces(self) -> int:
        return len(self.faces)


def _lattice_sites(s: int) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    qubit_sites: List[Tuple[int, int]] = []
    face_sites: List[Tuple[int, int]] = []
    for a in range(s + 1):
        for b in range(s + 1 - a):
            if (a - b) % 3 == 2:
                face_sites.append((a, b))
            else:
                qubit_sites.append((a, b))
    return qubit_sites, face_sites


def _order_qubits(qubit_sites: Iterable[Tuple[int, int]], s: int) -> List[Tuple[int, int]]:
    sites = set(qubit_sites)
    corners = [(0, 0), (s, 0), (0, s)]
    left = sorted((p for p in sites if p[1] == 0 and 0 < p[0] < s))
    far = sorted(
        (p for p in sites if p[0] + p[1] == s and p not in corners),
        key=lambda p: p[1],
    )
    right = sorted((p for p in sites if p[0] == 0 and 0 < p[1] < s), key=lambda p: p[1])
    boundary = set(corners) | set(left) | set(far) | set(right)
    interior = sorted(p for p in sites if p not in boundary)
    ordered = corners + left + far + right + interior
    if set(ordered) != sites or len(ordered) != len(sites):
        raise AssertionError("qubit ordering does not cover the lattice")
    return ordered


def build_triangular_code(distance: int) -> ColorCode:
    """Construct the triangular 6.6.6 color code of odd distance >= 3."""
    if distance < 3 or distance % 2 == 0:
        raise CodeConstructionError(f"distance must be odd and >= 3, got {distance}")
    s = 3 * (distance - 1) // 2
    qubit_sites, face_sites = _lattice_sites(s)
    ordered_qubits = _order_qubits(qubit_sites, s)
    index_of: Dict[Tuple[int, int], int] = {p: i for i, p in enumerate(ordered_qubits)}
    n = len(ordered_qubits)

    expected_n = (3 * distance * distance + 1) // 4
    if n != expected_n:
        raise AssertionError(f"lattice produced {n} qubits, expected {expected_n}")

    face_sites.sort(key=lambda p: (p[0] + p[1], p[0]))
    faces: List[Face] = []
    for f_idx, (a, b) in enumerate(face_sites):
        members = sorted(
            index_of[(a + da, b + db)]
            for da, db in _NEIGHBOR_STEPS
            if (a + da, b + db) in index_of
        )
        if len(members) not in (4, 6):
            raise AssertionError(f"face {(a, b)} has {len(members)} qubits")
        faces.append(Face(f_idx, _COLOR_BY_AXIAL[a % 3], tuple(members)))
    if len(faces) != (n - 1) // 2:
        raise AssertionError(f"{len(faces)} faces for {n} qubits")

    h = BitMatrix(
        len(faces), n, tuple(sum(1 << q for q in face.qubits) for face in faces)
    )
    logical = BitVec.from_indices(
        n, (index_of[p] for p in ordered_qubits if p[1] == 0)
    )
    coords = tuple((a + b, b) for a, b in ordered_qubits)
    rows, pivots = gf2._reduced_echelon(h.row_bits, n)
    return ColorCode(
        distance=distance,
        n_qubits=n,
        faces=tuple(faces),
        H=h,
        logical=logical,
        qubit_coords=coords,
        h_echelon=(tuple(rows), tuple(pivots)),
    )


def syndrome(code: ColorCode, error: BitVec) -> BitVec:
    """Violated checks of an error pattern: H · e."""
    if error.length != code.n_qubits:
        raise gf2.DimensionMismatchError(
            f"error length {error.length} does not match {code.n_qubits} qubits"
        )
    return gf2.mat_vec_mul(code.H, error)


def is_logical_error(code: ColorCode, residual: BitVec) -> bool:
    """True iff a syndrome-free residual acts on the encoded information.

    Raises ValueError if the residual has a nonzero syndrome: such a vector
    is neither a stabilizer nor a logical operator.
    """
    if not syndrome(code, residual).is_zero:
        raise ValueError("residual has nonzero syndrome")
    rows, pivots = code.h_echelon
    return gf2.reduce_against(rows, pivots, residual) != 0


def code_distance_bruteforce(code: ColorCode) -> int:
    """Minimum weight over kernel vectors outside the rowspace of H.

    Enumerates the full nullspace (Gray-code walk), so it is guarded to
    nullspace dimensions <= 25.
    """
    basis = gf2.nullspace_basis(code.H)
    dim = len(basis)
    if dim > _BRUTEFORCE_GUARD:
        raise ValueError(f"nullspace dimension {dim} exceeds enumeration guard")
    rows, pivots = code.h_echelon
    best: Optional[int] = None
    current = 0
    for step in range(1, 1 << dim):
        current ^= basis[(step & -step).bit_length() - 1].bits
        weight = current.bit_count()
        if best is not None and weight >= best:
            continue
        if gf2.reduce_against(rows, pivots, BitVec(code.n_qubits, current)) != 0:
            best = weight
    if best is None:
        raise ValueError("code has no logical operator")
    return best


def to_json_dict(code: ColorCode) -> dict:
    """Interchange form used by the CLI: faces, H row strings, logical bits."""
    return {
        "distance": code.distance,
        "n_qubits": code.n_qubits,
        "faces": [
            {"index": f.index, "color": f.color, "qubits": list(f.qubits)}
            for f in code.faces
        ],
        "H": [code.H.row(i).to_string() for i in range(code.H.rows)],
        "logical": code.logical.to_string(),
    }


def from_json_dict(data: dict) -> ColorCode:
    """Rebuild a ColorCode from its interchange form (requires lattice metadata)."""
    try:
        n = int(data["n_qubits"])
        h = BitMatrix.from_bitvecs([BitVec.from_string(row) for row in data["H"]], cols=n)
        faces = tuple(
            Face(int(f["index"]), str(f["color"]), tuple(int(q) for q in f["qubits"]))
            for f in data["faces"]
        )
        logical = BitVec.from_string(data["logical"])
        distance = int(data["distance"])
    except KeyError as exc:
        raise ValueError(f"code description is missing field {exc}") from exc
    if logical.length != n:
        raise ValueError("logical operator length does not match qubit count")
    rows, pivots = gf2._reduced_echelon(h.row_bits, n)
    coords = tuple(
        (int(r), int(c)) for r, c in data.get("qubit_coords", [(0, 0)] * n)
    )
    return ColorCode(
        distance=distance,
        n_qubits=n,
        faces=faces,
        H=h,
        logical=logical,
        qubit_coords=coords,
        h_echelon=(tuple(rows), tuple(pivots)),
    )
