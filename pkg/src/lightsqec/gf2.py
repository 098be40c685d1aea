"""Dense bit-packed linear algebra over GF(2).

Vectors and matrices pack their bits into Python integers (bit i of a row
word is column i), which makes XOR, popcount and row reduction cheap for
the problem sizes handled here (up to a few hundred columns). All types
are immutable after construction; operations return fresh values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple


class DimensionMismatchError(ValueError):
    """Operands have incompatible dimensions."""


@dataclass(frozen=True)
class BitVec:
    """Immutable binary vector; bit i is stored at bit position i of ``bits``."""

    length: int
    bits: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits outside of declared length")

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVec":
        if not 0 <= index < length:
            raise IndexError(f"unit index {index} out of range for length {length}")
        return cls(length, 1 << index)

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVec":
        bits = 0
        length = 0
        for value in values:
            if value not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {value!r}")
            bits |= value << length
            length += 1
        return cls(length, bits)

    @classmethod
    def from_string(cls, text: str) -> "BitVec":
        """Parse a '0'/'1' string; index 0 is the leftmost character."""
        return cls.from_bits(int(ch) for ch in text.strip())

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVec":
        bits = 0
        for index in indices:
            if not 0 <= index < length:
                raise IndexError(f"index {index} out of range for length {length}")
            bits |= 1 << index
        return cls(length, bits)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(f"index {index} out of range for length {self.length}")
        return (self.bits >> index) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.length))

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.length != other.length:
            raise DimensionMismatchError(
                f"cannot xor vectors of lengths {self.length} and {other.length}"
            )
        return BitVec(self.length, self.bits ^ other.bits)

    @property
    def weight(self) -> int:
        """Number of set bits."""
        return self.bits.bit_count()

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> Tuple[int, ...]:
        """Indices of set bits, ascending."""
        return tuple(i for i in range(self.length) if (self.bits >> i) & 1)

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BitMatrix:
    """Immutable binary matrix stored as one packed integer per row."""

    rows: int
    cols: int
    row_bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows != len(self.row_bits):
            raise ValueError("row count does not match data")
        for word in self.row_bits:
            if word < 0 or word >> self.cols:
                raise ValueError("row data outside of declared width")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BitMatrix":
        vecs = [BitVec.from_bits(row) for row in rows]
        if cols is None:
            if not vecs:
                raise ValueError("cannot infer column count from an empty matrix")
            cols = vecs[0].length
        for vec in vecs:
            if vec.length != cols:
                raise DimensionMismatchError("ragged rows in matrix literal")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_bitvecs(cls, rows: Sequence[BitVec], cols: Optional[int] = None) -> "BitMatrix":
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count from an empty matrix")
            cols = rows[0].length
        for vec in rows:
            if vec.length != cols:
                raise DimensionMismatchError("ragged rows in matrix literal")
        return cls(len(rows), cols, tuple(v.bits for v in rows))

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        """Parse the text round-trip format: one '0'/'1' line per row."""
        lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
        vecs = [BitVec.from_string(line) for line in lines]
        return cls.from_bitvecs(vecs)

    def to_text(self) -> str:
        return "\n".join(self.row(i).to_string() for i in range(self.rows))

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.row_bits[i])

    def __getitem__(self, pos: Tuple[int, int]) -> int:
        i, j = pos
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {pos} out of range")
        return (self.row_bits[i] >> j) & 1

    def with_extra_row(self, extra: BitVec) -> "BitMatrix":
        if extra.length != self.cols:
            raise DimensionMismatchError(
                f"row of length {extra.length} appended to {self.cols}-column matrix"
            )
        return BitMatrix(self.rows + 1, self.cols, self.row_bits + (extra.bits,))


def mat_vec_mul(matrix: BitMatrix, vec: BitVec) -> BitVec:
    """Product over GF(2): result[i] = parity of matrix row i AND vec."""
    if vec.length != matrix.cols:
        raise DimensionMismatchError(
            f"vector length {vec.length} does not match {matrix.cols} columns"
        )
    bits = 0
    v = vec.bits
    for i, word in enumerate(matrix.row_bits):
        bits |= ((word & v).bit_count() & 1) << i
    return BitVec(matrix.rows, bits)


def _reduced_echelon(row_words: Sequence[int], cols: int) -> Tuple[List[int], List[int]]:
    """Gauss-Jordan elimination; returns (reduced nonzero rows, pivot columns).

    Row i of the result has its pivot at ``pivots[i]`` and zeros in every
    other pivot column.
    """
    work = [w for w in row_words if w]
    reduced: List[int] = []
    pivots: List[int] = []
    for word in work:
        for pivot, row in zip(pivots, reduced):
            if (word >> pivot) & 1:
                word ^= row
        if word == 0:
            continue
        pivot = (word & -word).bit_length() - 1
        for k in range(len(reduced)):
            if (reduced[k] >> pivot) & 1:
                reduced[k] ^= word
        reduced.append(word)
        pivots.append(pivot)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [reduced[k] for k in order], [pivots[k] for k in order]


def rank(matrix: BitMatrix) -> int:
    """Rank over GF(2)."""
    _, pivots = _reduced_echelon(matrix.row_bits, matrix.cols)
    return len(pivots)


def reduce_against(row_words: Sequence[int], pivots: Sequence[int], vec: BitVec) -> int:
    """Reduce ``vec`` by reduced-echelon rows; returns the residual word."""
    word = vec.bits
    for pivot, row in zip(pivots, row_words):
        if (word >> pivot) & 1:
            word ^= row
    return word


def in_rowspace(matrix: BitMatrix, vec: BitVec) -> bool:
    """True iff appending ``vec`` as an extra row does not increase the rank."""
    if vec.length != matrix.cols:
        raise DimensionMismatchError(
            f"vector length {vec.length} does not match {matrix.cols} columns"
        )
    rows, pivots = _reduced_echelon(matrix.row_bits, matrix.cols)
    return reduce_against(rows, pivots, vec) == 0


def solve(matrix: BitMatrix, rhs: BitVec) -> Optional[BitVec]:
    """Some x with matrix·x = rhs, or None if the system is inconsistent.

    The returned solution is the one obtained from the reduced system with
    every free variable fixed to 0; deterministic for fixed input.
    """
    if rhs.length != matrix.rows:
        raise DimensionMismatchError(
            f"rhs length {rhs.length} does not match {matrix.rows} rows"
        )
    # Augment each row with its rhs bit at column index `cols`.
    aug_col = matrix.cols
    augmented = [
        word | (((rhs.bits >> i) & 1) << aug_col)
        for i, word in enumerate(matrix.row_bits)
    ]
    rows, pivots = _reduced_echelon(augmented, aug_col + 1)
    bits = 0
    for pivot, row in zip(pivots, rows):
        if pivot == aug_col:
            return None  # row reads 0 = 1
        bits |= ((row >> aug_col) & 1) << pivot
    return BitVec(matrix.cols, bits)


def nullspace_basis(matrix: BitMatrix) -> List[BitVec]:
    """Basis of {x : matrix·x = 0}; one vector per free column."""
    rows, pivots = _reduced_echelon(matrix.row_bits, matrix.cols)
    pivot_set = set(pivots)
    basis: List[BitVec] = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        bits = 1 << free
        for pivot, row in zip(pivots, rows):
            if (row >> free) & 1:
                bits |= 1 << pivot
        basis.append(BitVec(matrix.cols, bits))
    return basis
