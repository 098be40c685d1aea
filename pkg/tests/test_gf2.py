import random

import pytest

from lightsqec import gf2
from lightsqec.gf2 import BitMatrix, BitVec, DimensionMismatchError


def example_h(rows):
    return BitMatrix.from_bitvecs([BitVec.from_string(r) for r in rows])


def random_matrix(rng, rows, cols):
    return BitMatrix(rows, cols, tuple(rng.getrandbits(cols) for _ in range(rows)))


def random_vec(rng, n):
    return BitVec(n, rng.getrandbits(n))


class TestBitVec:
    def test_round_trips(self):
        v = BitVec.from_string("10110")
        assert v.to_string() == "10110"
        assert list(v) == [1, 0, 1, 1, 0]
        assert v.weight == 3
        assert v.support() == (0, 2, 3)
        assert BitVec.from_bits([1, 0, 1, 1, 0]) == v
        assert BitVec.from_indices(5, (0, 2, 3)) == v

    def test_xor_and_bounds(self):
        u = BitVec.from_string("1100")
        v = BitVec.from_string("1010")
        assert (u ^ v).to_string() == "0110"
        with pytest.raises(DimensionMismatchError):
            u ^ BitVec.zeros(3)
        with pytest.raises(IndexError):
            u[4]

    def test_rejects_bad_bits(self):
        with pytest.raises(ValueError):
            BitVec(3, 0b1000)
        with pytest.raises(ValueError):
            BitVec.from_bits([2])


class TestMatVecMul:
    def test_example_unit_vectors(self, example_h_rows):
        h = example_h(example_h_rows)
        assert gf2.mat_vec_mul(h, BitVec.unit(7, 0)).to_string() == "100"
        assert gf2.mat_vec_mul(h, BitVec.zeros(7)).is_zero
        # Column 6 read by hand is (1,1,1); confirm against an independent
        # per-entry dot-product loop.
        product = gf2.mat_vec_mul(h, BitVec.unit(7, 6))
        assert product.to_string() == "111"
        for i in range(3):
            dot = sum(h[i, j] * BitVec.unit(7, 6)[j] for j in range(7)) % 2
            assert product[i] == dot

    def test_dimension_mismatch(self, example_h_rows):
        with pytest.raises(DimensionMismatchError):
            gf2.mat_vec_mul(example_h(example_h_rows), BitVec.zeros(6))

    def test_linearity(self, rng):
        h = random_matrix(rng, 6, 11)
        for _ in range(25):
            u, v = random_vec(rng, 11), random_vec(rng, 11)
            lhs = gf2.mat_vec_mul(h, u ^ v)
            rhs = gf2.mat_vec_mul(h, u) ^ gf2.mat_vec_mul(h, v)
            assert lhs == rhs


class TestRank:
    def test_examples(self, example_h_rows):
        assert gf2.rank(example_h(example_h_rows)) == 3
        assert gf2.rank(BitMatrix.zeros(4, 6)) == 0
        assert gf2.rank(BitMatrix.identity(5)) == 5

    def test_rank_nullity(self, rng):
        for _ in range(20):
            rows, cols = rng.randint(1, 8), rng.randint(1, 10)
            h = random_matrix(rng, rows, cols)
            assert gf2.rank(h) + len(gf2.nullspace_basis(h)) == cols


class TestSolve:
    def test_example_consistent(self, example_h_rows):
        h = example_h(example_h_rows)
        x = gf2.solve(h, BitVec.from_string("100"))
        assert x is not None
        assert gf2.mat_vec_mul(h, x).to_string() == "100"

    def test_zero_rhs(self, example_h_rows):
        h = example_h(example_h_rows)
        x = gf2.solve(h, BitVec.zeros(3))
        assert x is not None and gf2.mat_vec_mul(h, x).is_zero

    def test_single_row(self):
        h = BitMatrix.from_rows([[1, 1]])
        x = gf2.solve(h, BitVec.from_string("1"))
        assert x.to_string() in ("10", "01")

    def test_inconsistent(self):
        h = BitMatrix.from_rows([[1, 0], [1, 0]])
        assert gf2.solve(h, BitVec.from_string("10")) is None

    def test_deterministic_and_valid(self, rng):
        for _ in range(30):
            rows, cols = rng.randint(1, 7), rng.randint(1, 9)
            h = random_matrix(rng, rows, cols)
            rhs = gf2.mat_vec_mul(h, random_vec(rng, cols))  # always consistent
            x = gf2.solve(h, rhs)
            assert x is not None
            assert gf2.mat_vec_mul(h, x) == rhs
            assert gf2.solve(h, rhs) == x

    def test_dimension_mismatch(self, example_h_rows):
        with pytest.raises(DimensionMismatchError):
            gf2.solve(example_h(example_h_rows), BitVec.zeros(4))


class TestNullspace:
    def test_examples(self, example_h_rows):
        h = example_h(example_h_rows)
        basis = gf2.nullspace_basis(h)
        assert len(basis) == 7 - 3
        for vec in basis:
            assert gf2.mat_vec_mul(h, vec).is_zero
        assert gf2.nullspace_basis(BitMatrix.identity(4)) == []
        assert len(gf2.nullspace_basis(BitMatrix.zeros(1, 5))) == 5

    def test_combinations_stay_in_kernel(self, rng, example_h_rows):
        h = example_h(example_h_rows)
        basis = gf2.nullspace_basis(h)
        for _ in range(20):
            combo = BitVec.zeros(7)
            for vec in basis:
                if rng.random() < 0.5:
                    combo = combo ^ vec
            assert gf2.mat_vec_mul(h, combo).is_zero

    def test_basis_is_independent(self, rng):
        for _ in range(10):
            h = random_matrix(rng, rng.randint(1, 6), rng.randint(2, 9))
            basis = gf2.nullspace_basis(h)
            stacked = BitMatrix.from_bitvecs(basis, cols=h.cols) if basis else None
            if stacked is not None:
                assert gf2.rank(stacked) == len(basis)


class TestInRowspace:
    def test_examples(self, example_h_rows):
        h = example_h(example_h_rows)
        assert gf2.in_rowspace(h, h.row(0))
        assert gf2.in_rowspace(h, BitVec.zeros(7))
        # In the kernel of H yet not in the rowspace: a logical operator.
        vec = BitVec.from_string("1101000")
        assert gf2.mat_vec_mul(h, vec).is_zero
        assert not gf2.in_rowspace(h, vec)

    def test_matches_rank_oracle(self, rng):
        for _ in range(40):
            h = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 9))
            vec = random_vec(rng, h.cols)
            expected = gf2.rank(h.with_extra_row(vec)) == gf2.rank(h)
            assert gf2.in_rowspace(h, vec) == expected

    def test_membership_is_constructive(self, rng):
        # in_rowspace(H, r) implies a coefficient vector c with c^T H = r.
        for _ in range(20):
            h = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 8))
            coeffs = random_vec(rng, h.rows)
            vec = BitVec.zeros(h.cols)
            for i in range(h.rows):
                if coeffs[i]:
                    vec = vec ^ h.row(i)
            assert gf2.in_rowspace(h, vec)
            transpose = BitMatrix(
                h.cols,
                h.rows,
                tuple(
                    sum(((h.row_bits[i] >> j) & 1) << i for i in range(h.rows))
                    for j in range(h.cols)
                ),
            )
            found = gf2.solve(transpose, vec)
            assert found is not None

    def test_dimension_mismatch(self, example_h_rows):
        with pytest.raises(DimensionMismatchError):
            gf2.in_rowspace(example_h(example_h_rows), BitVec.zeros(6))


class TestTextFormat:
    def test_round_trip(self, example_h_rows):
        h = example_h(example_h_rows)
        assert BitMatrix.from_text(h.to_text()) == h
        assert h.to_text().splitlines() == example_h_rows


def test_operations_do_not_mutate_inputs(example_h_rows):
    h = example_h(example_h_rows)
    before = h.row_bits
    gf2.rank(h)
    gf2.solve(h, BitVec.from_string("101"))
    gf2.nullspace_basis(h)
    gf2.in_rowspace(h, BitVec.zeros(7))
    assert h.row_bits == before
