import pytest

from lightsqec import gf2
from lightsqec.code import build_triangular_code, code_distance_bruteforce
from lightsqec.decoder import (
    Decoder,
    decode,
    decode_check_matrix,
    decode_oracle,
    estimate_distance,
)
from lightsqec.gf2 import BitVec
from lightsqec.maxsat import SolveStatus


class TestDecode:
    def test_single_lit_face(self, code3):
        result = decode(code3, BitVec.from_string("100"))
        assert result.status is SolveStatus.OPTIMAL
        assert result.weight == 1
        assert result.estimate == BitVec.unit(7, 0)

    def test_zero_syndrome(self, code3):
        result = decode(code3, BitVec.zeros(3))
        assert result.weight == 0
        assert result.estimate.is_zero

    def test_two_lit_faces(self, code3):
        result = decode(code3, BitVec.from_string("110"))
        assert result.weight == 1
        assert result.estimate == BitVec.unit(7, 3)

    def test_estimate_always_reproduces_syndrome(self, code5, rng):
        dec = Decoder(code5)
        for _ in range(50):
            syndrome = BitVec(9, rng.getrandbits(9))
            result = dec.decode(syndrome)
            assert gf2.mat_vec_mul(code5.H, result.estimate) == syndrome
            assert result.weight == result.estimate.weight

    def test_weight_never_exceeds_error_weight(self, code5, rng):
        dec = Decoder(code5)
        for _ in range(50):
            error = BitVec(19, rng.getrandbits(19) & rng.getrandbits(19))
            result = dec.decode(gf2.mat_vec_mul(code5.H, error))
            assert result.weight <= error.weight

    def test_dimension_check(self, code3):
        with pytest.raises(gf2.DimensionMismatchError):
            decode(code3, BitVec.zeros(4))

    def test_non_converged_returns_all_zeros(self):
        code = build_triangular_code(9)
        syndrome = BitVec(code.n_faces, (1 << code.n_faces) - 1)
        result = decode(code, syndrome, timeout=0.0)
        assert result.status is SolveStatus.NON_CONVERGED
        assert result.estimate.is_zero
        assert result.weight == 0

    def test_check_matrix_entry_point(self, code3):
        result = decode_check_matrix(code3.H, BitVec.from_string("111"))
        assert result.weight == 1
        assert result.estimate == BitVec.unit(7, 6)


class TestDecodeOracle:
    def test_examples(self, code3):
        assert decode_oracle(code3, BitVec.from_string("100")) == BitVec.unit(7, 0)
        assert decode_oracle(code3, BitVec.zeros(3)).is_zero

    def test_tie_break_is_lexicographic(self, code3):
        # Weight ties resolve toward the lexicographically smallest string,
        # so re-running is reproducible.
        for bits in range(8):
            syndrome = BitVec(3, bits)
            first = decode_oracle(code3, syndrome)
            assert decode_oracle(code3, syndrome) == first

    def test_guard(self):
        code = build_triangular_code(9)
        with pytest.raises(ValueError, match="guard"):
            decode_oracle(code, BitVec.zeros(code.n_faces))


class TestOracleEquivalence:
    @pytest.mark.parametrize("d,trials", [(3, 60), (5, 60)])
    def test_weights_match_and_residuals_are_stabilizers(self, d, trials, rng):
        code = build_triangular_code(d)
        dec = Decoder(code)
        for _ in range(trials):
            syndrome = BitVec(code.n_faces, rng.getrandbits(code.n_faces))
            result = dec.decode(syndrome)
            oracle = decode_oracle(code, syndrome)
            assert result.weight == oracle.weight
            if result.estimate != oracle:
                residual = result.estimate ^ oracle
                assert gf2.mat_vec_mul(code.H, residual).is_zero


class TestEstimateDistance:
    @pytest.mark.parametrize("d", [3, 5])
    def test_matches_enumeration(self, d):
        code = build_triangular_code(d)
        assert estimate_distance(code) == d == code_distance_bruteforce(code)

    def test_result_is_weight_of_a_logical(self, code5):
        assert estimate_distance(code5) == 5
