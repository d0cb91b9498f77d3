"""
css_codes：GF(2) 运算、嵌套码、伴随式译码、隐私放大
"""
import itertools

import numpy as np
import pytest

from css_codes import (
    gf2,
    ParityCheckMatrix,
    NestedCodePair,
    CodeError,
    verify_nested,
    syndrome,
    syndrome_decode,
    privacy_amplify,
    amplify_rows,
    block_split,
    repetition_code,
    hamming_7_4,
    bch_15_7,
    nested_pair,
    minimum_distance,
    correction_radius,
    list_codes,
    parse_bit_matrix,
    load_bit_matrix,
    load_nested_pair,
)
from css_codes.decoding import CosetTable, coset_table


def all_vectors(n):
    return [np.array(bits, dtype=np.uint8) for bits in itertools.product((0, 1), repeat=n)]


def test_gf2_rank_and_nullspace(rng):
    a = (rng.uniform(size=(4, 9)) < 0.5).astype(np.uint8)
    basis = gf2.nullspace(a)
    assert basis.shape == (9 - gf2.rank(a), 9)
    assert not np.any(gf2.matmul(a, basis.T))
    assert gf2.rank(basis) == basis.shape[0]


def test_gf2_rowspace_helpers():
    a = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    assert gf2.in_rowspace([1, 0, 1], a)
    assert not gf2.in_rowspace([1, 0, 0], a)
    complement = gf2.rowspace_complement(a, np.eye(3, dtype=np.uint8))
    assert complement.shape == (1, 3)
    assert gf2.rank(np.vstack([a, complement])) == 3


def test_parity_check_matrix_properties():
    H = hamming_7_4()
    assert (H.rows, H.cols, H.rank, H.dimension) == (3, 7, 3, 4)
    assert H.full_row_rank
    assert not np.any(gf2.matmul(H.bits, H.generator().T))
    assert ParityCheckMatrix.from_generator(H.generator()).dimension == 4
    assert H == hamming_7_4()
    assert hash(H) == hash(hamming_7_4())


def test_parity_check_matrix_rejects_bad_shapes():
    with pytest.raises(CodeError):
        ParityCheckMatrix(np.array([1, 0, 1], dtype=np.uint8))
    with pytest.raises(CodeError):
        ParityCheckMatrix(np.ones((3, 2), dtype=np.uint8))
    with pytest.raises(CodeError):
        NestedCodePair(H1=hamming_7_4(), H2=repetition_code(5))


@pytest.mark.parametrize("name, n, secret, distance", [
    ("hamming7", 7, 1, 3),
    ("bch15", 15, 1, 5),
    ("repetition5", 5, 1, 5),
])
def test_shipped_pairs(name, n, secret, distance):
    pair = nested_pair(name)
    assert pair.length == n
    assert pair.secret_bits == secret
    assert verify_nested(pair)
    assert pair.secret_rows().shape == (secret, n)
    assert minimum_distance(pair.H1) == distance
    assert correction_radius(pair.H1) == (distance - 1) // 2
    assert pair.describe()["secret_bits"] == secret


def test_nested_pair_aliases_and_unknown():
    assert nested_pair("Hamming_7_4").H1 == hamming_7_4()
    assert nested_pair("bch_15_7").H1 == bch_15_7()
    with pytest.raises(CodeError):
        nested_pair("golay23")
    assert [c["name"] for c in list_codes()] == ["hamming7", "bch15", "repetition3"]


def test_hamming_corrects_every_single_error():
    H = hamming_7_4()
    for k in all_vectors(7):
        xi = syndrome(H, k)
        assert np.array_equal(syndrome_decode(k, xi, H), k)
        for position in range(7):
            v = k.copy()
            v[position] ^= 1
            assert np.array_equal(syndrome_decode(v, xi, H), k)


def test_bch_corrects_double_errors(rng):
    H = bch_15_7()
    for _ in range(50):
        k = rng.integers(0, 2, 15).astype(np.uint8)
        v = k.copy()
        v[rng.choice(15, size=2, replace=False)] ^= 1
        assert np.array_equal(syndrome_decode(v, syndrome(H, k), H), k)


def test_coset_table():
    table = coset_table(hamming_7_4())
    assert len(table.leaders) == 8
    assert table.max_leader_weight() == 1
    assert coset_table(hamming_7_4()) is table
    with pytest.raises(CodeError):
        CosetTable(repetition_code(25))


def test_verify_nested_matches_exhaustive_membership(rng):
    n = 8
    for trial in range(20):
        H1 = ParityCheckMatrix((rng.uniform(size=(3, n)) < 0.5).astype(np.uint8))
        if trial % 2 == 0:
            extra = (rng.uniform(size=(2, n)) < 0.5).astype(np.uint8)
            H2 = ParityCheckMatrix(np.vstack([H1.bits, extra]))
        else:
            H2 = ParityCheckMatrix((rng.uniform(size=(5, n)) < 0.5).astype(np.uint8))
        pair = NestedCodePair(H1=H1, H2=H2)

        c2 = [v for v in all_vectors(n) if not np.any(syndrome(H2, v))]
        exhaustive = all(not np.any(syndrome(H1, v)) for v in c2)
        assert verify_nested(pair) == exhaustive
        if trial % 2 == 0:
            assert exhaustive


def test_amplified_bit_is_independent_of_public_syndrome():
    pair = nested_pair("hamming7")
    rows = pair.secret_rows()
    counts = {}
    for k in all_vectors(7):
        key = syndrome(pair.H1, k).tobytes()
        bit = int(amplify_rows(rows, k)[0])
        counts.setdefault(key, [0, 0])[bit] += 1
    assert len(counts) == 8
    assert all(c == [8, 8] for c in counts.values())


def test_privacy_amplify_and_amplify_rows():
    pair = nested_pair("hamming7")
    k = np.array([1, 0, 1, 1, 0, 0, 1], dtype=np.uint8)
    assert privacy_amplify(pair.H2, k).shape == (pair.H2.rows,)
    assert amplify_rows(np.zeros((0, 7), dtype=np.uint8), k).size == 0
    with pytest.raises(CodeError):
        amplify_rows(pair.secret_rows(), k[:5])


def test_syndrome_length_checks():
    H = hamming_7_4()
    with pytest.raises(CodeError):
        syndrome(H, [1, 0, 1])
    with pytest.raises(CodeError):
        syndrome_decode(np.zeros(7, dtype=np.uint8), [0, 1], H)


def test_block_split():
    blocks, tail = block_split(np.arange(17) % 2, 7)
    assert blocks.shape == (2, 7)
    assert tail.tolist() == [0, 1, 0]


def test_parse_bit_matrix():
    H = parse_bit_matrix("# comment\n1 0 1\n\n0,1,1  # trailing\n")
    assert H.bits.tolist() == [[1, 0, 1], [0, 1, 1]]
    with pytest.raises(CodeError):
        parse_bit_matrix("1 2 0\n")
    with pytest.raises(CodeError):
        parse_bit_matrix("# nothing\n")
    with pytest.raises(CodeError):
        parse_bit_matrix("101\n11\n")


def test_load_shipped_code_files(config_dir):
    pair = load_nested_pair(config_dir / "hamming_7_4.txt", config_dir / "simplex_7_3.txt", name="file")
    assert pair.H1 == hamming_7_4()
    assert pair.secret_bits == 1
    assert pair.H2.dimension == nested_pair("hamming7").H2.dimension


def test_load_errors(tmp_path, config_dir):
    with pytest.raises(CodeError):
        load_bit_matrix(tmp_path / "missing.txt")
    # C2 = ker(H1) 的超集不满足嵌套
    wide = tmp_path / "wide.txt"
    wide.write_text("1111111\n")
    with pytest.raises(CodeError):
        load_nested_pair(config_dir / "hamming_7_4.txt", wide)
