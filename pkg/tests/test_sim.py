import random

import pytest

from mdsrepair.code import code_from_intrinsic
from mdsrepair.constructions import build_exceptional, build_two_parity_code
from mdsrepair.geometry import desarguesian_spread
from mdsrepair.gf import field_of_order
from mdsrepair.repair import optimal_alpha, random_mds_code
from mdsrepair.sim import erase_and_repair, sample_codeword


def test_sample_codeword_is_deterministic_and_valid():
    code, _, _ = build_two_parity_code(3, 2, 8)
    a = sample_codeword(code, 5)
    b = sample_codeword(code, 5)
    c = sample_codeword(code, 6)
    assert a == b
    assert a != c
    h = code.parity_matrix()
    assert not any(h.mul_vec(a.flat()))
    assert len(a.blocks) == code.n
    assert all(len(blk) == code.ell for blk in a.blocks)


def test_sampled_words_spread_over_the_code():
    code, _, _ = build_two_parity_code(3, 2, 8)
    words = {sample_codeword(code, seed).flat() for seed in range(25)}
    assert len(words) >= 20


def test_repair_recovers_every_node_of_the_planted_schemes():
    code, wits, _ = build_two_parity_code(3, 2, 8)
    for seed in range(5):
        cw = sample_codeword(code, seed)
        for node, wit in enumerate(wits):
            trace = erase_and_repair(code, cw, node, wit)
            assert trace.match
            assert trace.recovered == cw.blocks[node]
            assert trace.total_downloaded == wit.bw == 10
            assert trace.total_accessed == wit.io == 10


def test_repair_counters_match_witness_profile():
    code, wits = build_exceptional("q4n9")
    cw = sample_codeword(code, 3)
    for node, wit in enumerate(wits):
        trace = erase_and_repair(code, cw, node, wit)
        assert trace.match
        assert dict(trace.downloaded) == {
            j: code.ell - d for j, d in wit.helper_dims
        }
        assert dict(trace.accessed) == {
            j: code.ell - z for j, z in wit.helper_points
        }


def test_masked_access_is_sufficient():
    # transmissions are computed from masked blocks, so a successful match
    # certifies that the unread coordinates never mattered
    code, wits, _ = build_two_parity_code(3, 2, 9)
    cw = sample_codeword(code, 11)
    for node in (0, 4, 8):
        trace = erase_and_repair(code, cw, node, wits[node])
        assert trace.match
        for j, y in trace.transmitted:
            assert len(y) == code.ell


def test_repair_with_optimal_witness_on_random_codes():
    rng = random.Random(50)
    field = field_of_order(2)
    for _ in range(4):
        code = random_mds_code(field, 2, 2, 5, rng)
        for node in range(code.n):
            _, wit = optimal_alpha(code, node)
            cw = sample_codeword(code, rng.randrange(1 << 30))
            trace = erase_and_repair(code, cw, node, wit)
            assert trace.match
            assert trace.total_downloaded == wit.bw


def test_repair_rejects_mismatched_witness():
    code, wits, _ = build_two_parity_code(3, 2, 8)
    cw = sample_codeword(code, 0)
    with pytest.raises(ValueError):
        erase_and_repair(code, cw, 1, wits[0])


def test_full_download_repair_baseline():
    # the witness from any feasible W repairs; a plain spread code without
    # planted structure still recovers through its optimal witness
    code = code_from_intrinsic(desarguesian_spread(2, 2).members)
    cw = sample_codeword(code, 9)
    for node in range(code.n):
        _, wit = optimal_alpha(code, node)
        trace = erase_and_repair(code, cw, node, wit)
        assert trace.match
        assert trace.total_downloaded <= code.ell * (code.n - 1)
