import itertools
import math
import random

import pytest

from mdsrepair.code import (
    code_from_blocks,
    code_from_intrinsic,
    codeword_space,
    deserialize,
    is_mds,
    length_bound,
    serialize,
)
from mdsrepair.geometry import desarguesian_spread
from mdsrepair.gf import field_of_order
from mdsrepair.linalg import Subspace, proj_point, rank
from mdsrepair.repair import SamplingExhaustedError, random_mds_code


def _spread_code(q, n):
    s = desarguesian_spread(q, 2)
    return code_from_intrinsic(s.members[:n])


def test_code_from_intrinsic_defaults():
    code = _spread_code(3, 5)
    assert (code.n, code.k, code.r, code.ell) == (5, 3, 2, 2)
    assert code.ambient_dim == 4
    for s, block, pts in zip(code.node_subspaces, code.blocks, code.column_points):
        assert block.rows == 4 and block.cols == 2
        assert len(pts) == 2
        cols = Subspace.from_rows(code.field, 4, [block.col(j) for j in range(2)])
        assert cols == s


def test_parity_matrix_shape():
    code = _spread_code(3, 6)
    h = code.parity_matrix()
    assert (h.rows, h.cols) == (4, 12)
    assert rank(h) == 4


def test_explicit_column_points():
    field = field_of_order(3)
    s = desarguesian_spread(3, 2)
    members = s.members[:4]
    pts = []
    for mem in members:
        rows = mem.basis_rows()
        # a basis of each subspace that is not the reduced one
        mixed = [rows[0], tuple(field.add(a, b) for a, b in zip(rows[0], rows[1]))]
        pts.append([proj_point(field, v) for v in mixed])
    code = code_from_intrinsic(members, column_points=pts)
    assert code.column_points == tuple(tuple(p) for p in pts)
    assert tuple(code.node_subspaces) == members


def test_intrinsic_rejections():
    field = field_of_order(3)
    s = desarguesian_spread(3, 2)
    members = s.members[:4]
    good = [[proj_point(field, v) for v in mem.basis_rows()] for mem in members]
    outside = proj_point(field, (1, 0, 0, 0))
    assert not members[1].contains_vector(outside.representative)
    with pytest.raises(ValueError):
        code_from_intrinsic(members, column_points=[good[0], [outside, good[1][1]]] + good[2:])
    with pytest.raises(ValueError):
        code_from_intrinsic(members, column_points=[[good[0][0], good[0][0]]] + good[1:])
    with pytest.raises(ValueError):
        code_from_intrinsic(members, column_points=good[:3])
    with pytest.raises(ValueError):
        code_from_intrinsic([])
    with pytest.raises(ValueError):
        code_from_intrinsic(members[:1])  # a single node cannot span the parity space


def test_code_from_blocks_round_trip():
    original = _spread_code(3, 5)
    rebuilt = code_from_blocks(original.field, original.blocks)
    assert rebuilt.node_subspaces == original.node_subspaces
    assert rebuilt.column_points == original.column_points
    assert rebuilt.blocks == original.blocks


def test_is_mds_spread_code():
    code = _spread_code(3, 7)
    chk = is_mds(code)
    assert chk.ok
    assert chk.subsets_checked == math.comb(7, 2)
    assert chk.failing_subset is None


def test_is_mds_detects_overlap():
    field = field_of_order(2)
    # the first two subspaces share the point (1, 0, 0, 0); two complementary
    # spread members keep the family spanning
    a = Subspace.from_rows(field, 4, [(1, 0, 0, 0), (0, 1, 0, 0)])
    b = Subspace.from_rows(field, 4, [(1, 0, 0, 0), (0, 0, 1, 0)])
    spread = desarguesian_spread(2, 2)
    tail = tuple(m for m in spread.members if m not in (a, b))[:2]
    code = code_from_intrinsic((a, b) + tail)
    chk = is_mds(code)
    assert not chk.ok
    assert chk.failing_subset == (0, 1)
    i, j = chk.failing_subset
    assert rank(code.blocks[i].hstack(code.blocks[j])) < 4


def test_length_bound_values():
    assert length_bound(3, 2, 2) == 10
    assert length_bound(4, 2, 2) == 17
    assert length_bound(2, 2, 3) == 6
    assert length_bound(2, 2, 2) == 5
    assert length_bound(2, 3, 2) == 9
    with pytest.raises(ValueError):
        length_bound(3, 2, 1)


def test_codeword_space_dimension_and_parity():
    code = _spread_code(3, 6)
    space = codeword_space(code)
    assert space.dim == code.k * code.ell
    h = code.parity_matrix()
    for row in space.basis_rows():
        assert all(v == 0 for v in h.mul_vec(row))


def test_serialize_round_trip():
    code = _spread_code(4, 9)
    text = serialize(code)
    back = deserialize(text)
    assert back.field == code.field
    assert (back.n, back.k, back.ell) == (code.n, code.k, code.ell)
    assert back.blocks == code.blocks
    assert back.column_points == code.column_points


def test_deserialize_rejects_garbage():
    with pytest.raises(ValueError):
        deserialize("not json at all")
    with pytest.raises(ValueError):
        deserialize("{}")
    code = _spread_code(3, 5)
    import json

    payload = json.loads(serialize(code))
    payload["blocks"][0][0][0] = (payload["blocks"][0][0][0] + 1) % 3
    with pytest.raises(ValueError):
        deserialize(json.dumps(payload))  # block no longer matches its column points


def test_random_mds_code_is_mds_and_deterministic():
    field = field_of_order(3)
    a = random_mds_code(field, 2, 2, 5, random.Random(7))
    b = random_mds_code(field, 2, 2, 5, random.Random(7))
    c = random_mds_code(field, 2, 2, 5, random.Random(8))
    assert a.blocks == b.blocks
    assert a.blocks != c.blocks
    assert is_mds(a).ok
    for x, y in itertools.combinations(a.node_subspaces, 2):
        assert x != y


def test_random_mds_code_across_parameters():
    rng = random.Random(9)
    for q, ell, r in ((2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2)):
        field = field_of_order(q)
        n = min(length_bound(q, ell, r), r + 3)
        code = random_mds_code(field, r, ell, n, rng)
        assert (code.n, code.r, code.ell) == (n, r, ell)
        assert is_mds(code).ok


def test_random_mds_code_exhaustion():
    field = field_of_order(2)
    with pytest.raises(SamplingExhaustedError):
        # n beyond the length bound can never be reached
        random_mds_code(field, 2, 2, 6, random.Random(0), retry_cap=3)
