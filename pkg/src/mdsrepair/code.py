"""MDS array codes presented by block parity check matrices.

A code with n nodes, r = n - k parities and sub packetization ell is held
as n blocks H_i in F_q^(r*ell x ell), all of full column rank.  Each block
is equivalently a node subspace (its column space) plus a list of ell
projective column points; a block's columns are always representatives of
its column points, in matching order.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

from .gf import FieldCtx, make_field
from .linalg import (
    MatrixGF,
    ProjPoint,
    Subspace,
    kernel,
    proj_point,
    rank,
)

DEFAULT_MDS_CAP = 10**6


@dataclass(frozen=True)
class ArrayCode:
    field: FieldCtx
    n: int
    k: int
    ell: int
    blocks: tuple[MatrixGF, ...]
    node_subspaces: tuple[Subspace, ...]
    column_points: tuple[tuple[ProjPoint, ...], ...]

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def ambient_dim(self) -> int:
        return self.r * self.ell

    def parity_matrix(self) -> MatrixGF:
        out = self.blocks[0]
        for b in self.blocks[1:]:
            out = out.hstack(b)
        return out

    def __repr__(self) -> str:
        return f"ArrayCode(n={self.n}, k={self.k}, ell={self.ell}, {self.field!r})"


@dataclass(frozen=True)
class CodewordArr:
    """One codeword, stored as n blocks of ell symbols."""

    blocks: tuple[tuple[int, ...], ...]

    def flat(self) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.blocks))


def _span_check(field: FieldCtx, subspaces: Sequence[Subspace], ambient: int) -> None:
    rows: list[tuple[int, ...]] = []
    for s in subspaces:
        rows.extend(s.basis_rows())
    if Subspace.from_rows(field, ambient, rows).dim != ambient:
        raise ValueError("node subspaces do not span the parity space")


def _points_to_block(field: FieldCtx, ambient: int, points: Sequence[ProjPoint]) -> MatrixGF:
    cols = [p.representative for p in points]
    entries = tuple(cols[j][i] for i in range(ambient) for j in range(len(cols)))
    return MatrixGF(field, ambient, len(cols), entries)


def code_from_intrinsic(
    subspaces: Sequence[Subspace],
    *,
    column_points: Sequence[Sequence[ProjPoint]] | None = None,
) -> ArrayCode:
    """Build a code from node subspaces and optional column point choices.

    Without explicit points, each block's columns are the reduced basis
    vectors of its subspace, ordered lexicographically.  Explicit points
    must be ell distinct independent points inside the node subspace.
    """
    if not subspaces:
        raise ValueError("need at least one node subspace")
    field = subspaces[0].field
    ambient = subspaces[0].ambient_dim
    ell = subspaces[0].dim
    if ell < 1:
        raise ValueError("node subspaces must have positive dimension")
    if ambient % ell:
        raise ValueError("ambient dimension must be a multiple of ell")
    r = ambient // ell
    if r < 1:
        raise ValueError("r must be at least 1")
    n = len(subspaces)
    if n < r:
        raise ValueError("need at least r nodes")
    for s in subspaces:
        if s.field != field or s.ambient_dim != ambient or s.dim != ell:
            raise ValueError("node subspaces must share field, ambient and dimension")
    _span_check(field, subspaces, ambient)

    points: list[tuple[ProjPoint, ...]] = []
    if column_points is None:
        for s in subspaces:
            pts = sorted(proj_point(field, row) for row in s.basis_rows())
            points.append(tuple(pts))
    else:
        if len(column_points) != n:
            raise ValueError("need one point list per node")
        for s, plist in zip(subspaces, column_points):
            if len(plist) != ell or len(set(plist)) != ell:
                raise ValueError("need ell distinct column points per node")
            for p in plist:
                if not s.contains_vector(p.representative):
                    raise ValueError("column point outside its node subspace")
            block = _points_to_block(field, ambient, plist)
            if rank(block) != ell:
                raise ValueError("column points must be independent")
            points.append(tuple(plist))

    blocks = tuple(_points_to_block(field, ambient, plist) for plist in points)
    return ArrayCode(field, n, n - r, ell, blocks, tuple(subspaces), tuple(points))


def code_from_blocks(field: FieldCtx, blocks: Sequence[MatrixGF]) -> ArrayCode:
    """Build a code from explicit parity blocks.

    Column points are read off the blocks, so every column must be nonzero
    and the block must have full column rank.
    """
    if not blocks:
        raise ValueError("need at least one block")
    ambient = blocks[0].rows
    ell = blocks[0].cols
    subspaces = []
    points = []
    for b in blocks:
        if b.field != field or b.rows != ambient or b.cols != ell:
            raise ValueError("blocks must share field and shape")
        if rank(b) != ell:
            raise ValueError("blocks must have full column rank")
        subspaces.append(Subspace.from_matrix_columns(b))
        points.append(tuple(proj_point(field, b.col(j)) for j in range(ell)))
    if ambient % ell:
        raise ValueError("ambient dimension must be a multiple of ell")
    r = ambient // ell
    if r < 1 or len(blocks) < r:
        raise ValueError("need r >= 1 and at least r nodes")
    _span_check(field, subspaces, ambient)
    for plist in points:
        if len(set(plist)) != ell:
            raise ValueError("column points within a block must be distinct")
    return ArrayCode(
        field, len(blocks), len(blocks) - r, ell, tuple(blocks), tuple(subspaces), tuple(points)
    )


@dataclass(frozen=True)
class MdsCheck:
    status: str  # "mds", "not_mds" or "cap_exceeded"
    subsets_checked: int
    failing_subset: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool | None:
        if self.status == "cap_exceeded":
            return None
        return self.status == "mds"

    def __bool__(self) -> bool:
        return self.status == "mds"


def is_mds(code: ArrayCode, *, subset_cap: int = DEFAULT_MDS_CAP) -> MdsCheck:
    """Check that every r-subset of blocks forms an invertible square matrix.

    Runs both the matrix rank form and the subspace direct sum form on each
    subset and insists they agree.
    """
    r = code.r
    total = 1
    for i in range(r):
        total = total * (code.n - i) // (i + 1)
    if total > subset_cap:
        return MdsCheck("cap_exceeded", 0)
    ambient = code.ambient_dim
    checked = 0
    for subset in itertools.combinations(range(code.n), r):
        checked += 1
        square = code.blocks[subset[0]]
        for i in subset[1:]:
            square = square.hstack(code.blocks[i])
        invertible = rank(square) == ambient
        rows: list[tuple[int, ...]] = []
        for i in subset:
            rows.extend(code.node_subspaces[i].basis_rows())
        direct = Subspace.from_rows(code.field, ambient, rows).dim == ambient
        if invertible != direct:
            raise AssertionError("matrix and subspace MDS forms disagree")
        if not invertible:
            return MdsCheck("not_mds", checked, subset)
    return MdsCheck("mds", checked)


def length_bound(q: int, ell: int, r: int) -> int:
    """Largest n for which an (n, n-r, ell) MDS array code over GF(q) exists."""
    if r < 2:
        raise ValueError("the length bound needs r >= 2")
    if q < 2 or ell < 1:
        raise ValueError("need q >= 2 and ell >= 1")
    return q**ell + r - 1


def codeword_space(code: ArrayCode) -> Subspace:
    """All codewords as vectors of length n*ell: the kernel of the parity matrix."""
    space = kernel(code.parity_matrix())
    assert space.dim == code.k * code.ell
    return space


def serialize(code: ArrayCode) -> str:
    payload = {
        "field": {
            "p": code.field.p,
            "m": code.field.m,
            "modulus": list(code.field.modulus),
        },
        "n": code.n,
        "k": code.k,
        "ell": code.ell,
        "blocks": [b.to_rows() for b in code.blocks],
        "column_points": [
            [list(p.representative) for p in plist] for plist in code.column_points
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def deserialize(text: str) -> ArrayCode:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    try:
        fld = payload["field"]
        field = make_field(int(fld["p"]), int(fld["m"]), tuple(fld["modulus"]))
        n = int(payload["n"])
        k = int(payload["k"])
        ell = int(payload["ell"])
        block_rows = payload["blocks"]
        point_rows = payload["column_points"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"missing or malformed field: {exc}") from exc
    if len(block_rows) != n or len(point_rows) != n:
        raise ValueError("blocks and column_points must list one entry per node")
    blocks = [MatrixGF.from_rows(field, rows) for rows in block_rows]
    code = code_from_blocks(field, blocks)
    if code.k != k or code.ell != ell:
        raise ValueError("declared k or ell does not match the blocks")
    for derived, stated in zip(code.column_points, point_rows):
        stated_pts = [proj_point(field, vec) for vec in stated]
        if list(derived) != stated_pts:
            raise ValueError("column_points do not match the block columns")
    return code
