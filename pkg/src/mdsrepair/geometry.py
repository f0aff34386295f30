"""Spreads and reguli in small projective spaces.

A spread of PG(2*ell-1, q) is modeled as a family of ell dimensional
subspaces of F_q^(2*ell) that partition the nonzero vectors.  Members
carry labels from GF(q^ell) together with INF for the member at infinity
when the spread comes from a field construction.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Union

from .gf import ExtensionCtx, FieldCtx, field_of_order, make_extension
from .linalg import (
    Subspace,
    gaussian_binomial,
    intersect_dim,
    projective_points,
    subspace_intersection,
    subspace_sum,
)

INF = math.inf
Label = Union[int, float]


@dataclass(frozen=True)
class Spread:
    """An indexed family of pairwise complementary ell dimensional subspaces."""

    field: FieldCtx
    ell: int
    members: tuple[Subspace, ...]
    labels: tuple[Label, ...] | None = None

    def member(self, label: Label) -> Subspace:
        if self.labels is None:
            raise ValueError("this spread carries no labels")
        return self.members[self.labels.index(label)]

    def __len__(self) -> int:
        return len(self.members)


def desarguesian_member(ext: ExtensionCtx, label: Label) -> Subspace:
    """The subspace {(x, c*x)} for label c, or {(0, y)} for INF."""
    top = ext.top
    rows = []
    for j in range(ext.ell):
        e_j = ext.from_coords(tuple(1 if t == j else 0 for t in range(ext.ell)))
        if label is INF:
            rows.append(ext.embed_pair(0, e_j))
        else:
            rows.append(ext.embed_pair(e_j, top.mul(label, e_j)))
    return Subspace.from_rows(ext.base, 2 * ext.ell, rows)


def conjugate_member(ext: ExtensionCtx, label: Label) -> Subspace:
    """The subspace {(s*x, x)} for label s, or {(y, 0)} for INF."""
    top = ext.top
    rows = []
    for j in range(ext.ell):
        e_j = ext.from_coords(tuple(1 if t == j else 0 for t in range(ext.ell)))
        if label is INF:
            rows.append(ext.embed_pair(e_j, 0))
        else:
            rows.append(ext.embed_pair(top.mul(label, e_j), e_j))
    return Subspace.from_rows(ext.base, 2 * ext.ell, rows)


def _field_spread(ext: ExtensionCtx, member_fn) -> Spread:
    labels: tuple[Label, ...] = tuple(ext.top.elements()) + (INF,)
    members = tuple(member_fn(ext, lab) for lab in labels)
    return Spread(ext.base, ext.ell, members, labels)


def desarguesian_spread(q: int, ell: int, *, ext: ExtensionCtx | None = None) -> Spread:
    """The field spread {(x, c*x) : c} plus {(0, y)}, one member per label."""
    if ext is None:
        ext = make_extension(field_of_order(q), ell)
    elif ext.base.q != q or ext.ell != ell:
        raise ValueError("extension context does not match q, ell")
    return _field_spread(ext, desarguesian_member)


def conjugate_spread(ext: ExtensionCtx) -> Spread:
    """The mirror image field spread {(s*x, x) : s} plus {(y, 0)}."""
    return _field_spread(ext, conjugate_member)


@dataclass(frozen=True)
class SpreadCheck:
    ok: bool
    reason: str = ""
    witness: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_spread(field: FieldCtx, ell: int, members: tuple[Subspace, ...]) -> SpreadCheck:
    """Partition test: right count, right dimensions, pairwise trivial meets."""
    expected = field.q**ell + 1
    for idx, mem in enumerate(members):
        if mem.ambient_dim != 2 * ell or mem.field != field:
            return SpreadCheck(False, "wrong ambient space", (idx,))
        if mem.dim != ell:
            return SpreadCheck(False, "wrong member dimension", (idx,))
    if len(set(members)) != len(members):
        seen: dict[Subspace, int] = {}
        for idx, mem in enumerate(members):
            if mem in seen:
                return SpreadCheck(False, "duplicate member", (seen[mem], idx))
            seen[mem] = idx
    if len(members) != expected:
        return SpreadCheck(False, f"expected {expected} members, got {len(members)}")
    for i, j in itertools.combinations(range(len(members)), 2):
        if intersect_dim(members[i], members[j]) != 0:
            return SpreadCheck(False, "members overlap", (i, j))
    return SpreadCheck(True)


@dataclass(frozen=True)
class Regulus:
    """q+1 pairwise skew lines of PG(3, q) swept by their common transversals."""

    lines: tuple[Subspace, ...]
    transversals: tuple[Subspace, ...]

    def __contains__(self, line: Subspace) -> bool:
        return line in self.lines


def _pairwise_skew(lines) -> bool:
    return all(
        intersect_dim(a, b) == 0 for a, b in itertools.combinations(lines, 2)
    )


def _common_transversals(l1: Subspace, l2: Subspace, l3: Subspace) -> tuple[Subspace, ...]:
    """For each point of l1, the unique line through it meeting l2 and l3."""
    field = l1.field
    out = []
    for pt in projective_points(l1):
        pt_space = Subspace.from_rows(field, l1.ambient_dim, [pt.representative])
        plane2 = subspace_sum(pt_space, l2)
        plane3 = subspace_sum(pt_space, l3)
        t = subspace_intersection(plane2, plane3)
        if t.dim != 2:
            raise ValueError("degenerate configuration, lines are not skew")
        out.append(t)
    return tuple(sorted(out))


def regulus_through(l1: Subspace, l2: Subspace, l3: Subspace) -> Regulus:
    """The unique regulus containing three pairwise skew lines of PG(3, q).

    Lines and transversals come back canonically sorted, so the result is
    independent of the order of the three inputs.
    """
    for line in (l1, l2, l3):
        if line.ambient_dim != 4 or line.dim != 2:
            raise ValueError("regulus lines must be 2 dimensional in F_q^4")
    if len({l1, l2, l3}) != 3 or not _pairwise_skew((l1, l2, l3)):
        raise ValueError("the three lines must be distinct and pairwise skew")
    transversals = _common_transversals(l1, l2, l3)
    lines = _common_transversals(transversals[0], transversals[1], transversals[2])
    if not {l1, l2, l3} <= set(lines):
        raise AssertionError("regulus construction lost an input line")
    # Every line meets every transversal in exactly one point.
    for a in lines:
        for b in transversals:
            if intersect_dim(a, b) != 1:
                raise AssertionError("regulus grid property failed")
    return Regulus(lines, transversals)


def opposite_regulus(reg: Regulus) -> Regulus:
    return Regulus(reg.transversals, reg.lines)


def transversal_regulus(m: Subspace, spread: Spread) -> tuple[Subspace, ...]:
    """The members of spread that meet the line m, for m outside the spread.

    For any spread of PG(3, q) this set has exactly q+1 elements; whether
    it forms a regulus is a property of the spread, not of this function.
    """
    if m.dim != 2 or m.ambient_dim != 4:
        raise ValueError("m must be a line of PG(3, q)")
    if m in spread.members:
        raise ValueError("m must not belong to the spread")
    hit = tuple(sorted(L for L in spread.members if intersect_dim(L, m) > 0))
    assert len(hit) == spread.field.q + 1
    return hit


@dataclass(frozen=True)
class RegularityCheck:
    ok: bool
    mode: str
    triples_checked: int
    witness: tuple[Subspace, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_regular_spread(
    spread: Spread,
    *,
    sample: int | None = None,
    seed: int = 0,
) -> RegularityCheck:
    """Whether every regulus through three members lies inside the spread.

    Checks all member triples when their number is at most sample (or
    always when sample is None); otherwise checks a seeded random sample.
    """
    if spread.ell != 2:
        raise ValueError("regularity is defined here for spreads of PG(3, q) only")
    member_set = frozenset(spread.members)
    triples = list(itertools.combinations(spread.members, 3))
    if sample is not None and len(triples) > sample:
        rng = random.Random(seed)
        triples = rng.sample(triples, sample)
        mode = "sampled"
    else:
        mode = "exhaustive"
    for checked, (a, b, c) in enumerate(triples, start=1):
        reg = regulus_through(a, b, c)
        if not set(reg.lines) <= member_set:
            return RegularityCheck(False, mode, checked, (a, b, c))
    return RegularityCheck(True, mode, len(triples))


def replace_regulus(spread: Spread, reg: Regulus) -> Spread:
    """Swap a regulus of the spread for its opposite.

    The opposite regulus covers the same points, so the result is again a
    spread; for q > 2 it is no longer regular.
    """
    if not set(reg.lines) <= set(spread.members):
        raise ValueError("the regulus does not lie inside the spread")
    members = tuple(L for L in spread.members if L not in set(reg.lines)) + reg.transversals
    return Spread(spread.field, spread.ell, members, None)


def all_lines(field: FieldCtx) -> tuple[Subspace, ...]:
    """Every line of PG(3, q), i.e. every 2 dimensional subspace of F_q^4."""
    from .linalg import all_subspaces

    return all_subspaces(field, 4, 2)


def spread_count_check(field: FieldCtx, ell: int) -> int:
    """Number of members any spread of PG(2*ell-1, q) must have."""
    return gaussian_binomial(2 * ell, 1, field.q) // gaussian_binomial(ell, 1, field.q)
