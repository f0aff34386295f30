"""Matrices, subspaces and subspace enumeration over small finite fields.

Everything here is exact and deterministic.  Matrices and subspaces are
immutable value objects; a subspace is always held in reduced row echelon
form, which makes equality, hashing and enumeration order canonical.
"""
from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from ._kernel import rre_rank, rref_rank
from .gf import FieldCtx

DEFAULT_ENUM_BUDGET = 10**7
_CACHE_LIMIT = 500_000


class BudgetExceededError(RuntimeError):
    """An enumeration or search would exceed its configured budget."""


def _require_tables(field: FieldCtx) -> None:
    if not field.has_tables:
        raise ValueError(f"{field!r} is too large for matrix arithmetic")


class MatrixGF:
    """Immutable matrix with entries encoded as field elements."""

    __slots__ = ("field", "rows", "cols", "entries", "packed")

    def __init__(self, field: FieldCtx, rows: int, cols: int, entries: tuple[int, ...]):
        _require_tables(field)
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self.packed = bytes(entries)

    @classmethod
    def from_rows(cls, field: FieldCtx, rows: Sequence[Sequence[int]]) -> MatrixGF:
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(field.check(x) for x in row)
        return cls(field, r, c, tuple(flat))

    @classmethod
    def identity(cls, field: FieldCtx, n: int) -> MatrixGF:
        return cls(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, field: FieldCtx, rows: int, cols: int) -> MatrixGF:
        return cls(field, rows, cols, (0,) * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> MatrixGF:
        return MatrixGF(
            self.field,
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def mul(self, other: MatrixGF) -> MatrixGF:
        if self.field != other.field or self.cols != other.rows:
            raise ValueError("shape or field mismatch")
        f = self.field
        q = f.q
        add, mul = f.add_tab, f.mul_tab
        out = []
        for i in range(self.rows):
            base = i * self.cols
            for j in range(other.cols):
                acc = 0
                for t in range(self.cols):
                    acc = add[acc * q + mul[self.entries[base + t] * q + other.entries[t * other.cols + j]]]
                out.append(acc)
        return MatrixGF(self.field, self.rows, other.cols, tuple(out))

    def mul_vec(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        f = self.field
        q = f.q
        add, mul = f.add_tab, f.mul_tab
        out = []
        for i in range(self.rows):
            base = i * self.cols
            acc = 0
            for t in range(self.cols):
                acc = add[acc * q + mul[self.entries[base + t] * q + vec[t]]]
            out.append(acc)
        return tuple(out)

    def stack(self, other: MatrixGF) -> MatrixGF:
        if self.field != other.field or self.cols != other.cols:
            raise ValueError("shape or field mismatch")
        return MatrixGF(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    def hstack(self, other: MatrixGF) -> MatrixGF:
        if self.field != other.field or self.rows != other.rows:
            raise ValueError("shape or field mismatch")
        flat = []
        for i in range(self.rows):
            flat.extend(self.row(i))
            flat.extend(other.row(i))
        return MatrixGF(self.field, self.rows, self.cols + other.cols, tuple(flat))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MatrixGF)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"MatrixGF({self.field!r}, {self.rows}x{self.cols})"


def _tables(field: FieldCtx) -> tuple[bytes, bytes, bytes]:
    return field.sub_tab, field.mul_tab, field.inv_tab


def rank(mat: MatrixGF) -> int:
    buf = bytearray(mat.packed)
    sub, mul, inv = _tables(mat.field)
    return rre_rank(buf, mat.rows, mat.cols, mat.field.q, sub, mul, inv)


def rref(mat: MatrixGF) -> tuple[MatrixGF, int]:
    """Reduced row echelon form of mat (zero rows kept) and its rank."""
    buf = bytearray(mat.packed)
    sub, mul, inv = _tables(mat.field)
    r = rref_rank(buf, mat.rows, mat.cols, mat.field.q, sub, mul, inv)
    return MatrixGF(mat.field, mat.rows, mat.cols, tuple(buf)), r


class Subspace:
    """A subspace of F_q^d held as its canonical reduced row echelon basis."""

    __slots__ = ("field", "ambient_dim", "dim", "entries", "pivots", "packed", "_hash")

    def __init__(
        self,
        field: FieldCtx,
        ambient_dim: int,
        dim: int,
        entries: tuple[int, ...],
        pivots: tuple[int, ...],
    ):
        self.field = field
        self.ambient_dim = ambient_dim
        self.dim = dim
        self.entries = entries
        self.pivots = pivots
        self.packed = bytes(entries)
        self._hash = hash((field.q, ambient_dim, entries))

    @classmethod
    def from_rows(cls, field: FieldCtx, ambient_dim: int, rows: Iterable[Sequence[int]]) -> Subspace:
        _require_tables(field)
        flat = []
        count = 0
        for row in rows:
            if len(row) != ambient_dim:
                raise ValueError("row length does not match ambient dimension")
            flat.extend(field.check(x) for x in row)
            count += 1
        buf = bytearray(flat)
        sub, mul, inv = _tables(field)
        r = rref_rank(buf, count, ambient_dim, field.q, sub, mul, inv)
        entries = tuple(buf[: r * ambient_dim])
        pivots = tuple(
            next(j for j in range(ambient_dim) if entries[i * ambient_dim + j])
            for i in range(r)
        )
        return cls(field, ambient_dim, r, entries, pivots)

    @classmethod
    def from_matrix_columns(cls, mat: MatrixGF) -> Subspace:
        """Column space of mat."""
        return cls.from_rows(mat.field, mat.rows, [mat.col(j) for j in range(mat.cols)])

    @classmethod
    def zero(cls, field: FieldCtx, ambient_dim: int) -> Subspace:
        return cls(field, ambient_dim, 0, (), ())

    @property
    def basis_matrix(self) -> MatrixGF:
        return MatrixGF(self.field, self.dim, self.ambient_dim, self.entries)

    def basis_rows(self) -> list[tuple[int, ...]]:
        d = self.ambient_dim
        return [self.entries[i * d : (i + 1) * d] for i in range(self.dim)]

    def contains_vector(self, vec: Sequence[int]) -> bool:
        if len(vec) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        f = self.field
        q = f.q
        sub, mul = f.sub_tab, f.mul_tab
        v = list(vec)
        d = self.ambient_dim
        for i, p in enumerate(self.pivots):
            c = v[p]
            if c:
                base = i * d
                for j in range(p, d):
                    v[j] = sub[v[j] * q + mul[c * q + self.entries[base + j]]]
        return not any(v)

    def contains(self, other: Subspace) -> bool:
        return all(self.contains_vector(row) for row in other.basis_rows())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.entries == other.entries
        )

    def __lt__(self, other: Subspace) -> bool:
        return (self.dim, self.entries) < (other.dim, other.entries)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of F_{self.field.q}^{self.ambient_dim})"


def kernel(mat: MatrixGF) -> Subspace:
    """Right null space of mat as a subspace of F_q^cols."""
    red, r = rref(mat)
    f = mat.field
    d = mat.cols
    pivots = []
    for i in range(r):
        pivots.append(next(j for j in range(d) if red.entry(i, j)))
    pivot_set = set(pivots)
    rows = []
    for free in range(d):
        if free in pivot_set:
            continue
        v = [0] * d
        v[free] = 1
        for i, p in enumerate(pivots):
            v[p] = f.neg(red.entry(i, free))
        rows.append(v)
    if not rows:
        return Subspace.zero(f, d)
    return Subspace.from_rows(f, d, rows)


def inverse(mat: MatrixGF) -> MatrixGF:
    if mat.rows != mat.cols:
        raise ValueError("only square matrices are invertible")
    n = mat.rows
    f = mat.field
    aug = MatrixGF(
        f,
        n,
        2 * n,
        tuple(
            itertools.chain.from_iterable(
                mat.row(i) + tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
            )
        ),
    )
    red, r = rref(aug)
    if r != n or any(
        red.entry(i, j) != (1 if i == j else 0) for i in range(n) for j in range(n)
    ):
        raise ValueError("matrix is singular")
    return MatrixGF(f, n, n, tuple(red.entry(i, n + j) for i in range(n) for j in range(n)))


def intersect_dim(u: Subspace, v: Subspace) -> int:
    """dim(U meet V) computed from the rank of the stacked bases."""
    if u.field != v.field or u.ambient_dim != v.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    f = u.field
    buf = bytearray(u.packed)
    buf += v.packed
    sub, mul, inv = _tables(f)
    r = rre_rank(buf, u.dim + v.dim, u.ambient_dim, f.q, sub, mul, inv)
    return u.dim + v.dim - r


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.field != v.field or u.ambient_dim != v.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    return Subspace.from_rows(u.field, u.ambient_dim, u.basis_rows() + v.basis_rows())


def subspace_intersection(u: Subspace, v: Subspace) -> Subspace:
    """U meet V via the left kernel of the stacked basis matrix."""
    if u.field != v.field or u.ambient_dim != v.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    f = u.field
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(f, u.ambient_dim)
    stacked = u.basis_matrix.stack(v.basis_matrix)
    left = kernel(stacked.transpose())
    rows = []
    for y in left.basis_rows():
        vec = [0] * u.ambient_dim
        for i in range(u.dim):
            c = y[i]
            if c:
                base = i * u.ambient_dim
                for j in range(u.ambient_dim):
                    vec[j] = f.add(vec[j], f.mul(c, u.entries[base + j]))
        rows.append(vec)
    out = Subspace.from_rows(f, u.ambient_dim, rows) if rows else Subspace.zero(f, u.ambient_dim)
    assert out.dim == intersect_dim(u, v)
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k dimensional subspaces of F_q^n, exact."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(
    field: FieldCtx,
    ambient_dim: int,
    dim: int,
    *,
    budget: int | None = DEFAULT_ENUM_BUDGET,
) -> Iterator[Subspace]:
    """All dim dimensional subspaces of F_q^ambient_dim in a fixed order.

    Pivot column sets run in lexicographic order; for each pivot set the
    free entries run in odometer order.  Every yielded basis is already
    canonical, so the stream has no duplicates.
    """
    _require_tables(field)
    if not 0 <= dim <= ambient_dim:
        raise ValueError("dim out of range")
    total = gaussian_binomial(ambient_dim, dim, field.q)
    if budget is not None and total > budget:
        raise BudgetExceededError(
            f"{total} subspaces exceed the budget of {budget}"
        )
    if dim == 0:
        yield Subspace.zero(field, ambient_dim)
        return
    q = field.q
    d = ambient_dim
    for pivots in itertools.combinations(range(d), dim):
        pivot_set = set(pivots)
        base = [0] * (dim * d)
        for i, p in enumerate(pivots):
            base[i * d + p] = 1
        free = [
            (i, j)
            for i in range(dim)
            for j in range(pivots[i] + 1, d)
            if j not in pivot_set
        ]
        if not free:
            yield Subspace(field, d, dim, tuple(base), pivots)
            continue
        for values in itertools.product(range(q), repeat=len(free)):
            entries = list(base)
            for (i, j), val in zip(free, values):
                entries[i * d + j] = val
            yield Subspace(field, d, dim, tuple(entries), pivots)


@functools.lru_cache(maxsize=64)
def all_subspaces(field: FieldCtx, ambient_dim: int, dim: int) -> tuple[Subspace, ...]:
    """Cached tuple of every dim dimensional subspace, enumeration order."""
    total = gaussian_binomial(ambient_dim, dim, field.q)
    if total > _CACHE_LIMIT:
        raise BudgetExceededError(
            f"{total} subspaces exceed the cache limit of {_CACHE_LIMIT}"
        )
    return tuple(enumerate_subspaces(field, ambient_dim, dim, budget=None))


def projective_point_count(dim: int, q: int) -> int:
    return (q**dim - 1) // (q - 1)


@dataclass(frozen=True)
class ProjPoint:
    """A projective point: the representative has first nonzero entry 1."""

    field: FieldCtx
    representative: tuple[int, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.representative)

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.representative < other.representative


def proj_point(field: FieldCtx, vec: Sequence[int]) -> ProjPoint:
    v = [field.check(x) for x in vec]
    lead = next((x for x in v if x), 0)
    if not lead:
        raise ValueError("the zero vector spans no projective point")
    if lead != 1:
        s = field.inv(lead)
        v = [field.mul(s, x) for x in v]
    return ProjPoint(field, tuple(v))


def projective_points(space: Subspace) -> tuple[ProjPoint, ...]:
    """The points of P(space), each normalized, in a fixed order.

    Coefficient vectors with leading coefficient 1 are walked in
    lexicographic order; combined with the reduced basis this yields each
    point exactly once with its representative already normalized.
    """
    f = space.field
    q = f.q
    d = space.ambient_dim
    s = space.dim
    out = []
    for lead in range(s):
        for tail in itertools.product(range(q), repeat=s - lead - 1):
            coeff = (0,) * lead + (1,) + tail
            vec = [0] * d
            for i, c in enumerate(coeff):
                if c:
                    base = i * d
                    for j in range(d):
                        vec[j] = f.add(vec[j], f.mul(c, space.entries[base + j]))
            out.append(ProjPoint(f, tuple(vec)))
    return tuple(out)
