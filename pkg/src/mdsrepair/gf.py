"""Arithmetic for small prime power fields GF(p^m) and their extensions.

Elements are encoded as integers in [0, p^m): the base-p digits of the
encoding are the coefficients of the residue polynomial, constant term
first.  The prime subfield therefore sits at encodings 0..p-1 and the
residue class of x has encoding p.  Flat lookup tables are built for
fields of at most TABLE_LIMIT elements; larger fields fall back to
on-the-fly polynomial arithmetic and cannot back matrix computations.
"""
from __future__ import annotations

import functools
from collections.abc import Sequence

TABLE_LIMIT = 256
DEFAULT_SIZE_CAP = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _digits(value: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(value % p)
        value //= p
    return out


def _encode(digits: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of num modulo den over Z_p, coefficients constant term first."""
    num = _poly_trim(list(num))
    dd = len(den) - 1
    lead_inv = pow(den[-1], p - 2, p)
    while len(num) - 1 >= dd and num:
        shift = len(num) - 1 - dd
        f = num[-1] * lead_inv % p
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - f * c) % p
        _poly_trim(num)
    return num


def _poly_mul_mod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, modulus, p)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2 over Z_p."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] == 0:
        return False
    if m == 1:
        return True
    if modulus[0] == 0:
        return False
    from itertools import product as _product

    for d in range(1, m // 2 + 1):
        for low in _product(range(p), repeat=d):
            den = list(low) + [1]
            if not _poly_mod(modulus, den, p):
                return False
    return True


class FieldCtx:
    """A concrete GF(p^m) with a fixed modulus and fixed element encoding."""

    __slots__ = ("p", "m", "q", "modulus", "add_tab", "sub_tab", "mul_tab", "inv_tab")

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        if self.q <= TABLE_LIMIT:
            self._build_tables()
        else:
            self.add_tab = self.sub_tab = self.mul_tab = self.inv_tab = None

    def _build_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        add = bytearray(q * q)
        sub = bytearray(q * q)
        mul = bytearray(q * q)
        inv = bytearray(q)
        polys = [_digits(a, p, m) for a in range(q)]
        for a in range(q):
            pa = polys[a]
            for b in range(q):
                pb = polys[b]
                add[a * q + b] = _encode([(x + y) % p for x, y in zip(pa, pb)], p)
                sub[a * q + b] = _encode([(x - y) % p for x, y in zip(pa, pb)], p)
                mul[a * q + b] = _encode(
                    _poly_mul_mod(pa, pb, self.modulus, p) + [0] * m, p
                )
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        self.add_tab = bytes(add)
        self.sub_tab = bytes(sub)
        self.mul_tab = bytes(mul)
        self.inv_tab = bytes(inv)

    @property
    def has_tables(self) -> bool:
        return self.mul_tab is not None

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError(f"{a!r} is not an element encoding of {self!r}")
        return a

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        if self.add_tab is not None:
            return self.add_tab[a * self.q + b]
        p = self.p
        return _encode(
            [(x + y) % p for x, y in zip(_digits(a, p, self.m), _digits(b, p, self.m))], p
        )

    def sub(self, a: int, b: int) -> int:
        if self.sub_tab is not None:
            return self.sub_tab[a * self.q + b]
        p = self.p
        return _encode(
            [(x - y) % p for x, y in zip(_digits(a, p, self.m), _digits(b, p, self.m))], p
        )

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self.mul_tab is not None:
            return self.mul_tab[a * self.q + b]
        p = self.p
        prod = _poly_mul_mod(_digits(a, p, self.m), _digits(b, p, self.m), self.modulus, p)
        return _encode(prod + [0] * self.m, p)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.inv_tab is not None:
            return self.inv_tab[a]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def to_poly(self, a: int) -> tuple[int, ...]:
        return tuple(_digits(a, self.p, self.m))

    def from_poly(self, digits: Sequence[int]) -> int:
        if len(digits) != self.m:
            raise ValueError(f"expected {self.m} coefficients")
        return _encode([d % self.p for d in digits], self.p)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"


@functools.lru_cache(maxsize=None)
def _build_field(p: int, m: int, modulus: tuple[int, ...]) -> FieldCtx:
    return FieldCtx(p, m, modulus)


@functools.lru_cache(maxsize=None)
def _default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m with the smallest integer encoding."""
    for low in range(p**m):
        cand = _digits(low, p, m) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError(f"no irreducible polynomial of degree {m} over GF({p})")


def make_field(
    p: int,
    m: int = 1,
    modulus: Sequence[int] | None = None,
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> FieldCtx:
    """Construct GF(p^m).

    The modulus is given low to high including the leading 1, and defaults
    to the monic irreducible of degree m whose encoding is smallest.
    """
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if m < 1:
        raise ValueError(f"m = {m} must be positive")
    if p**m > size_cap:
        raise ValueError(f"field size {p**m} exceeds cap {size_cap}")
    if modulus is None:
        mod = _default_modulus(p, m)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree m, constant term first")
        if not is_irreducible(mod, p):
            raise ValueError(f"modulus {mod} is reducible over GF({p})")
    return _build_field(p, m, mod)


def field_of_order(q: int, *, size_cap: int = DEFAULT_SIZE_CAP) -> FieldCtx:
    """GF(q) with the default modulus, for q any prime power."""
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    p = 2
    while q % p:
        p += 1
        if p * p > q:
            p = q
            break
    m = 0
    rest = q
    while rest > 1:
        if rest % p:
            raise ValueError(f"q = {q} is not a prime power")
        rest //= p
        m += 1
    return make_field(p, m, size_cap=size_cap)


class ExtensionCtx:
    """GF(q^ell) viewed as an ell dimensional vector space over GF(q).

    Both fields are realised over the common prime field; the subfield is
    mapped in through the smallest root of its modulus in the top field,
    and coordinates refer to the power basis 1, x, .., x^(ell-1) of the
    top field generator.
    """

    __slots__ = (
        "base",
        "top",
        "ell",
        "embed_tab",
        "_lift",
        "_coord_mat",
        "_coord_inv",
    )

    def __init__(self, base: FieldCtx, top: FieldCtx, ell: int):
        if top.p != base.p or top.m != base.m * ell:
            raise ValueError("top field degree must be base degree times ell")
        self.base = base
        self.top = top
        self.ell = ell
        self._build_embedding()
        self._build_coords()

    def _build_embedding(self) -> None:
        base, top = self.base, self.top
        root = None
        for t in top.elements():
            acc = 0
            power = 1
            for c in base.modulus:
                acc = top.add(acc, top.mul(c, power))
                power = top.mul(power, t)
            if acc == 0:
                root = t
                break
        if root is None:
            raise RuntimeError("subfield modulus has no root in the top field")
        tab = []
        for c in base.elements():
            acc = 0
            for d in reversed(base.to_poly(c)):
                acc = top.add(top.mul(acc, root), d)
            tab.append(acc)
        self.embed_tab = tuple(tab)
        if len(set(tab)) != base.q:
            raise RuntimeError("subfield embedding is not injective")
        self._lift = {t: c for c, t in enumerate(tab)}

    def _build_coords(self) -> None:
        # GF(p) linear map from power basis coordinates to top field digits.
        base, top, ell = self.base, self.top, self.ell
        p, m = base.p, base.m
        dim = m * ell
        y = base.p % top.q  # residue class of x, unused when ell == 1
        y_pows = [1]
        for _ in range(ell - 1):
            y_pows.append(top.mul(y_pows[-1], y))
        cols = []
        for j in range(ell):
            for t in range(m):
                c = base.from_poly([1 if i == t else 0 for i in range(m)])
                val = top.mul(self.embed_tab[c], y_pows[j])
                cols.append(_digits(val, p, dim))
        mat = [[cols[c][r] for c in range(dim)] for r in range(dim)]
        inv = _invert_mod_p(mat, p)
        if inv is None:
            raise RuntimeError("power basis coordinate map is singular")
        self._coord_mat = mat
        self._coord_inv = inv

    def embed(self, c: int) -> int:
        self.base.check(c)
        return self.embed_tab[c]

    def lift(self, t: int) -> int:
        try:
            return self._lift[t]
        except KeyError:
            raise ValueError(f"{t} is not in the embedded subfield") from None

    def to_coords(self, a: int) -> tuple[int, ...]:
        self.top.check(a)
        p, m = self.base.p, self.base.m
        dim = m * self.ell
        dig = _digits(a, p, dim)
        sol = [sum(self._coord_inv[r][c] * dig[c] for c in range(dim)) % p for r in range(dim)]
        return tuple(_encode(sol[j * m : (j + 1) * m], p) for j in range(self.ell))

    def from_coords(self, vec: Sequence[int]) -> int:
        if len(vec) != self.ell:
            raise ValueError(f"expected {self.ell} coordinates")
        p, m = self.base.p, self.base.m
        dim = m * self.ell
        dig = []
        for v in vec:
            self.base.check(v)
            dig.extend(_digits(v, p, m))
        out = [sum(self._coord_mat[r][c] * dig[c] for c in range(dim)) % p for r in range(dim)]
        return _encode(out, p)

    def norm(self, a: int) -> int:
        """Product of the GF(q) conjugates of a, an element of the base field."""
        self.top.check(a)
        if a == 0:
            return 0
        acc = 1
        x = a
        for _ in range(self.ell):
            acc = self.top.mul(acc, x)
            x = self.top.pow(x, self.base.q)
        return self.lift(acc)

    def embed_pair(self, a: int, b: int) -> tuple[int, ...]:
        """Coordinates of (a, b) in GF(q)^(2*ell) under the power basis."""
        return self.to_coords(a) + self.to_coords(b)

    def unembed_pair(self, vec: Sequence[int]) -> tuple[int, int]:
        if len(vec) != 2 * self.ell:
            raise ValueError(f"expected {2 * self.ell} coordinates")
        return self.from_coords(vec[: self.ell]), self.from_coords(vec[self.ell :])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExtensionCtx)
            and self.base == other.base
            and self.top == other.top
            and self.ell == other.ell
        )

    def __hash__(self) -> int:
        return hash((self.base, self.top, self.ell))

    def __repr__(self) -> str:
        return f"GF({self.top.q})/GF({self.base.q})"


def _invert_mod_p(mat: list[list[int]], p: int) -> list[list[int]] | None:
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if aug[r][col] % p), None)
        if piv is None:
            return None
        aug[rank], aug[piv] = aug[piv], aug[rank]
        f = pow(aug[rank][col], p - 2, p)
        aug[rank] = [x * f % p for x in aug[rank]]
        for r in range(n):
            if r != rank and aug[r][col]:
                g = aug[r][col]
                aug[r] = [(x - g * y) % p for x, y in zip(aug[r], aug[rank])]
        rank += 1
    return [row[n:] for row in aug]


@functools.lru_cache(maxsize=None)
def _build_extension(base: FieldCtx, ell: int, top: FieldCtx) -> ExtensionCtx:
    return ExtensionCtx(base, top, ell)


def make_extension(
    base: FieldCtx,
    ell: int,
    top_modulus: Sequence[int] | None = None,
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> ExtensionCtx:
    """Construct the degree ell extension of base as an ExtensionCtx."""
    if ell < 1:
        raise ValueError(f"ell = {ell} must be positive")
    top = make_field(base.p, base.m * ell, top_modulus, size_cap=size_cap)
    return _build_extension(base, ell, top)
