"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works on plain Python integers, so there is no overflow to
worry about.  Matrices are tuples of row tuples.  Groups are presented in
invariant-factor form ``Z^s + Z/t_1 + ... + Z/t_q`` with ``t_1 | ... | t_q``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Callable, Iterable, NamedTuple, Sequence

Matrix = tuple[tuple[int, ...], ...]


class GroupError(ValueError):
    """Raised for element/group mismatches and similar misuse."""


class LimitExceeded(RuntimeError):
    """A brute-force routine was asked to work beyond its configured limit."""


# ---------------------------------------------------------------------------
# matrices

def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and len({len(row) for row in m}) != 1:
        raise ValueError("matrix rows must have equal length")
    return m


@lru_cache(maxsize=64)
def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def vecmat(v: Sequence[int], m: Matrix) -> tuple[int, ...]:
    """Row vector times matrix."""
    if not m:
        return ()
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def det(m: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithForm:
    """``U * M * V == D`` with unimodular ``U``, ``V`` and ``diag`` the
    diagonal of ``D`` (length ``min(rows, cols)``)."""

    U: Matrix
    D: Matrix
    V: Matrix
    diag: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def smith_normal_form(m: Matrix) -> SmithForm:
    m = as_matrix(m)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):  # col_dst += c * col_src
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    d = as_matrix(a)
    diag = tuple(d[i][i] for i in range(min(rows, cols)))
    return SmithForm(U=as_matrix(u), D=d, V=as_matrix(v), diag=diag)


def hermite_rows(m: Iterable[Sequence[int]], ncols: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by the rows.

    Zero rows are dropped; pivots are positive and the entries above a pivot
    are reduced into ``[0, pivot)``.  The result only depends on the lattice.
    """
    a = [list(r) for r in m if any(r)]
    pr = 0
    for c in range(ncols):
        if pr >= len(a):
            break
        while True:
            nz = [i for i in range(pr, len(a)) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[pr], a[i0] = a[i0], a[pr]
            done = True
            for i in range(pr + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[pr][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                    done = done and a[i][c] == 0
            if done:
                break
        if pr < len(a) and a[pr][c]:
            if a[pr][c] < 0:
                a[pr] = [-x for x in a[pr]]
            for i in range(pr):
                q = a[i][c] // a[pr][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
            pr += 1
    return as_matrix(row for row in a[:pr])


def _reduce_by_hermite(basis: Matrix, vec: Sequence[int]) -> tuple[int, ...] | None:
    """Return the remainder of ``vec`` modulo the lattice, or None if it lies in it."""
    v = list(vec)
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        q, rem = divmod(v[c], row[c])
        if rem:
            return tuple(v)
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return None if not any(v) else tuple(v)


# ---------------------------------------------------------------------------
# groups

class GroupElem(NamedTuple):
    free: tuple[int, ...]
    tors: tuple[int, ...]

    def __repr__(self):
        if self.tors:
            return f"({', '.join(map(str, self.free))}; {', '.join(map(str, self.tors))})"
        return f"({', '.join(map(str, self.free))})"


@dataclass(frozen=True, order=True)
class AbGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise GroupError("negative free rank")
        for t in self.torsion:
            if t < 2:
                raise GroupError(f"invariant factors must be >= 2, got {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise GroupError(f"invariant factors {self.torsion} do not form a chain")

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int]) -> "AbGroup":
        """Normalise ``Z^s + sum Z/o_i`` (any orders) to invariant-factor form."""
        group, _ = _cokernel_of_diagonal(free_rank, tuple(orders))
        return group

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    @property
    def order(self) -> int | None:
        """Group order, None if infinite."""
        return None if self.free_rank else self.torsion_order

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def torsion_part(self) -> "AbGroup":
        return AbGroup(0, self.torsion)

    def elem(self, free: Iterable[int] = (), tors: Iterable[int] = ()) -> GroupElem:
        free = tuple(free)
        tors = tuple(tors)
        if len(free) != self.free_rank or len(tors) != len(self.torsion):
            raise GroupError(f"element shape ({free}, {tors}) does not fit {self}")
        return GroupElem(free, tuple(x % t for x, t in zip(tors, self.torsion)))

    def zero(self) -> GroupElem:
        return GroupElem((0,) * self.free_rank, (0,) * len(self.torsion))

    def check(self, g: GroupElem) -> None:
        if len(g.free) != self.free_rank or len(g.tors) != len(self.torsion):
            raise GroupError(f"{g!r} is not an element of {self}")

    def add(self, a: GroupElem, b: GroupElem) -> GroupElem:
        return GroupElem(
            tuple(x + y for x, y in zip(a.free, b.free)),
            tuple((x + y) % t for x, y, t in zip(a.tors, b.tors, self.torsion)),
        )

    def neg(self, a: GroupElem) -> GroupElem:
        return GroupElem(tuple(-x for x in a.free), tuple(-x % t for x, t in zip(a.tors, self.torsion)))

    def sub(self, a: GroupElem, b: GroupElem) -> GroupElem:
        return self.add(a, self.neg(b))

    def scale(self, k: int, a: GroupElem) -> GroupElem:
        return GroupElem(tuple(k * x for x in a.free), tuple(k * x % t for x, t in zip(a.tors, self.torsion)))

    def sum(self, elems: Iterable[GroupElem]) -> GroupElem:
        return reduce(self.add, elems, self.zero())

    def elements(self) -> list[GroupElem]:
        """All elements of a finite group, in lexicographic order."""
        if self.free_rank:
            raise GroupError("cannot list the elements of an infinite group")
        return [GroupElem((), t) for t in itertools.product(*(range(t) for t in self.torsion))]

    def lift(self, g: GroupElem) -> tuple[int, ...]:
        return g.free + g.tors

    def relation_rows(self) -> Matrix:
        s, q = self.free_rank, len(self.torsion)
        return tuple(
            tuple(t if j == s + i else 0 for j in range(s + q)) for i, t in enumerate(self.torsion)
        )

    def __str__(self):
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@lru_cache(maxsize=4096)
def _cokernel_of_rows(rows: Matrix, ncols: int):
    """``Z^ncols / rowspan(rows)`` in invariant-factor form plus the change of
    coordinates used by the projection."""
    if not rows:
        return AbGroup(ncols), identity(ncols), (), ncols
    snf = smith_normal_form(rows)
    rank = snf.rank
    tors_idx = tuple(i for i in range(rank) if snf.diag[i] > 1)
    group = AbGroup(ncols - rank, tuple(snf.diag[i] for i in tors_idx))
    return group, snf.V, tors_idx, rank


def _projection(rows: Matrix, ncols: int) -> tuple[AbGroup, Callable[[Sequence[int]], GroupElem]]:
    group, v, tors_idx, rank = _cokernel_of_rows(rows, ncols)

    def project(vec: Sequence[int]) -> GroupElem:
        y = vecmat(vec, v)
        return GroupElem(
            tuple(y[rank:]),
            tuple(y[i] % t for i, t in zip(tors_idx, group.torsion)),
        )

    return group, project


def _cokernel_of_diagonal(free_rank: int, orders: tuple[int, ...]):
    n = free_rank + len(orders)
    rows = tuple(
        tuple(o if j == free_rank + i else 0 for j in range(n)) for i, o in enumerate(orders)
    )
    return _projection(rows, n)


def cokernel(m: Matrix) -> AbGroup:
    """``Z^rows / column span of m``."""
    m = as_matrix(m)
    rows = len(m)
    if rows == 0:
        return AbGroup(0)
    cols = transpose(m) if m[0] else ()
    return _cokernel_of_rows(tuple(c for c in cols if any(c)), rows)[0]


# ---------------------------------------------------------------------------
# subgroups

@dataclass(frozen=True)
class Subgroup:
    ambient: AbGroup
    gens: tuple[GroupElem, ...]
    basis: Matrix = field(compare=False)

    def contains(self, g: GroupElem) -> bool:
        self.ambient.check(g)
        return _reduce_by_hermite(self.basis, self.ambient.lift(g)) is None

    def __contains__(self, g: GroupElem) -> bool:
        return self.contains(g)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))


@lru_cache(maxsize=1 << 16)
def _span_basis(ambient: AbGroup, gens: tuple[GroupElem, ...]) -> Matrix:
    rows = [ambient.lift(g) for g in gens] + list(ambient.relation_rows())
    return hermite_rows(rows, ambient.ngens)


def span(ambient: AbGroup, gens: Iterable[GroupElem]) -> Subgroup:
    gens = tuple(gens)
    for g in gens:
        ambient.check(g)
    return Subgroup(ambient, gens, _span_basis(ambient, gens))


def quotient(ambient: AbGroup, h: Subgroup) -> tuple[AbGroup, Callable[[GroupElem], GroupElem]]:
    """``ambient / h`` and the projection onto it."""
    if h.ambient != ambient:
        raise GroupError("subgroup lives in a different group")
    group, project = _projection(h.basis, ambient.ngens)

    def projection(g: GroupElem) -> GroupElem:
        ambient.check(g)
        return project(ambient.lift(g))

    return group, projection


def index(ambient: AbGroup, h: Subgroup) -> int | None:
    """``[ambient : h]``, None if infinite."""
    return quotient(ambient, h)[0].order


def order_in_quotient(ambient: AbGroup, h: Subgroup, g: GroupElem) -> int | None:
    """Least ``k >= 1`` with ``k*g`` in ``h``; None if no such ``k`` exists."""
    group, projection = quotient(ambient, h)
    image = projection(g)
    if any(image.free):
        return None
    return math.lcm(1, *(t // math.gcd(t, x) for x, t in zip(image.tors, group.torsion)))


def generates(ambient: AbGroup, gens: Iterable[GroupElem]) -> bool:
    gens = tuple(gens)
    basis = _span_basis(ambient, gens)
    # the lattice is all of Z^n exactly when its Hermite form is the identity
    return basis == identity(ambient.ngens)


def intersection_index(ambient: AbGroup, subgroups: Sequence[Subgroup]) -> int | None:
    """``[ambient : h_1 ∩ ... ∩ h_k]`` for finite-index subgroups.

    Computed as the size of the image of ``ambient`` in the product of the
    finite quotients ``ambient / h_i``; None if some quotient is infinite.
    """
    quotients = [quotient(ambient, h) for h in subgroups]
    if any(q.free_rank for q, _ in quotients):
        return None
    orders = tuple(t for q, _ in quotients for t in q.torsion)
    product = AbGroup.from_orders(0, orders)
    _, to_product = _cokernel_of_diagonal(0, orders)
    images = []
    for i in range(ambient.ngens):
        e = ambient.elem(
            tuple(int(j == i) for j in range(ambient.free_rank)),
            tuple(int(j == i - ambient.free_rank) for j in range(len(ambient.torsion))),
        )
        coords = tuple(x for _, proj in quotients for x in proj(e).tors)
        images.append(to_product(coords))
    image = span(product, images)
    return product.order // quotient(product, image)[0].order


# ---------------------------------------------------------------------------
# automorphisms of finite groups

@dataclass(frozen=True)
class TorsionAutomorphism:
    """Automorphism of a finite group, stored by the images of the standard
    generators."""

    group: AbGroup
    images: tuple[GroupElem, ...]

    def __call__(self, g: GroupElem) -> GroupElem:
        return self.group.sum(self.group.scale(c, img) for c, img in zip(g.tors, self.images))

    def apply_residues(self, tors: Sequence[int]) -> tuple[int, ...]:
        out = [0] * len(self.group.torsion)
        for c, img in zip(tors, self.images):
            if c:
                for k, x in enumerate(img.tors):
                    out[k] += c * x
        return tuple(x % t for x, t in zip(out, self.group.torsion))


@lru_cache(maxsize=256)
def _torsion_automorphisms(group: AbGroup) -> tuple[TorsionAutomorphism, ...]:
    elements = group.elements()
    candidates = [
        [g for g in elements if group.scale(t, g) == group.zero()] for t in group.torsion
    ]
    autos = []
    for images in itertools.product(*candidates):
        if generates(group, images):
            autos.append(TorsionAutomorphism(group, tuple(images)))
    return tuple(autos)


def torsion_automorphisms(group: AbGroup, limit: int = 64) -> list[TorsionAutomorphism]:
    """All automorphisms of a finite group, by brute force over generator images."""
    if group.free_rank:
        raise GroupError("only finite groups are supported")
    if group.torsion_order > limit:
        raise LimitExceeded(f"|G| = {group.torsion_order} exceeds the limit {limit}")
    return list(_torsion_automorphisms(group))


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _factorize(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_groups_of_order(n: int) -> list[AbGroup]:
    """One representative per isomorphism class of abelian groups of order n."""
    per_prime = [
        [(p, part) for part in _partitions(e)] for p, e in sorted(_factorize(n).items())
    ]
    groups = []
    for choice in itertools.product(*per_prime):
        length = max((len(part) for _, part in choice), default=0)
        factors = [1] * length
        for p, part in choice:
            for i, e in enumerate(part):
                factors[i] *= p**e
        groups.append(AbGroup(0, tuple(sorted(f for f in factors if f > 1))))
    return sorted(groups, key=lambda g: (len(g.torsion), g.torsion))
