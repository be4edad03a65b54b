"""Which Cox coordinates can be simultaneously nonzero on the total
coordinate space, and the weight sets they carry.

The monomials ``z_i = T_i^{l_i}`` of a point satisfy all trinomial relations
iff ``z_i = phi(a_i)`` for one linear form ``phi`` on ``K^2``.  As the ``a_i``
are pairwise linearly independent, either all monomials vanish, exactly one
vanishes, or none does.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coxring import RingData
from .intlin import GroupElem

MonomialPattern = tuple[bool, ...]

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True, order=True)
class Support:
    """Coordinates that are nonzero: ``t_coords`` holds pairs ``(i, j)``
    (block, position, both 0-based) and ``s_coords`` indices ``k`` of free
    variables."""

    t_coords: tuple[tuple[int, int], ...]
    s_coords: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "t_coords", tuple(sorted(set(self.t_coords))))
        object.__setattr__(self, "s_coords", tuple(sorted(set(self.s_coords))))
        if not self.t_coords and not self.s_coords:
            raise ValueError("a support must be nonempty")

    def __len__(self):
        return len(self.t_coords) + len(self.s_coords)

    def issubset(self, other: "Support") -> bool:
        return set(self.t_coords) <= set(other.t_coords) and set(self.s_coords) <= set(other.s_coords)

    def pattern(self, block_sizes: Sequence[int]) -> MonomialPattern:
        present = set(self.t_coords)
        return tuple(all((i, j) in present for j in range(n)) for i, n in enumerate(block_sizes))

    def label(self, block_sizes: Sequence[int]) -> str:
        offsets = list(itertools.accumulate([0] + list(block_sizes)))
        names = [f"T{offsets[i] + j + 1}" for i, j in self.t_coords]
        names += [f"S{k + 1}" for k in self.s_coords]
        return "{" + ",".join(names) + "}"


def _order(supports):
    return sorted(set(supports), key=lambda s: (len(s), s))


def _minimal(supports):
    supports = _order(supports)
    return [s for s in supports if not any(o != s and o.issubset(s) for o in supports)]


def admissible_patterns(r: int) -> list[MonomialPattern]:
    """Vanishing patterns of the monomials ``T_0^{l_0}, ..., T_r^{l_r}`` that
    occur on the total coordinate space, lexicographically ordered."""
    if r < 2:
        raise ValueError("patterns are only defined for r >= 2")
    pats = [p for p in itertools.product((False, True), repeat=r + 1) if p.count(False) in (0, 1, r + 1)]
    return sorted(pats)


def minimal_supports(data: RingData) -> list[Support]:
    if data.r < 2:
        raise ValueError("toric data: every coordinate singleton is a minimal support")
    return supports_for_shape(data.block_sizes, data.m)


def supports_for_shape(sizes: Sequence[int], m: int) -> list[Support]:
    """Minimal supports of any datum with block sizes ``sizes`` and ``m`` free
    variables (at least three blocks)."""
    candidates = []
    for pattern in admissible_patterns(len(sizes) - 1):
        if any(pattern):
            candidates.append(Support(tuple((i, j) for i, n in enumerate(sizes) if pattern[i] for j in range(n))))
        else:
            candidates += [Support((), (k,)) for k in range(m)]
            candidates += [Support(((i, j),)) for i, n in enumerate(sizes) if n >= 2 for j in range(n)]
    return _minimal(candidates)


def toric_supports(data: RingData) -> list[Support]:
    sizes = data.block_sizes
    singles = [Support(((i, j),)) for i, n in enumerate(sizes) for j in range(n)]
    return _order(singles + [Support((), (k,)) for k in range(data.m)])


def supports(data: RingData) -> list[Support]:
    """Minimal supports, covering the toric case as well."""
    return minimal_supports(data) if data.r >= 2 else toric_supports(data)


def weight_set(data: RingData, s: Support) -> list[GroupElem]:
    sizes = data.block_sizes
    blocks = data.block_weights()
    out = []
    for i, j in s.t_coords:
        if not (0 <= i < len(sizes) and 0 <= j < sizes[i]):
            raise IndexError(f"coordinate T({i},{j}) is not part of the data")
        out.append(blocks[i][j])
    for k in s.s_coords:
        if not 0 <= k < data.m:
            raise IndexError(f"coordinate S({k}) is not part of the data")
        out.append(data.grading.free_weights[k])
    return out


# ---------------------------------------------------------------------------
# independent oracle

def _generic_coefficients(count: int) -> list[tuple[Fraction, Fraction]]:
    base = [(1, 0), (0, 1), (1, 1)]
    return [tuple(map(Fraction, base[i])) if i < 3 else (Fraction(1), Fraction(i)) for i in range(count)]


def _realizable(nonzero: Sequence[bool], coeffs) -> bool:
    """Is there a linear form ``phi`` with ``phi(a_i) != 0`` exactly where
    ``nonzero[i]`` holds?"""
    zero = [a for a, nz in zip(coeffs, nonzero) if not nz]
    if not zero:
        return True
    a0 = zero[0]
    if any(a0[0] * a[1] - a0[1] * a[0] for a in zero[1:]):
        return not any(nonzero)  # phi vanishes on K^2
    if a0 == (0, 0):
        return not any(nonzero)
    phi = lambda a: a0[0] * a[1] - a0[1] * a[0]  # noqa: E731
    return all(phi(a) != 0 for a, nz in zip(coeffs, nonzero) if nz)


def brute_force_supports(data: RingData) -> list[Support]:
    """Minimal supports by running through every nonzero coordinate subset and
    solving the relations for explicit generic coefficients."""
    sizes = data.block_sizes
    coords = [("T", (i, j)) for i, n in enumerate(sizes) for j in range(n)]
    coords += [("S", k) for k in range(data.m)]
    if len(coords) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{len(coords)} coordinates exceed the brute-force limit {BRUTE_FORCE_LIMIT}")
    coeffs = _generic_coefficients(len(sizes))
    found = []
    for mask in range(1, 1 << len(coords)):
        chosen = [c for b, c in enumerate(coords) if mask >> b & 1]
        ts = [c for kind, c in chosen if kind == "T"]
        ss = [c for kind, c in chosen if kind == "S"]
        nonzero = [all((i, j) in ts for j in range(n)) for i, n in enumerate(sizes)]
        if data.r >= 2 and not _realizable(nonzero, coeffs):
            continue
        found.append(Support(tuple(ts), tuple(ss)))
    return _minimal(found)
