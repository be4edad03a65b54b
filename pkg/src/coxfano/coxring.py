"""Graded trinomial rings ``R(A, n, L, m)`` and their combinatorial data.

A ring is stored by its discrete data only: the blocks of variables
``T_i1..T_in_i`` with exponents ``l_ij``, the number ``m`` of free variables
``S_k`` and the grading by ``K = Z + K^t``.  The coefficient vectors ``a_i``
are never stored; for ``r >= 3`` they contribute ``r - 2`` continuous moduli.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

from .intlin import (
    AbGroup,
    GroupElem,
    LimitExceeded,
    generates,
    quotient,
    smith_normal_form,
    span,
    torsion_automorphisms,
)

FORMAT_VERSION = 1
ORBIT_LIMIT = 10**6


@dataclass(frozen=True)
class BlockData:
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(x) for x in self.exponents))
        if not self.exponents:
            raise ValueError("a block needs at least one variable")
        if any(x < 1 for x in self.exponents):
            raise ValueError(f"exponents must be positive: {self.exponents}")

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def ell(self) -> int:
        """gcd of the exponents of the block."""
        return math.gcd(*self.exponents)


@dataclass(frozen=True)
class Grading:
    group: AbGroup
    weights: tuple[GroupElem, ...]
    free_weights: tuple[GroupElem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "free_weights", tuple(self.free_weights))
        for g in self.weights + self.free_weights:
            self.group.check(g)

    @property
    def degrees(self) -> tuple[GroupElem, ...]:
        return self.weights + self.free_weights


@dataclass(frozen=True)
class RingData:
    """Discrete data of ``R(A, n, L, m)`` together with its ``K``-grading.

    ``grading.weights`` lists the degrees of the ``T_ij`` block by block;
    ``grading.free_weights`` those of the ``S_k``.  A ring without relations
    (toric case) may have no blocks at all.
    """

    blocks: tuple[BlockData, ...]
    m: int
    grading: Grading

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if len(self.grading.weights) != self.n:
            raise ValueError(f"{len(self.grading.weights)} weights for {self.n} block variables")
        if len(self.grading.free_weights) != self.m:
            raise ValueError(f"{len(self.grading.free_weights)} free weights for m = {self.m}")

    @classmethod
    def build(
        cls,
        blocks: Sequence[Sequence[int]],
        weights: Sequence[Sequence[int]],
        free_weights: Sequence[Sequence[int]] = (),
        torsion: Sequence[int] = (),
    ) -> "RingData":
        """Shorthand constructor for ``K = Z + K^t``; a weight is given as
        ``(w0, t_1, ..., t_q)``."""
        group = AbGroup(1, tuple(torsion))
        elem = lambda w: group.elem((w[0],), tuple(w[1:]))  # noqa: E731
        return cls(
            tuple(BlockData(tuple(b)) for b in blocks),
            len(free_weights),
            Grading(group, tuple(map(elem, weights)), tuple(map(elem, free_weights))),
        )

    @property
    def r(self) -> int:
        return max(len(self.blocks) - 1, 0)

    @property
    def n(self) -> int:
        return sum(b.n for b in self.blocks)

    @property
    def group(self) -> AbGroup:
        return self.grading.group

    @property
    def moduli_count(self) -> int:
        return max(self.r - 2, 0)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(b.n for b in self.blocks)

    def block_weights(self) -> list[tuple[GroupElem, ...]]:
        return list(self._block_weights)

    @cached_property
    def _block_weights(self) -> tuple[tuple[GroupElem, ...], ...]:
        out, pos = [], 0
        for b in self.blocks:
            out.append(self.grading.weights[pos:pos + b.n])
            pos += b.n
        return tuple(out)

    def monomial_degree(self, i: int) -> GroupElem:
        K = self.group
        return K.sum(K.scale(l, w) for l, w in zip(self.blocks[i].exponents, self.block_weights()[i]))

    def relations(self) -> list[str]:
        """Human readable relations, variables numbered like ``T1, T2, ...``."""
        names, pos = [], 1
        for b in self.blocks:
            terms = []
            for l in b.exponents:
                terms.append(f"T{pos}" + (f"^{l}" if l > 1 else ""))
                pos += 1
            names.append("".join(terms))
        out = []
        for i in range(self.r - 1):
            coeff = f"c{i}*" if i else ""
            out.append(f"{coeff}{names[i]}+{names[i + 1]}+{names[i + 2]}")
        return out

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "r": self.r,
            "blocks": [{"n": b.n, "l": list(b.exponents)} for b in self.blocks],
            "m": self.m,
            "group": group_to_dict(self.group),
            "weights": [elem_to_json(w) for w in self.grading.weights],
            "free_weights": [elem_to_json(u) for u in self.grading.free_weights],
            "moduli_count": self.moduli_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RingData":
        if d.get("version", FORMAT_VERSION) != FORMAT_VERSION:
            raise ValueError(f"unsupported RingData format version {d.get('version')}")
        group = group_from_dict(d["group"])
        blocks = []
        for b in d["blocks"]:
            block = BlockData(tuple(b["l"]))
            if "n" in b and b["n"] != block.n:
                raise ValueError(f"block size {b['n']} does not match exponents {b['l']}")
            blocks.append(block)
        data = cls(
            tuple(blocks),
            int(d["m"]),
            Grading(
                group,
                tuple(elem_from_json(group, w) for w in d["weights"]),
                tuple(elem_from_json(group, u) for u in d.get("free_weights", [])),
            ),
        )
        if "r" in d and d["r"] != data.r:
            raise ValueError(f"r = {d['r']} does not match {len(blocks)} blocks")
        if "moduli_count" in d and d["moduli_count"] != data.moduli_count:
            raise ValueError("moduli_count does not match r")
        return data


def group_to_dict(group: AbGroup) -> dict:
    return {"free_rank": group.free_rank, "torsion": list(group.torsion)}


def group_from_dict(d: dict) -> AbGroup:
    return AbGroup(int(d["free_rank"]), tuple(d["torsion"]))


def elem_to_json(g: GroupElem) -> list:
    free = g.free[0] if len(g.free) == 1 else list(g.free)
    return [free, list(g.tors)]


def elem_from_json(group: AbGroup, x: Sequence) -> GroupElem:
    free, tors = x
    free = (free,) if isinstance(free, int) else tuple(free)
    g = group.elem(free, tuple(tors))
    if tuple(tors) != g.tors:
        raise ValueError(f"torsion residues {tors} are not reduced in {group}")
    return g


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def relation_rows(data: RingData) -> list[tuple[int, ...]]:
    """Exponent vectors ``l_i - l_0`` of the relations, one per block ``i >= 1``."""
    N = data.n + data.m
    offsets = list(itertools.accumulate([0] + [b.n for b in data.blocks]))
    rows = []
    for i in range(1, len(data.blocks)):
        row = [0] * N
        for j, l in enumerate(data.blocks[0].exponents):
            row[j] -= l
        for j, l in enumerate(data.blocks[i].exponents):
            row[offsets[i] + j] += l
        rows.append(tuple(row))
    return rows


def relations_saturated(data: RingData) -> bool:
    """Whether the relation lattice is saturated in the kernel of the degree map.

    The class group must be a cokernel ``Z^{n+m} / im(P^*)`` of a matrix ``P``
    whose first rows are the relation rows; this holds exactly when the finite
    group ``sat(R)/R`` maps injectively to ``K``.  Otherwise the grading is a
    proper coarsening and the ring is not factorially graded (for instance
    ``T1^2+T2^2+T3^2`` with ``deg T1 = deg T2`` splits into linear factors).
    """
    K = data.group
    degrees = data.grading.degrees
    gens, orders = [], []
    for b, d in _saturation_vectors(tuple(relation_rows(data))):
        gens.append(K.sum(K.scale(c, w) for c, w in zip(b, degrees) if c))
        orders.append(d)
    if not gens:
        return True
    if any(any(g.free) for g in gens):
        return False
    Kt = K.torsion_part()
    image = span(Kt, [Kt.elem((), g.tors) for g in gens])
    image_order = Kt.torsion_order // quotient(Kt, image)[0].torsion_order
    return image_order == math.prod(orders)


@lru_cache(maxsize=4096)
def _saturation_vectors(rows: tuple[tuple[int, ...], ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Generators ``b`` of ``sat(R)/R`` with their orders ``d``, where
    ``d*b`` runs through a basis of the row lattice ``R``."""
    if not rows:
        return ()
    snf = smith_normal_form(rows)
    out = []
    for i, d in enumerate(snf.diag):
        if d > 1:
            row = [sum(snf.U[i][k] * rows[k][j] for k in range(len(rows))) for j in range(len(rows[0]))]
            out.append((tuple(x // d for x in row), d))
    return tuple(out)


def validate(data: RingData) -> ValidationReport:
    violations = []
    K = data.group
    degrees = data.grading.degrees
    if K.free_rank != 1:
        violations.append(f"picard_number: K = {K} must have free rank one")
        return ValidationReport(tuple(violations))
    if any(w.free[0] <= 0 for w in degrees):
        violations.append("positivity: every generator degree needs a positive free part")
    if data.r >= 2:
        gammas = {data.monomial_degree(i) for i in range(len(data.blocks))}
        if len({g.free for g in gammas}) > 1:
            violations.append("homogeneity: monomial degrees differ in the free part")
        elif len(gammas) > 1:
            violations.append("homogeneity: monomial degrees differ in the torsion part")
    for k in range(len(degrees)):
        if not generates(K, degrees[:k] + degrees[k + 1:]):
            violations.append(f"almost_free: degrees without generator {k + 1} do not generate K")
            break
    if not degrees:
        violations.append("almost_free: no generators")
    if data.r >= 2 and not any(v.startswith("homogeneity") for v in violations):
        if not relations_saturated(data):
            violations.append("saturation: relation lattice is not saturated in the kernel of the degree map")
    if data.r >= 2:
        for i, b in enumerate(data.blocks):
            if b.n * b.exponents[0] == 1:
                violations.append(f"non_redundancy: block {i} is a linear monomial")
    return ValidationReport(tuple(violations))


# ---------------------------------------------------------------------------
# degrees and the Fano test

def relation_degree(data: RingData) -> GroupElem:
    if data.r < 2:
        raise ValueError("a ring with r <= 1 has no relations")
    return data.monomial_degree(0)


def anticanonical_class(data: RingData) -> GroupElem:
    K = data.group
    total = K.sum(data.grading.degrees)
    if data.r >= 2:
        total = K.sub(total, K.scale(data.r - 1, relation_degree(data)))
    return total


def is_fano(data: RingData) -> bool:
    if data.r < 2:
        return True
    return (data.r - 1) * relation_degree(data).free[0] < sum(w.free[0] for w in data.grading.degrees)


def dimension(data: RingData) -> int:
    if data.r >= 2:
        return data.n + data.m - data.r
    return data.n + data.m - 1


def is_toric(data: RingData) -> bool:
    return data.r <= 1


def self_intersection_formula(data: RingData) -> Fraction:
    """Anticanonical self-intersection from the free parts of the degrees."""
    d = dimension(data)
    k0 = anticanonical_class(data).free[0]
    num = Fraction(k0) ** d
    if data.r >= 2:
        num *= relation_degree(data).free[0] ** (data.r - 1)
    den = math.prod(w.free[0] for w in data.grading.degrees) * data.group.torsion_order
    return num / den


# ---------------------------------------------------------------------------
# canonical form

def _block_key(exponents, weights):
    return tuple(sorted((l, w.free, w.tors) for l, w in zip(exponents, weights)))


def _sorted_form(data: RingData, weights, free_weights):
    blocks = []
    pos = 0
    for b in data.blocks:
        blocks.append(_block_key(b.exponents, weights[pos:pos + b.n]))
        pos += b.n
    blocks.sort(key=lambda blk: (-len(blk), blk))
    us = tuple(sorted((u.free, u.tors) for u in free_weights))
    return tuple(blocks), us


def canonical_form(data: RingData, limit: int = ORBIT_LIMIT) -> RingData:
    """Distinguished representative of the graded-isomorphism class.

    The orbit is generated by permuting blocks, variables inside a block and
    the free variables, and by the automorphisms
    ``(w0, wt) -> (w0, w0*tau + psi(wt))`` of ``K``.  Permutations are handled
    by sorting, so only the ``|K^t| * |Aut(K^t)|`` grading moves are
    enumerated.
    """
    K = data.group
    Kt = K.torsion_part()
    autos = torsion_automorphisms(Kt, limit=max(64, Kt.torsion_order))
    orbit = len(autos) * Kt.torsion_order
    if orbit > limit:
        raise LimitExceeded(f"orbit of size {orbit} exceeds the limit {limit}")
    best = None
    for tau in Kt.elements():
        for psi in autos:
            def move(w):
                t = psi.apply_residues(w.tors)
                return GroupElem(w.free, tuple((x + w.free[0] * y) % q for x, y, q in zip(t, tau.tors, K.torsion)))
            form = _sorted_form(data, [move(w) for w in data.grading.weights],
                                [move(u) for u in data.grading.free_weights])
            if best is None or form < best:
                best = form
    blocks, us = best
    weights = tuple(GroupElem(f, t) for blk in blocks for _, f, t in blk)
    return RingData(
        tuple(BlockData(tuple(l for l, _, _ in blk)) for blk in blocks),
        data.m,
        Grading(K, weights, tuple(GroupElem(f, t) for f, t in us)),
    )


def equivalent(a: RingData, b: RingData) -> bool:
    return a.group == b.group and canonical_form(a) == canonical_form(b)


def sort_key(data: RingData) -> tuple:
    """Total order used to list classification results."""
    return (
        data.r,
        data.m,
        data.group.torsion_order,
        data.group.torsion,
        _sorted_form(data, data.grading.weights, data.grading.free_weights),
    )
