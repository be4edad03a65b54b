"""Picard index, anticanonical degree, Gorenstein index and local class
groups of the variety defined by a graded ring."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .coxring import RingData, anticanonical_class, dimension, self_intersection_formula
from .intlin import AbGroup, GroupElem, intersection_index, order_in_quotient, quotient, span
from .strata import Support, supports, weight_set


@dataclass(frozen=True)
class VarietyInvariants:
    picard_index: int
    anticanonical: GroupElem
    degree: Fraction
    gorenstein_index: int
    torsion_order: int
    local_group_orders: tuple[int, ...]

    def to_dict(self) -> dict:
        from .coxring import elem_to_json

        return {
            "picard_index": self.picard_index,
            "anticanonical": elem_to_json(self.anticanonical),
            "degree": fraction_to_str(self.degree),
            "gorenstein_index": self.gorenstein_index,
            "torsion_order": self.torsion_order,
            "local_group_orders": list(self.local_group_orders),
        }


def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


def local_class_group(data: RingData, s: Support) -> AbGroup:
    K = data.group
    return quotient(K, span(K, weight_set(data, s)))[0]


def _support_gcds(data: RingData) -> list[int]:
    return [math.gcd(*(w.free[0] for w in weight_set(data, s))) for s in supports(data)]


def picard_index(data: RingData) -> int:
    """lcm over the minimal supports of the gcd of the free weight parts,
    times the order of the torsion part of ``K``."""
    return math.lcm(*_support_gcds(data)) * data.group.torsion_order


def picard_index_by_intersection(data: RingData) -> int:
    """``[K : Pic]`` with ``Pic`` the intersection of the subgroups generated
    by the weight sets of all minimal supports."""
    K = data.group
    return intersection_index(K, [span(K, weight_set(data, s)) for s in supports(data)])


def self_intersection(data: RingData, d: int | None = None) -> Fraction:
    if d is not None and d != dimension(data):
        raise ValueError(f"d = {d} differs from the dimension {dimension(data)}")
    return self_intersection_formula(data)


def gorenstein_index(data: RingData) -> int:
    K = data.group
    canonical = K.neg(anticanonical_class(data))
    orders = []
    for s in supports(data):
        k = order_in_quotient(K, span(K, weight_set(data, s)), canonical)
        if k is None:
            raise ArithmeticError(f"K_X has infinite order modulo the weights of {s}")
        orders.append(k)
    return math.lcm(1, *orders)


def ell_divisibility_check(data: RingData) -> bool:
    """gcd(ell_i, ell_j) divides |K^t| for every pair of blocks."""
    t = data.group.torsion_order
    ells = [b.ell for b in data.blocks]
    return all(t % math.gcd(a, b) == 0 for a, b in itertools.combinations(ells, 2))


def compute_all(data: RingData) -> VarietyInvariants:
    return VarietyInvariants(
        picard_index=picard_index(data),
        anticanonical=anticanonical_class(data),
        degree=self_intersection(data),
        gorenstein_index=gorenstein_index(data),
        torsion_order=data.group.torsion_order,
        local_group_orders=tuple(local_class_group(data, s).order for s in supports(data)),
    )
