"""Effective bounds on the discrete data of Fano rings with given dimension
``d`` and Picard index ``mu``.

The non-toric data split into cases by the sorted block sizes
``n_0 >= n_1 >= ... >= n_r``:

    I    r <= 1 (toric)
    II   n_0 = 1
    III  n_0 > n_1 = 1
    IV   n_1 > n_2 = 1
    V    n_2 > 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

CASES = ("I", "II", "III", "IV", "V")


@lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    """counts[x] = number of primes p <= x, for 0 <= x <= limit."""
    is_prime = bytearray([1]) * (limit + 1)
    is_prime[:2] = b"\x00\x00"[: min(2, limit + 1)]
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = bytearray(len(range(p * p, limit + 1, p)))
    counts, c = [], 0
    for x in range(limit + 1):
        c += is_prime[x]
        counts.append(c)
    return tuple(counts)


def prime_count_below(x: int, inclusive: bool = False) -> int:
    """Number of primes ``p < x`` (``p <= x`` with ``inclusive``)."""
    if x < 1:
        raise ValueError("x must be positive")
    top = x if inclusive else x - 1
    if top < 2:
        return 0
    return _sieve(max(top, 2))[top]


@dataclass(frozen=True)
class SearchBounds:
    """Bounds of one case; every maximum is inclusive.

    ``lead_weight_max`` bounds the weights of the first single-variable blocks
    after sorting those by decreasing exponent (``w_11``, ``w_21`` in case
    III, ``w_21`` in case IV).
    """

    case_tag: str
    d: int
    mu: int
    r: int | None
    max_r: int
    gamma_max: int | None
    multi_weight_max: int
    single_weight_max: int | None
    lead_weight_max: tuple[int, ...]
    multi_exponent_max: int | None
    single_exponent_max: int | None
    exponent_divides_mu: bool
    u_max: int
    torsion_max: int
    max_s: int | None = None

    def shape_ok(self, sizes: tuple[int, ...], m: int) -> bool:
        """Structural constraints of the case on the sorted block sizes."""
        d = self.d
        if self.case_tag == "I":
            return len(sizes) <= 2 and sum(sizes) + m <= d + 1
        r = len(sizes) - 1
        if r < 2 or r > self.max_r or list(sizes) != sorted(sizes, reverse=True):
            return False
        s = max((i for i, n in enumerate(sizes) if n > 1), default=-1)
        if self.case_tag == "II":
            return s == -1 and m == d - 1
        if self.case_tag == "III":
            return s == 0 and sizes[0] + m == d
        if self.case_tag == "IV":
            return s == 1 and sizes[0] + sizes[1] + m == d + 1
        return s >= 2 and s <= d and sum(sizes[: s + 1]) + m == d + s


def case_of(sizes: tuple[int, ...]) -> str:
    """Case tag of data with the given block sizes (sorted decreasingly)."""
    sizes = tuple(sorted(sizes, reverse=True))
    if len(sizes) <= 2:
        return "I"
    if sizes[0] == 1:
        return "II"
    if sizes[1] == 1:
        return "III"
    if sizes[2] == 1:
        return "IV"
    return "V"


def search_bounds(d: int, mu: int, case_tag: str, r: int | None = None,
                  inclusive_xi: bool = False) -> SearchBounds:
    """The bounds of one case.  Quantities depending on the number of
    relations use ``r`` (default: the largest admissible ``r``)."""
    if d < 1 or mu < 1:
        raise ValueError("d and mu must be positive")
    if case_tag not in CASES:
        raise ValueError(f"unknown case {case_tag!r}")
    xi = lambda x: prime_count_below(x, inclusive_xi)  # noqa: E731
    common = dict(case_tag=case_tag, d=d, mu=mu, u_max=mu, torsion_max=mu)
    if case_tag == "I":
        return SearchBounds(r=r, max_r=1, gamma_max=None, multi_weight_max=mu,
                            single_weight_max=mu, lead_weight_max=(), multi_exponent_max=None,
                            single_exponent_max=None, exponent_divides_mu=False, **common)
    if case_tag == "II":
        max_r = mu + xi(mu) - 1
        rr = max_r if r is None else r
        return SearchBounds(r=r, max_r=max_r, gamma_max=mu ** (rr + 1), multi_weight_max=mu,
                            single_weight_max=mu ** rr, lead_weight_max=(), multi_exponent_max=None,
                            single_exponent_max=mu, exponent_divides_mu=True, **common)
    if case_tag == "III":
        c = 6 * d * mu
        return SearchBounds(r=r, max_r=mu + xi(c) - 1, gamma_max=c - 1, multi_weight_max=mu,
                            single_weight_max=c - 1, lead_weight_max=(2 * d * mu - 1, 3 * d * mu - 1),
                            multi_exponent_max=c, single_exponent_max=c - 1,
                            exponent_divides_mu=False, **common)
    if case_tag == "IV":
        c = 2 * (d + 1) * mu
        return SearchBounds(r=r, max_r=mu + xi(c) - 1, gamma_max=c - 1, multi_weight_max=mu,
                            single_weight_max=c - 1, lead_weight_max=((d + 1) * mu - 1,),
                            multi_exponent_max=c - 1, single_exponent_max=c - 1,
                            exponent_divides_mu=False, **common)
    c = (d + 2) * mu
    return SearchBounds(r=r, max_r=mu + xi(c) + d - 1, gamma_max=c - 1, multi_weight_max=mu,
                        single_weight_max=c - 1, lead_weight_max=(), multi_exponent_max=c - 1,
                        single_exponent_max=c - 1, exponent_divides_mu=False, max_s=d, **common)


def free_data_within(bounds: SearchBounds, gamma: int | None, blocks, u0) -> bool:
    """Check free data against ``bounds``.

    ``blocks`` is a sequence of ``(exponents, free weights)`` pairs sorted by
    decreasing size, ``u0`` the free parts of the free-variable weights.
    """
    mu = bounds.mu
    if any(u > bounds.u_max for u in u0):
        return False
    if bounds.case_tag == "I":
        return all(w <= bounds.multi_weight_max for _, ws in blocks for w in ws)
    if gamma > bounds.gamma_max:
        return False
    singles = []
    for ls, ws in blocks:
        if len(ls) > 1:
            if any(w > bounds.multi_weight_max for w in ws):
                return False
            if bounds.multi_exponent_max is not None and any(l > bounds.multi_exponent_max for l in ls):
                return False
        else:
            singles.append((ls[0], ws[0]))
    singles.sort(key=lambda lw: -lw[0])
    for k, (l, w) in enumerate(singles):
        if bounds.single_weight_max is not None and w > bounds.single_weight_max:
            return False
        if bounds.single_exponent_max is not None and l > bounds.single_exponent_max:
            return False
        if bounds.exponent_divides_mu and mu % l:
            return False
    # the leading single blocks sit at positions 1, 2 (case III) or 2 (case IV)
    for (l, w), wmax in zip(singles, bounds.lead_weight_max):
        if w > wmax:
            return False
    return True


def check_bounds(data, d: int, mu: int, inclusive_xi: bool = False) -> bool:
    """Whether the data satisfy every bound of their case."""
    blocks = sorted(zip((b.exponents for b in data.blocks),
                        (tuple(w.free[0] for w in ws) for ws in data.block_weights())),
                    key=lambda lw: -len(lw[0]))
    sizes = tuple(len(ls) for ls, _ in blocks)
    case = case_of(sizes) if data.r >= 2 else "I"
    b = search_bounds(d, mu, case, r=data.r if data.r >= 2 else None, inclusive_xi=inclusive_xi)
    if data.group.torsion_order > b.torsion_max:
        return False
    u0 = [u.free[0] for u in data.grading.free_weights]
    if case == "I":
        return sum(sizes) + data.m <= d + 1 and free_data_within(b, None, blocks, u0)
    if not b.shape_ok(sizes, data.m):
        return False
    gamma = sum(l * w for l, w in zip(*blocks[0]))
    return free_data_within(b, gamma, blocks, u0)


class Bound(NamedTuple):
    value: int
    strict: bool

    def admits(self, x: int) -> bool:
        return x < self.value if self.strict else x <= self.value


def lemma_one_relation_bounds(shape: str, d: int, mu: int) -> dict[str, Bound]:
    """Bounds for a single trinomial relation.

    ``shape`` is ``"i-strict"`` (``n_0 > 1 = n_1 = n_2`` with
    ``l_11 > l_21 >= 2``), ``"i-equal"`` (same with ``l_11 = l_21``) or
    ``"ii"`` (``n_1 > 1 = n_2``).
    """
    if shape == "i-strict":
        c = d * mu
        return {"w11": Bound(2 * c, True), "w21": Bound(3 * c, True), "degree": Bound(6 * c, True)}
    if shape == "i-equal":
        return {k: Bound(mu, False) for k in ("l11", "w11", "l21", "w21", "degree")}
    if shape == "ii":
        c = (d + 1) * mu
        return {"w21": Bound(c, True), "degree": Bound(2 * c, True)}
    raise ValueError(f"unknown shape {shape!r}")


def count_upper_bound(d: int, mu: int) -> int:
    """Upper bound for the number of non-toric deformation types."""
    x = prime_count_below(mu)
    y = prime_count_below(6 * d * mu)
    return mu ** (mu * mu + 3 * mu + x * x + y + 5 * d) * (6 * d * mu) ** (2 * mu + 2 * y + 3 * d - 2)


def toric_count_bound(d: int, mu: int) -> int:
    return mu ** (d * d)
