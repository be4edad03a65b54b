"""Classification of Fano rings with Picard number one for given dimension
``d`` and Picard index ``mu``.

The search runs through case, number of relations, block sizes and the free
part ``gamma0`` of the relation degree.  Each such partition is independent,
so partitions may be handed to worker processes; results are merged,
deduplicated by canonical form and sorted afterwards.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

from .bounds import SearchBounds, free_data_within, search_bounds
from .coxring import (
    BlockData,
    Grading,
    RingData,
    canonical_form,
    elem_from_json,
    is_fano,
    relations_saturated,
    sort_key,
    validate,
)
from .intlin import AbGroup, GroupElem, abelian_groups_of_order, generates
from .invariants import (
    VarietyInvariants,
    compute_all,
    ell_divisibility_check,
    fraction_from_str,
)
from .strata import supports_for_shape

TORSION_FILTERS = ("any", "nontrivial", "trivial")
DEFAULT_MAX_VISITS = 10**8


class ResourceLimitExceeded(RuntimeError):
    """The search needed more candidate visits than allowed.  This says
    nothing about the (non-)existence of further classes."""


@dataclass(frozen=True)
class ClassifyOptions:
    d: int
    mu: int
    torsion: str = "any"
    include_toric: bool = False
    require_fano: bool = True
    separated_only: bool = False
    max_visits: int = DEFAULT_MAX_VISITS
    inclusive_xi: bool = False

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d!r}")
        if not isinstance(self.mu, int) or self.mu < 1:
            raise ValueError(f"Picard index must be a positive integer, got {self.mu!r}")
        if self.torsion not in TORSION_FILTERS:
            raise ValueError(f"torsion filter must be one of {TORSION_FILTERS}")
        if self.max_visits < 1:
            raise ValueError("max_visits must be positive")

    def torsion_orders(self) -> list[int]:
        """Admissible orders of ``K^t``."""
        orders = [t for t in range(1, self.mu + 1) if self.mu % t == 0]
        if self.torsion == "nontrivial":
            return [t for t in orders if t > 1]
        if self.torsion == "trivial":
            return [1]
        return orders

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ClassifiedVariety:
    data: RingData
    invariants: VarietyInvariants
    case_tag: str

    @property
    def moduli_count(self) -> int:
        return self.data.moduli_count

    def to_dict(self) -> dict:
        return {
            "case": self.case_tag,
            "moduli_count": self.moduli_count,
            "relations": self.data.relations(),
            "data": self.data.to_dict(),
            "invariants": self.invariants.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifiedVariety":
        data = RingData.from_dict(d["data"])
        inv = d["invariants"]
        invariants = VarietyInvariants(
            picard_index=inv["picard_index"],
            anticanonical=elem_from_json(data.group, inv["anticanonical"]),
            degree=fraction_from_str(inv["degree"]),
            gorenstein_index=inv["gorenstein_index"],
            torsion_order=inv["torsion_order"],
            local_group_orders=tuple(inv["local_group_orders"]),
        )
        return cls(data, invariants, d["case"])


class FreeDatum(NamedTuple):
    """Free parts only: per block a pair ``(exponents, w0)``, and ``u0``."""

    blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    u0: tuple[int, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(ls) for ls, _ in self.blocks)

    @property
    def degrees0(self) -> tuple[int, ...]:
        return tuple(w for _, ws in self.blocks for w in ws) + self.u0


class Partition(NamedTuple):
    case: str
    r: int
    sizes: tuple[int, ...]
    m: int
    gamma: int | None


class _Visits:
    def __init__(self, limit: int):
        self.limit = limit
        self.count = 0

    def tick(self, k: int = 1):
        self.count += k
        if self.count > self.limit:
            raise ResourceLimitExceeded(f"more than {self.limit} candidate visits")


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def enumerate_torsion_groups(mu: int) -> list[AbGroup]:
    """Finite abelian groups whose order divides ``mu``, by order."""
    if mu < 1:
        raise ValueError("mu must be positive")
    return [G for t in _divisors(mu) for G in abelian_groups_of_order(t)]


# ---------------------------------------------------------------------------
# free parts

def block_solutions(gamma: int, n: int, bounds: SearchBounds) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Exponents and free weights of one block of size ``n`` with
    ``sum l_j w_j = gamma``; pairs ``(l_j, w_j)`` ascending."""
    return list(_block_solutions(gamma, n, bounds))


@lru_cache(maxsize=4096)
def _block_solutions(gamma, n, bounds):
    mu = bounds.mu
    out = []
    if n == 1:
        for l in _divisors(gamma):
            w = gamma // l
            if l < 2:
                continue
            if bounds.single_exponent_max is not None and l > bounds.single_exponent_max:
                continue
            if bounds.single_weight_max is not None and w > bounds.single_weight_max:
                continue
            if bounds.exponent_divides_mu and mu % l:
                continue
            out.append(((l,), (w,)))
        return tuple(out)
    # w_j divides mu: {T_j} is a minimal support
    ws = [w for w in _divisors(mu) if w <= bounds.multi_weight_max]
    lmax = bounds.multi_exponent_max

    def rec(rest, k, lo):
        if k == 0:
            if rest == 0:
                yield ()
            return
        for l, w in itertools.product(range(1, rest + 1), ws):
            if (l, w) < lo or l * w > rest or (lmax is not None and l > lmax):
                continue
            for tail in rec(rest - l * w, k - 1, (l, w)):
                yield ((l, w),) + tail

    for pairs in rec(gamma, n, (0, 0)):
        out.append((tuple(l for l, _ in pairs), tuple(w for _, w in pairs)))
    return tuple(out)


def free_solutions(gamma: int, sizes: Sequence[int], bounds: SearchBounds,
                   fano_slack: int | None = None) -> Iterator[tuple]:
    """Block data with relation degree ``gamma`` for decreasing ``sizes``.

    Blocks of equal size come in nondecreasing order.  With ``fano_slack``
    the block weights must be able to exceed ``(r-1)*gamma - fano_slack``,
    where ``fano_slack`` bounds what the free variables can contribute.
    """
    sizes = tuple(sizes)
    cands = [block_solutions(gamma, n, bounds) for n in sizes]
    if any(not c for c in cands):
        return
    best = [max(sum(ws) for _, ws in c) for c in cands]
    tail_best = list(itertools.accumulate(reversed(best)))[::-1] + [0]
    need = None if fano_slack is None else (len(sizes) - 2) * gamma - fano_slack

    def rec(i, start, acc, chosen):
        if i == len(sizes):
            yield tuple(chosen)
            return
        lo = start if i and sizes[i] == sizes[i - 1] else 0
        for k in range(lo, len(cands[i])):
            blk = cands[i][k]
            s = acc + sum(blk[1])
            if need is not None and s + tail_best[i + 1] <= need:
                continue
            chosen.append(blk)
            yield from rec(i + 1, k, s, chosen)
            chosen.pop()

    yield from rec(0, 0, 0, [])


@lru_cache(maxsize=256)
def _flat_supports(sizes: tuple[int, ...], m: int) -> tuple[tuple[int, ...], ...]:
    offsets = list(itertools.accumulate((0,) + sizes))
    n = offsets[-1]
    return tuple(
        tuple(offsets[i] + j for i, j in s.t_coords) + tuple(n + k for k in s.s_coords)
        for s in supports_for_shape(sizes, m)
    )


def support_gcd_lcm(datum: FreeDatum) -> int:
    """lcm over the minimal supports of the gcd of the free weights."""
    degs = datum.degrees0
    if len(datum.blocks) < 3:
        return math.lcm(*degs)
    return math.lcm(*(math.gcd(*(degs[c] for c in s)) for s in _flat_supports(datum.sizes, len(datum.u0))))


def _free_parts_generate(degs: Sequence[int]) -> bool:
    return all(math.gcd(*(degs[:k] + degs[k + 1:])) == 1 for k in range(len(degs)))


# ---------------------------------------------------------------------------
# torsion parts

def torsion_gradings(datum: FreeDatum, Kt: AbGroup) -> list[Grading]:
    """Gradings by ``Z + Kt`` with the given free parts that are homogeneous
    and almost free."""
    if Kt.free_rank:
        raise ValueError("Kt must be finite")
    K = AbGroup(1, Kt.torsion)
    q = Kt.torsion
    elems = [g.tors for g in Kt.elements()]

    def combo(coeffs, residues):
        return tuple(sum(c * x[a] for c, x in zip(coeffs, residues)) % qa for a, qa in enumerate(q))

    per_block = []
    for ls, _ in datum.blocks:
        table: dict[tuple, list] = {}
        for res in itertools.product(elems, repeat=len(ls)):
            table.setdefault(combo(ls, res), []).append(res)
        per_block.append(table)
    gammas = set(per_block[0]) if per_block else {()}
    for table in per_block[1:]:
        gammas &= set(table)

    w0 = [w for _, ws in datum.blocks for w in ws]
    out = []
    for g in sorted(gammas):
        for parts in itertools.product(*(table[g] for table in per_block)):
            wt = [x for part in parts for x in part]
            for ut in itertools.product(elems, repeat=len(datum.u0)):
                weights = tuple(GroupElem((a,), b) for a, b in zip(w0, wt))
                free = tuple(GroupElem((a,), b) for a, b in zip(datum.u0, ut))
                degs = weights + free
                if all(generates(K, degs[:k] + degs[k + 1:]) for k in range(len(degs))):
                    out.append(Grading(K, weights, free))
    return out


# ---------------------------------------------------------------------------
# partitions

def _shapes(d: int, r: int) -> Iterator[tuple[int, ...]]:
    """Decreasing sequences of ``r + 1`` positive integers with sum ``<= d + r``."""
    def rec(k, top, budget):
        if k == 0:
            yield ()
            return
        for n in range(min(top, budget - (k - 1)), 0, -1):
            for tail in rec(k - 1, n, budget - n):
                yield (n,) + tail
    yield from rec(r + 1, d + r, d + r)


def case_tags(opts: ClassifyOptions) -> list[str]:
    tags = ["II"] if opts.separated_only else ["II", "III", "IV", "V"]
    return (["I"] if opts.include_toric else []) + tags


def partitions(opts: ClassifyOptions) -> list[Partition]:
    """All ``(case, r, sizes, gamma0)`` cells of the search, in search order."""
    out = []
    d, mu = opts.d, opts.mu
    for case in case_tags(opts):
        if case == "I":
            out.append(Partition("I", 0, (), d + 1, None))
            continue
        top = search_bounds(d, mu, case, inclusive_xi=opts.inclusive_xi)
        for r in range(2, top.max_r + 1):
            b = search_bounds(d, mu, case, r=r, inclusive_xi=opts.inclusive_xi)
            for sizes in _shapes(d, r):
                m = d + r - sum(sizes)
                if not b.shape_ok(sizes, m):
                    continue
                if case == "II":
                    # gamma/lcm_{j != i} l_j divides mu and each l_j divides mu
                    gammas = [g for g in _divisors(mu * mu) if 2 <= g <= b.gamma_max]
                else:
                    gammas = range(2, b.gamma_max + 1)
                out += [Partition(case, r, sizes, m, g) for g in gammas]
    return out


def _ring(datum: FreeDatum, grading: Grading) -> RingData:
    return RingData(tuple(BlockData(ls) for ls, _ in datum.blocks), len(datum.u0), grading)


def _accept(data: RingData, opts: ClassifyOptions) -> bool:
    # positivity, homogeneity, almost freeness and non-redundancy hold by
    # construction; saturation is the remaining condition of validate()
    if opts.require_fano and not is_fano(data):
        return False
    return ell_divisibility_check(data) and relations_saturated(data)


def _toric_partition(opts: ClassifyOptions, visits: _Visits) -> list[RingData]:
    found = set()
    orders = set(opts.torsion_orders())
    for u0 in itertools.combinations_with_replacement(_divisors(opts.mu), opts.d + 1):
        visits.tick()
        if not _free_parts_generate(u0) or opts.mu % math.lcm(*u0):
            continue
        t = opts.mu // math.lcm(*u0)
        if t not in orders:
            continue
        datum = FreeDatum((), u0)
        for Kt in abelian_groups_of_order(t):
            for grading in torsion_gradings(datum, Kt):
                visits.tick()
                data = _ring(datum, grading)
                if validate(data).ok:
                    found.add(canonical_form(data))
    return sorted(found, key=sort_key)


def solve_partition(opts: ClassifyOptions, part: Partition) -> tuple[list[RingData], int]:
    """Canonical forms of all accepted data in one cell, and the number of
    candidates visited."""
    visits = _Visits(opts.max_visits)
    if part.case == "I":
        return _toric_partition(opts, visits), visits.count
    mu, gamma = opts.mu, part.gamma
    b = search_bounds(opts.d, mu, part.case, r=part.r, inclusive_xi=opts.inclusive_xi)
    orders = set(opts.torsion_orders())
    slack = part.m * b.u_max if opts.require_fano else None
    found = set()
    for blocks in free_solutions(gamma, part.sizes, b, fano_slack=slack):
        block_sum = sum(sum(ws) for _, ws in blocks)
        for u0 in itertools.combinations_with_replacement([u for u in _divisors(mu) if u <= b.u_max], part.m):
            visits.tick()
            if opts.require_fano and (part.r - 1) * gamma >= block_sum + sum(u0):
                continue
            datum = FreeDatum(blocks, u0)
            if not _free_parts_generate(datum.degrees0):
                continue
            g = support_gcd_lcm(datum)
            if mu % g or mu // g not in orders:
                continue
            if not free_data_within(b, gamma, blocks, u0):
                continue
            for Kt in abelian_groups_of_order(mu // g):
                for grading in torsion_gradings(datum, Kt):
                    visits.tick()
                    data = _ring(datum, grading)
                    if _accept(data, opts):
                        found.add(canonical_form(data))
    return sorted(found, key=sort_key), visits.count


def _solve(args):
    return solve_partition(*args)


def classify(opts: ClassifyOptions, jobs: int = 1) -> list[ClassifiedVariety]:
    """Every class of data with the requested dimension and Picard index, in
    canonical form, sorted, with invariants attached.

    Raises ``ResourceLimitExceeded`` when more than ``opts.max_visits``
    candidates are visited in total.
    """
    parts = partitions(opts)
    if jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve, [(opts, p) for p in parts], chunksize=8))
    else:
        results = []
        total = 0
        for p in parts:
            res = solve_partition(opts, p)
            total += res[1]
            if total > opts.max_visits:
                raise ResourceLimitExceeded(f"more than {opts.max_visits} candidate visits")
            results.append(res)
    if sum(c for _, c in results) > opts.max_visits:
        raise ResourceLimitExceeded(f"more than {opts.max_visits} candidate visits")
    found = {}
    for part, (datas, _) in zip(parts, results):
        for data in datas:
            found.setdefault(data, part.case)
    out = []
    for data in sorted(found, key=sort_key):
        inv = compute_all(data)
        if inv.picard_index != opts.mu:
            raise ArithmeticError(f"Picard index {inv.picard_index} != {opts.mu} for {data}")
        out.append(ClassifiedVariety(data, inv, found[data]))
    return out


def classify_separated(d: int, mu: int, jobs: int = 1, **kw) -> list[ClassifiedVariety]:
    """Data with all blocks of size one, without the Fano condition."""
    return classify(ClassifyOptions(d, mu, separated_only=True, require_fano=False, **kw), jobs=jobs)


class TypeCount(NamedTuple):
    non_toric: int
    toric: int | None = None


def count_types(d: int, mu: int, opts: ClassifyOptions | None = None, jobs: int = 1) -> TypeCount:
    """Number of classes; toric classes are counted separately and only up
    to weights and grading moves, so that count is an upper estimate."""
    opts = opts or ClassifyOptions(d, mu)
    if (opts.d, opts.mu) != (d, mu):
        raise ValueError("options disagree with (d, mu)")
    res = classify(opts, jobs=jobs)
    toric = [c for c in res if c.case_tag == "I"]
    return TypeCount(len(res) - len(toric), len(toric) if opts.include_toric else None)
