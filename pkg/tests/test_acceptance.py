"""Acceptance checks, one per criterion.  Each check prints a single
``criterion N PASS|FAIL: ...`` line; run this file directly to get only
those lines."""

import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from coxfano.bounds import check_bounds, count_upper_bound, toric_count_bound
from coxfano.cli import ResultSet, check_fixture
from coxfano.coxring import canonical_form, equivalent, is_fano, validate
from coxfano.enumerate import ClassifyOptions, classify, count_types
from coxfano.fixtures import ALL_FIXTURES, SURFACES, SURFACES_BY_PICARD_INDEX, TORSION_VARIANTS
from coxfano.intlin import AbGroup, quotient, span
from coxfano.invariants import ell_divisibility_check, picard_index, picard_index_by_intersection
from coxfano.strata import brute_force_supports, minimal_supports

from test_intlin import all_groups_up_to, check_snf, closure
from test_intlin import test_quotients_against_cosets as coset_suite

EXPECTED_COUNTS = {2: 1, 3: 1, 4: 5, 5: 0, 6: 4}
EXPECTED_DEGREES = [1, 1, 2, 2, 2, 1, 1, "2/3", 2, 3, "1/3"]
EXPECTED_IOTA = [1, 1, 1, 1, 1, 2, 1, 3, 1, 1, 3]

_cache = {}


def surface_results():
    if "surfaces" not in _cache:
        start = time.time()
        _cache["surfaces"] = {mu: classify(ClassifyOptions(2, mu, torsion="nontrivial")) for mu in EXPECTED_COUNTS}
        _cache["surfaces_time"] = time.time() - start
    return _cache["surfaces"]


def threefold_results():
    if "threefolds" not in _cache:
        start = time.time()
        _cache["threefolds"] = classify(ClassifyOptions(3, 2, torsion="nontrivial"), jobs=4)
        _cache["threefolds_time"] = time.time() - start
    return _cache["threefolds"]


def report(number, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line, flush=True)
    return ok


def criterion_1():
    runs = surface_results()
    counts = {mu: len(r) for mu, r in runs.items()}
    problems = []
    if counts != EXPECTED_COUNTS:
        problems.append(f"counts {counts}")
    for k, f in enumerate(SURFACES):
        hits = [c for c in runs[f.picard_index] if equivalent(c.data, f.data)]
        if len(hits) != 1:
            problems.append(f"{f.name} matched {len(hits)} times")
            continue
        inv = hits[0].invariants
        if inv.degree != Fraction(EXPECTED_DEGREES[k]) or inv.gorenstein_index != EXPECTED_IOTA[k]:
            problems.append(f"{f.name}: d_X {inv.degree}, iota {inv.gorenstein_index}")
    # every output matches exactly one row
    for mu, res in runs.items():
        for c in res:
            if sum(equivalent(c.data, f.data) for f in SURFACES_BY_PICARD_INDEX.get(mu, [])) != 1:
                problems.append(f"unmatched class at mu={mu}: {c.data.relations()}")
    elapsed = _cache["surfaces_time"]
    if elapsed > 300:
        problems.append(f"took {elapsed:.0f}s")
    detail = f"counts {[counts[mu] for mu in sorted(counts)]} for mu=2..6, 11 rows matched, {elapsed:.1f}s"
    return report(1, not problems, "; ".join(problems) or detail)


def criterion_2():
    start = time.time()
    problems = {f.name: check_fixture(f) for f in ALL_FIXTURES}
    failed = [n for n, p in problems.items() if p]
    data = TORSION_VARIANTS[0].data
    lhs = sum(w.free[0] for w in data.grading.degrees)
    rhs = data.monomial_degree(0).free[0]
    if (lhs, rhs) != (11, 10) or not is_fano(data):
        failed.append(f"Fano test {lhs} > {rhs}")
    groups = [f.data.group for f in TORSION_VARIANTS[1:]]
    if groups != [AbGroup(1, (t,)) for t in (3, 9, 11, 13, 17)]:
        failed.append(f"class groups {groups}")
    elapsed = time.time() - start
    if elapsed > 10:
        failed.append(f"took {elapsed:.1f}s")
    detail = f"{len(ALL_FIXTURES)}/{len(ALL_FIXTURES)} fixtures verified, Fano test 11 > 10, {elapsed:.1f}s"
    return report(2, not failed, "; ".join(map(str, failed)) or detail)


def criterion_3():
    res = threefold_results()
    problems = []
    if not res:
        problems.append("empty list")
    for a, b in itertools.combinations([c.data for c in res], 2):
        if equivalent(a, b):
            problems.append("duplicate classes")
            break
    for c in res:
        d = c.data
        if not (validate(d).ok and is_fano(d) and ell_divisibility_check(d) and check_bounds(d, 3, 2)
                and picard_index(d) == 2):
            problems.append(f"bad entry {d.relations()}")
    lam = [c for c in res if c.data.r == 3 and c.moduli_count == 1]
    if not lam:
        problems.append("no entry with two relations and one modulus")
    elapsed = _cache["threefolds_time"]
    if elapsed > 1800:
        problems.append(f"took {elapsed:.0f}s")
    detail = f"{len(res)} classes, {len(lam)} with two relations and moduli_count 1, {elapsed:.1f}s with 4 jobs"
    return report(3, not problems, "; ".join(problems) or detail)


def encountered_data():
    datas = [f.data for f in ALL_FIXTURES]
    datas += [c.data for res in surface_results().values() for c in res]
    datas += [c.data for c in threefold_results()]
    return datas


def criterion_4():
    datas = [d for d in encountered_data() if d.n + d.m <= 12]
    support_mismatch = [d for d in datas if minimal_supports(d) != brute_force_supports(d)]
    index_mismatch = [(d, picard_index(d), picard_index_by_intersection(d)) for d in datas
                      if picard_index(d) != picard_index_by_intersection(d)]
    ok = not support_mismatch and not index_mismatch
    detail = f"minimal supports agree with brute force on {len(datas) - len(support_mismatch)}/{len(datas)} data"
    if index_mismatch:
        examples = ", ".join(f"{d.relations()[0]} over {d.group}: {a} vs {b}" for d, a, b in index_mismatch[:3])
        detail += (f"; Picard index formula differs from the intersection index on "
                   f"{len(index_mismatch)}/{len(datas)} data (e.g. {examples})")
    else:
        detail += f"; Picard index formula equals the intersection index on all {len(datas)} data"
    return report(4, ok, detail)


def criterion_5():
    problems = []
    for d, mu, res in [(2, mu, r) for mu, r in surface_results().items()] + [(3, 2, threefold_results())]:
        for c in res:
            if not check_bounds(c.data, d, mu) or not ell_divisibility_check(c.data):
                problems.append(f"d={d} mu={mu}: {c.data.relations()}")
    counts = []
    for mu in range(1, 7):
        c = count_types(2, mu, ClassifyOptions(2, mu, include_toric=True))
        counts.append((mu, c.non_toric, c.toric))
        if c.non_toric > count_upper_bound(2, mu) or c.toric > toric_count_bound(2, mu):
            problems.append(f"count bound at mu={mu}")
    detail = ("every classified datum within its case bounds and ell-divisible; "
              f"(mu, non-toric, toric) for d=2: {counts}, all below the bounds")
    return report(5, not problems, "; ".join(problems) or detail)


def criterion_6():
    start = time.time()
    rng = random.Random(61)
    for _ in range(1000):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        check_snf([[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)])
    coset_suite()
    groups = all_groups_up_to(48)
    # exhaustive over single generators: every cyclic subgroup of every group
    for G in groups:
        elems = G.elements()
        for g in elems:
            if quotient(G, span(G, [g]))[0].order * len(closure(G, [g])) != len(elems):
                return report(6, False, f"quotient order wrong for {g} in {G}")
    elapsed = time.time() - start
    ok = elapsed < 60
    return report(6, ok, f"1000 random SNFs checked, quotients of {len(groups)} groups of order <= 48 "
                         f"match coset enumeration, {elapsed:.1f}s")


def criterion_7():
    problems = []
    a = ResultSet(ClassifyOptions(2, 6).to_dict(), classify(ClassifyOptions(2, 6)))
    b = ResultSet(ClassifyOptions(2, 6).to_dict(), classify(ClassifyOptions(2, 6), jobs=3))
    if a.content() != b.content():
        problems.append("serial and parallel runs differ")
    cmd = [sys.executable, "-m", "coxfano", "classify", "--dim", "2", "--picard-index", "4"]
    outs = []
    for _ in range(2):
        d = json.loads(subprocess.run(cmd, capture_output=True, text=True, check=True).stdout)
        d.pop("timing")
        outs.append(json.dumps(d, sort_keys=True))
    if outs[0] != outs[1]:
        problems.append("repeated CLI runs differ")
    datas = encountered_data() + [c.data for c in a.results]
    not_idempotent = [d for d in datas if canonical_form(canonical_form(d)) != canonical_form(d)]
    if not_idempotent:
        problems.append(f"canonical form not idempotent on {len(not_idempotent)} data")
    detail = f"repeated runs byte-identical modulo timing, canonical form idempotent on {len(datas)} data"
    return report(7, not problems, "; ".join(problems) or detail)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 8)])
def test_criterion(check, capsys):
    with capsys.disabled():
        print()
        ok = check()
    assert ok


if __name__ == "__main__":
    results = [check() for check in CRITERIA]
    sys.exit(0 if all(results) else 1)
