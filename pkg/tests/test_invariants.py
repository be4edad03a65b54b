from fractions import Fraction

import pytest

from coxfano.coxring import RingData, relations_saturated
from coxfano.fixtures import SURFACES, TORSION_VARIANTS
from coxfano.intlin import AbGroup
from coxfano.invariants import (
    compute_all,
    ell_divisibility_check,
    fraction_from_str,
    fraction_to_str,
    gorenstein_index,
    local_class_group,
    picard_index,
    picard_index_by_intersection,
    self_intersection,
)
from coxfano.strata import supports

# (mu, d_X, iota) of the eleven reference surfaces
ROWS = [
    (2, 1, 1), (3, 1, 1), (4, 2, 1), (4, 2, 1), (4, 2, 1), (4, 1, 2),
    (4, 1, 1), (6, Fraction(2, 3), 3), (6, 2, 1), (6, 3, 1), (6, Fraction(1, 3), 3),
]


@pytest.mark.parametrize("f,row", list(zip(SURFACES, ROWS)), ids=lambda x: getattr(x, "name", ""))
def test_reference_rows(f, row):
    mu, degree, iota = row
    inv = compute_all(f.data)
    assert inv.picard_index == mu
    assert inv.degree == degree
    assert inv.gorenstein_index == iota
    assert inv.torsion_order == f.data.group.torsion_order


def test_variant_picard_indices():
    # gcds over the supports {T01}, {T02}, {T11, T21}: 1, 3, 1
    assert [picard_index(f.data) for f in TORSION_VARIANTS] == [3, 9, 27, 33, 39, 51]
    assert [f.data.group for f in TORSION_VARIANTS] == [AbGroup(1, t) for t in ((), (3,), (9,), (11,), (13,), (17,))]


def fake_wps(*u):
    return RingData.build([], [], [(w,) for w in u], [])


def test_weighted_projective_planes():
    # (sum u)^2 / prod u
    assert self_intersection(fake_wps(1, 1, 1)) == 9
    assert self_intersection(fake_wps(1, 1, 2)) == 8
    assert self_intersection(fake_wps(1, 2, 3)) == 6
    assert gorenstein_index(fake_wps(1, 1, 2)) == 1
    assert gorenstein_index(fake_wps(1, 2, 3)) == 1
    # K = O(-5) on P(1,1,3): order of 5 modulo 3
    assert gorenstein_index(fake_wps(1, 1, 3)) == 3
    assert picard_index(fake_wps(1, 2, 3)) == 6 == picard_index_by_intersection(fake_wps(1, 2, 3))


def test_fake_plane_with_torsion():
    data = RingData.build([], [], [(1, 0), (1, 1), (1, 2)], [3])
    inv = compute_all(data)
    assert inv.picard_index == 3
    assert inv.degree == 3
    assert inv.gorenstein_index == 1


def test_dimension_argument():
    data = SURFACES[0].data
    assert self_intersection(data, 2) == 1
    with pytest.raises(ValueError):
        self_intersection(data, 3)


def test_local_class_groups():
    data = SURFACES[7].data  # Z + Z/3, one free variable
    groups = [local_class_group(data, s) for s in supports(data)]
    assert [g.order for g in groups] == list(compute_all(data).local_group_orders)
    assert all(g.free_rank == 0 for g in groups)
    # {S1}: K / <(1, 0)> = Z/3
    s1 = next(i for i, s in enumerate(supports(data)) if s.s_coords == (0,))
    assert groups[s1] == AbGroup(0, (3,))


def test_ell_divisibility():
    assert all(ell_divisibility_check(f.data) for f in SURFACES + TORSION_VARIANTS)
    quadric = RingData.build([[2], [2], [2]], [(1,), (1,), (1,)], [(1,)], [])
    assert not ell_divisibility_check(quadric)
    assert not relations_saturated(quadric)


def test_fraction_strings():
    assert fraction_to_str(Fraction(2, 3)) == "2/3"
    assert fraction_to_str(Fraction(4, 2)) == "2/1"
    assert fraction_to_str(Fraction(-1, 3)) == "-1/3"
    assert fraction_from_str("6/9") == Fraction(2, 3)


def test_to_dict():
    d = compute_all(SURFACES[10].data).to_dict()
    assert d["degree"] == "1/3" and d["gorenstein_index"] == 3 and d["picard_index"] == 6
