import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mori_class.census import blown_up_plane
from mori_class.classifier import (
    EXIT_CODES,
    Outcome,
    canonical_match,
    canonical_records,
    compare,
    smooth_isomorphism,
)
from mori_class.cubic import Equivalence, equivalent_bounded, triple_transport_check
from mori_class.lattice import BilinearLattice, IsometryMap, identity
from mori_class.models import (
    DelPezzoFibration,
    FanoRankOne,
    SingularConicBundle,
    SmoothConicBundle,
    SurfaceData,
    invariants,
    triple,
)
from mori_class.verify import random_models

PLANE = SurfaceData(BilinearLattice(((1,),)), (3,))
QUADRIC = SurfaceData(BilinearLattice.hyperbolic(), (2, 2))

D = Outcome.DIFFEOMORPHIC
N = Outcome.NOT_DIFFEOMORPHIC
U = Outcome.UNDETERMINED


def test_exit_codes():
    assert EXIT_CODES == {D: 0, N: 1, U: 2}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_compare_is_reflexive_and_symmetric(seed):
    rng = random.Random(seed)
    a, b = (invariants(m) for m in random_models(rng, 2))
    assert compare(a, a).outcome in (D, U)
    assert compare(a, b).outcome is compare(b, a).outcome


def test_fano_compare():
    a = invariants(FanoRankOne(10, -10))
    assert compare(a, invariants(FanoRankOne(10, -10, index=1))).outcome is D
    v = compare(a, invariants(FanoRankOne(12, -10)))
    assert v.outcome is N and v.branch == "degree"
    assert compare(a, invariants(DelPezzoFibration(K=9, twist=0))).branch == "cross"


def test_curve_cases():
    a = invariants(DelPezzoFibration(K=4, relK3=10, eX=-4))
    assert compare(a, invariants(DelPezzoFibration(K=4, relK3=10, eX=-4))).outcome is D
    assert compare(a, invariants(DelPezzoFibration(K=4, relK3=12, eX=-4))).outcome is N
    assert compare(a, invariants(DelPezzoFibration(K=3, relK3=10, eX=-4))).outcome is N
    v = compare(invariants(DelPezzoFibration(K=6, d=2, relK3=-10, eX=0)),
                invariants(DelPezzoFibration(K=6, d=2, relK3=-26, eX=0)))
    assert v.outcome is D and v.branch == "K-case"


@pytest.mark.parametrize("d, rel", [(2, -10), (3, -4), (6, -40), (2, 8)])
def test_paired_relk3_has_equivalent_triples(d, rel):
    # the complementary value is -12 (d - 1) K / d - rel
    other = -12 * (d - 1) * 6 // d - rel
    m1 = DelPezzoFibration(K=6, d=d, relK3=rel, eX=0)
    m2 = DelPezzoFibration(K=6, d=d, relK3=other, eX=0)
    assert compare(invariants(m1), invariants(m2)).outcome is D
    # the witness is x -> -x' + 4d y', y -> y'
    res = equivalent_bounded(triple(m1), triple(m2), entry_bound=4 * d)
    assert res.found and triple_transport_check(res.phi, triple(m1), triple(m2))
    assert res.phi == ((-1, 0), (4 * d, 1))


def test_plus_sign_pairing_is_not_an_equivalence():
    m1 = DelPezzoFibration(K=6, d=2, relK3=-10, eX=0)
    m2 = DelPezzoFibration(K=6, d=2, relK3=36 + 10, eX=0)
    assert compare(invariants(m1), invariants(m2)).outcome is N
    assert equivalent_bounded(triple(m1), triple(m2), entry_bound=30).status is not Equivalence.FOUND


def test_canonical_pairs():
    recs = canonical_records()
    for name, (a, b) in recs.items():
        v = compare(a, b)
        assert v.outcome is D and v.branch == "cross"
        assert canonical_match(a) == canonical_match(b) == name
    p2p1, xx = recs["P2xP1"], recs["X"]
    assert compare(p2p1[0], xx[1]).outcome is N
    assert compare(invariants(DelPezzoFibration(K=9, twist=3)), p2p1[1]).outcome is D


def test_smooth_versus_singular_branch():
    a = invariants(SmoothConicBundle(PLANE, (0,), 0))
    b = invariants(SingularConicBundle(PLANE, (-8,), -8))
    v = compare(a, b)
    assert v.outcome is N and v.branch == "kind"


def twisted(m, w):
    L = m.surface.lattice
    c1 = tuple(a + 2 * b for a, b in zip(m.c1E, w))
    c2 = m.c2E + L.pair(m.c1E, w) + L.pair(w, w)
    return SmoothConicBundle(m.surface, c1, c2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_line_bundle_twist_is_diffeomorphic(seed):
    rng = random.Random(seed)
    s = rng.choice([PLANE, QUADRIC, blown_up_plane(1), blown_up_plane(2)])
    m = SmoothConicBundle(s, tuple(rng.randint(-3, 3) for _ in range(s.rank)), rng.randint(-9, 9))
    m2 = twisted(m, tuple(rng.randint(-2, 2) for _ in range(s.rank)))
    v = compare(invariants(m), invariants(m2))
    assert v.outcome is D and v.branch == "A"
    phi = smooth_isomorphism(m, m2, IsometryMap(identity(s.rank)))
    assert triple_transport_check(phi, triple(m), triple(m2))


def test_smooth_isomorphism_rejects_bad_maps():
    m = SmoothConicBundle(PLANE, (1,), 0)
    with pytest.raises(ValueError):
        smooth_isomorphism(m, SmoothConicBundle(PLANE, (0,), 0), IsometryMap(identity(1)))
    with pytest.raises(ValueError):
        smooth_isomorphism(m, m, IsometryMap(((2,),)))


def test_smooth_distinguished_by_w2_type():
    v = compare(invariants(SmoothConicBundle(PLANE, (0,), 0)), invariants(SmoothConicBundle(PLANE, (1,), 0)))
    assert v.outcome is N
    assert any(r.rule == "w2_type" and not r.ok for r in v.reasons)


def test_primed_branch_excluded_for_even_b2():
    a = invariants(SmoothConicBundle(PLANE, (0,), 0))
    b = invariants(SmoothConicBundle(PLANE, (0,), 1))
    v = compare(a, b)
    assert v.outcome is N
    assert any("b2 = 2 is even" in note for note in v.notes)


def test_exceptional_range_is_undetermined():
    s = blown_up_plane(10)
    a = invariants(SingularConicBundle(s, (-4,) + (0,) * 10, 0))
    b = invariants(SingularConicBundle(s, (-8, -4, -4, -4) + (0,) * 7, 0))
    assert a.chiOX == 1 and a.b2X == 12
    v = compare(a, b)
    assert v.outcome is U and v.branch == "B" and v.exit_code == 2
    assert v.notes


def test_singular_below_exceptional_range_is_decided():
    s = blown_up_plane(2)
    a = invariants(SingularConicBundle(s, (-4, 0, 0), 0))
    b = invariants(SingularConicBundle(s, (-4, 0, 0), 0))
    assert compare(a, b).outcome is D
