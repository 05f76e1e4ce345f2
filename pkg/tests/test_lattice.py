import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mori_class.lattice import (
    BilinearLattice,
    BudgetExceeded,
    HypothesisError,
    IsometryMap,
    LatticeError,
    NotFound,
    Parity,
    VectorType,
    alpha_mod4,
    direct_sum,
    divisibility,
    eichler_transvections,
    explicit_mod2_step,
    integer_det,
    inverse_isometry,
    is_characteristic,
    is_isometry,
    mat_mul,
    mod2,
    mod2_isometry,
    norm,
    orbit_enumerate,
    primitive_part,
    reflection,
    roots,
    signed_permutations,
    transpose,
    vector_type,
    wall_isometry,
    transitivity_known,
)
from mori_class.verify import random_lattice, random_root, random_unimodular


def brute_det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total += (-1) ** inv * math.prod(m[i][perm[i]] for i in range(n))
    return total


@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_integer_det_matches_leibniz(rows):
    assert integer_det(rows) == brute_det(rows)


def test_rejects_bad_gram():
    with pytest.raises(LatticeError):
        BilinearLattice(((2, 1), (1, 2)))
    with pytest.raises(LatticeError):
        BilinearLattice(((1, 1), (0, 1)))
    with pytest.raises(LatticeError):
        BilinearLattice(((1, 0),))
    with pytest.raises(LatticeError):
        BilinearLattice(())


def test_standard_forms():
    assert BilinearLattice.e8().signature == 8
    assert BilinearLattice.e8(-1).parity is Parity.EVEN
    k3 = BilinearLattice.standard(22, -16, "Even")
    assert (k3.rank, k3.signature, k3.parity) == (22, -16, Parity.EVEN)
    assert BilinearLattice.standard(5, -3, Parity.ODD).gram == BilinearLattice.diagonal(1, 4).gram
    with pytest.raises(LatticeError):
        BilinearLattice.standard(4, 4, "Even")
    with pytest.raises(LatticeError):
        BilinearLattice.standard(3, 0, "Odd")


def test_direct_sum_and_labels():
    L = direct_sum(BilinearLattice.hyperbolic(), BilinearLattice.diagonal(1, 0))
    assert L.rank == 3 and L.signature == 1 and L.parity is Parity.ODD
    assert L.is_definite is False
    assert BilinearLattice.diagonal(0, 3).is_definite


def test_vector_invariants():
    L = BilinearLattice.diagonal(1, 3)
    assert norm(L, (2, 1, 1, 1)) == 1
    assert divisibility((0, 4, -6, 2)) == 2
    assert primitive_part((0, 4, -6, 2)) == (0, 2, -3, 1)
    assert is_characteristic(L, (3, 1, 1, 1))
    assert vector_type(L, (6, 2, 2, 2)) is VectorType.CHARACTERISTIC
    assert vector_type(L, (1, 1, 0, 0)) is VectorType.ORDINARY
    H = BilinearLattice.hyperbolic()
    assert is_characteristic(H, (0, 0))
    assert not is_characteristic(H, (1, 0))


def test_reflection_example():
    L = BilinearLattice.diagonal(1, 3)
    assert reflection(L, (0, 1, 1, 0)).apply((0, 1, 0, 0)) == (0, 0, -1, 0)
    with pytest.raises(LatticeError):
        reflection(L, (1, 1, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reflections_are_involutive_isometries(seed):
    rng = random.Random(seed)
    L = random_lattice(rng)
    u = random_root(L, rng)
    if u is None:
        return
    M = reflection(L, u).matrix
    assert is_isometry(M, L.gram, L.gram)
    assert mat_mul(M, M) == tuple(tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_unimodular_preserves_invariants(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    U = random_unimodular(n, rng)
    assert abs(integer_det(U)) == 1
    base = BilinearLattice.diagonal(1, n - 1)
    L = BilinearLattice(mat_mul(mat_mul(transpose(U), base.gram), U))
    assert (L.rank, L.signature, L.parity) == (base.rank, base.signature, base.parity)


def test_signed_permutations_and_eichler_are_isometries():
    for L in (BilinearLattice.hyperbolic(2), BilinearLattice.diagonal(2, 2)):
        mats = signed_permutations(L) + eichler_transvections(L)
        assert mats
        assert all(is_isometry(m, L.gram, L.gram) for m in mats)
    assert eichler_transvections(BilinearLattice.diagonal(0, 3)) == ()


def test_roots_have_requested_norms():
    L = BilinearLattice.diagonal(1, 3)
    rs = roots(L, 1, (-2, 2))
    assert rs and all(norm(L, u) in (-2, 2) for u in rs)
    with pytest.raises(BudgetExceeded):
        roots(BilinearLattice.diagonal(1, 30), 3)


def test_wall_isometry_hits_target():
    L = BilinearLattice.diagonal(1, 4)
    f = wall_isometry(L, (2, 1, 1, 1, 0), (1, 0, 0, 0, 0))
    assert isinstance(f, IsometryMap)
    assert f.apply((2, 1, 1, 1, 0)) == (1, 0, 0, 0, 0)
    assert f.is_valid_for(L)
    g = inverse_isometry(L, f)
    assert g.apply((1, 0, 0, 0, 0)) == (2, 1, 1, 1, 0)


def test_wall_isometry_checks_hypotheses():
    L = BilinearLattice.diagonal(1, 3)
    with pytest.raises(HypothesisError):
        wall_isometry(L, (1, 0, 0, 0), (0, 1, 0, 0))
    with pytest.raises(HypothesisError):
        wall_isometry(L, (2, 0, 0, 0), (2, 0, 0, 0))
    with pytest.raises(HypothesisError):
        wall_isometry(L, (3, 1, 1, 1), (1, 1, 0, 0))


def test_wall_isometry_definite_is_inconclusive():
    L = BilinearLattice.diagonal(0, 2)
    r = wall_isometry(L, (1, 0), (0, 1))
    assert isinstance(r, IsometryMap)
    far = wall_isometry(BilinearLattice.diagonal(1, 5), (3, 2, 0, 0, 0, 0), (3, 1, 1, 1, 1, 0), vector_bound=4)
    assert isinstance(far, NotFound)
    assert "never" in NotFound.__doc__.lower()


def test_small_diagonal_forms_are_not_transitive_at_q5():
    # the two norm 5 ordinary vectors have non-isometric complements
    L = BilinearLattice.diagonal(1, 5)
    v1, v2 = (3, 2, 0, 0, 0, 0), (3, 1, 1, 1, 1, 0)
    assert norm(L, v1) == norm(L, v2) == 5
    assert vector_type(L, v1) == vector_type(L, v2) == VectorType.ORDINARY

    def minus_one_in_complement(v):
        box = itertools.product(range(-3, 4), repeat=6)
        return sum(1 for w in box if L.pair(v, w) == 0 and norm(L, w) == -1)

    assert (minus_one_in_complement(v1), minus_one_in_complement(v2)) == (8, 2)
    assert not transitivity_known(L)
    assert transitivity_known(BilinearLattice.hyperbolic(2))


def test_explicit_mod2_steps():
    x, u, image = explicit_mod2_step(4, 1, 0)
    assert x == (1, 1, 0, 0, 0) and image == (0, 1, 1, 1, 1)
    for q in range(4, 10):
        for k in range(2, q):
            _, _, image = explicit_mod2_step(q, 2, k)
            assert image[0] == 0 and sum(image[1:]) == k - 1
        for l in range(5, q):
            _, _, image = explicit_mod2_step(q, 3, l)
            assert image[0] == 0 and sum(image[1:]) == l - 4
    with pytest.raises(HypothesisError):
        explicit_mod2_step(5, 3, 5)


@pytest.mark.parametrize(
    "L",
    [BilinearLattice.diagonal(1, q) for q in range(2, 8)]
    + [BilinearLattice.hyperbolic(2), BilinearLattice.diagonal(2, 2), BilinearLattice.diagonal(3, 3)],
    ids=lambda L: L.standard_label(),
)
def test_mod2_isometry_on_random_pairs(L):
    rng = random.Random(L.rank)
    found = 0
    for _ in range(400):
        v = tuple(rng.randint(-3, 3) for _ in range(L.rank))
        w = tuple(rng.randint(-3, 3) for _ in range(L.rank))
        if divisibility(v) != 1 or divisibility(w) != 1:
            continue
        if (norm(L, v) - norm(L, w)) % 4 or vector_type(L, v) != vector_type(L, w):
            continue
        f = mod2_isometry(L, v, w)
        assert isinstance(f, IsometryMap), f
        assert f.is_valid_for(L)
        assert mod2(f.apply(v)) == mod2(w)
        found += 1
        if found == 15:
            break
    assert found >= 5


def orbit_partition_holds(L, box):
    classes = {}
    for v in itertools.product(range(-box, box + 1), repeat=L.rank):
        if any(v) and divisibility(v) == 1:
            classes.setdefault((norm(L, v), vector_type(L, v)), set()).add(v)
    return all(set(orbit_enumerate(L, min(c), box)) == c for c in classes.values())


@pytest.mark.parametrize("q", [1, 2, 3])
def test_orbit_partition_small(q):
    assert orbit_partition_holds(BilinearLattice.diagonal(1, q), 3)


def test_orbit_enumerate_stays_in_box():
    L = BilinearLattice.diagonal(1, 2)
    orbit = orbit_enumerate(L, (1, 0, 0), 2)
    assert orbit == sorted(orbit)
    assert all(max(map(abs, v)) <= 2 and norm(L, v) == 1 for v in orbit)
    with pytest.raises(LatticeError):
        orbit_enumerate(L, (3, 0, 0), 2)


def test_alpha_mod4():
    L = BilinearLattice.diagonal(1, 3)
    assert alpha_mod4(L, (0, 1, 1, 0)) == 2
    assert alpha_mod4(L, (0, 1, 1, 1)) == 1


def test_orbit_of_unit_vector_in_hyperbolic_diagonal():
    L = BilinearLattice.diagonal(1, 1)
    assert (-1, 0) in orbit_enumerate(L, (1, 0), 3)


def test_norm_one_ordinary_orbit_fills_box_at_q5():
    L = BilinearLattice.diagonal(1, 5)
    box = itertools.product(range(-3, 4), repeat=6)
    expected = {v for v in box if any(v) and divisibility(v) == 1 and norm(L, v) == 1
                and vector_type(L, v) is VectorType.ORDINARY}
    assert set(orbit_enumerate(L, (1, 0, 0, 0, 0, 0), 3)) == expected
