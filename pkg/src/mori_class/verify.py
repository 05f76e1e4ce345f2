"""Self-check suites run by ``mori-class verify``."""

from __future__ import annotations

import itertools
import math
import random
from typing import Callable, Iterator

from .classifier import Outcome, canonical_records, compare
from .cubic import Equivalence, equivalent_bounded, triple_transport_check
from .lattice import (
    BilinearLattice,
    explicit_mod2_step,
    is_isometry,
    mat_mul,
    norm,
    orbit_enumerate,
    reflection,
    transpose,
    vector_type,
    wall_isometry,
)
from .models import (
    DelPezzoFibration,
    FanoRankOne,
    SingularConicBundle,
    SmoothConicBundle,
    SurfaceData,
    hrr_residue,
    invariants,
    triple,
)

Check = tuple[str, bool, str]
SUITES = ("lattice", "cubic", "classifier")


# -- random data shared with the test-suite ---------------------------------------


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> tuple[tuple[int, ...], ...]:
    """Product of random elementary matrices and a signed permutation."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        for r in range(n):
            m[r][i] += c * m[r][j]
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(n)]
    out = [[m[r][perm[c]] * signs[c] for c in range(n)] for r in range(n)]
    return tuple(tuple(r) for r in out)


def random_lattice(rng: random.Random, max_rank: int = 6) -> BilinearLattice:
    """A standard form of random shape written in a random basis."""
    n = rng.randint(1, max_rank)
    choices = [BilinearLattice.diagonal(p, n - p) for p in range(n + 1)]
    if n % 2 == 0:
        choices.append(BilinearLattice.hyperbolic(n // 2))
    base = rng.choice(choices)
    u = random_unimodular(n, rng)
    return BilinearLattice(mat_mul(mat_mul(transpose(u), base.gram), u))


def random_root(L: BilinearLattice, rng: random.Random, bound: int = 2, tries: int = 4000):
    """A random vector of norm +-2, or None."""
    for _ in range(tries):
        u = tuple(rng.randint(-bound, bound) for _ in range(L.rank))
        if norm(L, u) in (-2, 2):
            return u
    return None


# -- suites --------------------------------------------------------------------------


def lattice_checks(seed: int = 0) -> Iterator[Check]:
    rng = random.Random(seed)
    L = BilinearLattice.diagonal(1, 3)
    yield "norm (2;1,1,1) = 1", norm(L, (2, 1, 1, 1)) == 1, ""
    img = reflection(L, (0, 1, 1, 0)).apply((0, 1, 0, 0))
    yield "reflection example", img == (0, 0, -1, 0), str(img)

    tested = bad = 0
    while tested < 200:
        L = random_lattice(rng)
        u = random_root(L, rng)
        if u is None:
            continue
        tested += 1
        M = reflection(L, u).matrix
        if not is_isometry(M, L.gram, L.gram) or mat_mul(M, M) != tuple(
            tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank)
        ):
            bad += 1
    yield "random reflections are involutive isometries", bad == 0, f"{bad}/{tested} failed"

    x, _, image = explicit_mod2_step(4, 1, 0)
    yield "mod-2 step, first construction", image == (0, 1, 1, 1, 1), str(image)
    _, _, image = explicit_mod2_step(6, 2, 3)
    yield "mod-2 step, second construction", sum(image[1:]) == 2 and image[0] == 0, str(image)
    _, _, image = explicit_mod2_step(7, 3, 5)
    yield "mod-2 step, third construction", sum(image[1:]) == 1 and image[0] == 0, str(image)

    H = BilinearLattice.hyperbolic()
    f = wall_isometry(H, (1, 0), (0, 1))
    yield "hyperbolic swap", hasattr(f, "matrix") and f.apply((1, 0)) == (0, 1), str(f)

    for q in (1, 2, 3):
        L = BilinearLattice.diagonal(1, q)
        ok = _orbits_partition(L, 3)
        yield f"orbits partition (1)+{q}(-1) by norm and type", ok, ""


def _orbits_partition(L: BilinearLattice, box: int) -> bool:
    classes: dict = {}
    for v in itertools.product(range(-box, box + 1), repeat=L.rank):
        if any(v) and math.gcd(*map(abs, v)) == 1:
            classes.setdefault((norm(L, v), vector_type(L, v)), set()).add(v)
    for cls in classes.values():
        if set(orbit_enumerate(L, min(cls), box)) != cls:
            return False
    return True


def cubic_checks(seed: int = 0) -> Iterator[Check]:
    p2p1 = triple(DelPezzoFibration(K=9, twist=0))
    other = triple(DelPezzoFibration(K=9, twist=1))
    res = equivalent_bounded(p2p1, p2p1)
    yield "identity is found", res.status is Equivalence.FOUND, res.detail
    res = equivalent_bounded(p2p1, other)
    yield "x^3 mod 3 separates the two projective-plane bundles", res.status is Equivalence.DISTINCT, res.detail
    q1, q2 = triple(DelPezzoFibration(K=8, twist=-1)), triple(DelPezzoFibration(K=8, twist=-2))
    res = equivalent_bounded(q1, q2)
    yield "b3 separates quadric bundles", res.status is Equivalence.DISTINCT and res.witness[0] == "b3", res.detail
    plane = SurfaceData(BilinearLattice(((1,),)), (3,))
    xd1 = triple(DelPezzoFibration(K=2, relK3=6, eX=-34))
    xd2 = triple(SingularConicBundle(plane, (-8,), -8))
    phi = ((1, 1), (3, 2))
    yield "explicit map between the two models of the double cover", triple_transport_check(phi, xd1, xd2), ""
    res = equivalent_bounded(xd1, xd2)
    yield "bounded search finds the double cover map", res.status is Equivalence.FOUND, res.detail


def classifier_checks(seed: int = 0) -> Iterator[Check]:
    rng = random.Random(seed)
    canon = canonical_records()
    for name, (a, b) in canon.items():
        v = compare(a, b)
        yield f"{name}: curve and surface models agree", v.outcome is Outcome.DIFFEOMORPHIC and v.branch == "cross", str(v.outcome.value)
    recs = [invariants(DelPezzoFibration(K=8, twist=c)) for c in range(-5, 0)]
    ok = all((compare(a, b).outcome is Outcome.DIFFEOMORPHIC) == (i == j)
             for i, a in enumerate(recs) for j, b in enumerate(recs))
    yield "quadric bundles are classified by the twist", ok, ""
    r = [invariants(DelPezzoFibration(K=9, twist=t)) for t in (0, -1, 1, -2, 3)]
    ok = (compare(r[0], r[1]).outcome is Outcome.NOT_DIFFEOMORPHIC
          and compare(r[2], r[3]).outcome is Outcome.DIFFEOMORPHIC
          and compare(r[0], r[4]).outcome is Outcome.DIFFEOMORPHIC)
    yield "projective-plane bundles: x^3 mod 3", ok, ""
    bad = 0
    for m in random_models(rng, 300):
        bad += hrr_residue(m) != 0
    yield "HRR residue vanishes on random models", bad == 0, f"{bad} failures"


def random_models(rng: random.Random, count: int) -> Iterator:
    """Valid models from every family with an available triple."""
    from .census import blown_up_plane

    produced = 0
    surfaces = [blown_up_plane(q) for q in range(0, 8)]
    surfaces.append(SurfaceData(BilinearLattice.hyperbolic(), (2, 2)))
    while produced < count:
        fam = rng.randrange(4)
        try:
            if fam == 0:
                m = FanoRankOne(rng.randint(1, 60), rng.choice((4, 2, 0, -10, -40)), rng.randint(1, 4))
            elif fam == 1:
                K = rng.choice((1, 2, 3, 4, 5, 6, 8, 9))
                if K == 8:
                    m = DelPezzoFibration(K=8, twist=rng.randint(-20, -1))
                elif K == 9:
                    m = DelPezzoFibration(K=9, twist=rng.randint(-20, 20))
                else:
                    d = rng.choice((1, 2, 3, 6)) if K == 6 else 1
                    m = DelPezzoFibration(K=K, d=d, relK3=2 * rng.randint(-30, 30), eX=6 - 2 * rng.randint(0, 30))
            else:
                s = rng.choice(surfaces)
                vec = tuple(rng.randint(-6, 6) for _ in range(s.rank))
                c2 = rng.randint(-30, 30)
                m = SmoothConicBundle(s, vec, c2) if fam == 2 else SingularConicBundle(s, vec, c2)
            invariants(m)
        except ValueError:
            continue
        produced += 1
        yield m


SUITE_FUNCS: dict[str, Callable[..., Iterator[Check]]] = {
    "lattice": lattice_checks,
    "cubic": cubic_checks,
    "classifier": classifier_checks,
}


def run(suite: str) -> list[Check]:
    names = SUITES if suite == "all" else (suite,)
    out: list[Check] = []
    for name in names:
        out.extend((f"{name}: {c}", ok, detail) for c, ok, detail in SUITE_FUNCS[name]())
    return out

