"""Input data for the four families of Mori fiber spaces and their invariants.

Bases of H^2(X) used for the Wall-Jupp triple:

* rank one Fano: a generator x.
* del Pezzo fibration over P^1: {x, y} with y^2 = 0, y the class for which
  the pulled-back point class is d*y.
* smooth conic bundle P(E) -> Y: {u, y_1..y_r} with u^2 = c1(E)u - c2(E)
  and <u . y_Y> = -1 on the fiber, where y_Y is the point class.
* singular conic bundle: {u, y_1..y_r}, u = c1(X) - c1(Y), 2u^2 = c1 u + c2
  and <u . y_Y> = 2.

Sign conventions: K3 = -<c1(X)^3> and relK3 = -<(c1(X) - c1(Y))^3>.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from .cubic import CubicForm, WallJuppTriple
from .lattice import (
    BilinearLattice,
    Parity,
    VectorType,
    divisibility,
    is_characteristic,
    vector_type,
)

Vector = tuple[int, ...]

ALLOWED_K = (1, 2, 3, 4, 5, 6, 8, 9)
ALLOWED_D_FOR_K6 = (1, 2, 3, 6)


class ModelError(ValueError):
    """Input data violates a structural constraint.

    ``violations`` is a list of ``(name, message)`` pairs; ``field`` names the
    input key most responsible, when there is one.
    """

    def __init__(self, violations: list[tuple[str, str]], field: str | None = None):
        self.violations = violations
        self.field = field
        super().__init__("; ".join(f"{name}: {msg}" for name, msg in violations))


class W2Type(str, enum.Enum):
    ZERO = "0"
    I = "I"  # noqa: E741
    II = "II"
    III0 = "III0"
    III1 = "III1"


# -- input data ---------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceData:
    lattice: BilinearLattice
    c1Y: Vector
    eY: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "c1Y", tuple(int(x) for x in self.c1Y))
        if self.eY is None:
            object.__setattr__(self, "eY", 2 + self.lattice.rank)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def c1_squared(self) -> int:
        return self.lattice.pair(self.c1Y, self.c1Y)

    @property
    def chi(self) -> int:
        return (self.c1_squared + self.eY) // 12


@dataclass(frozen=True)
class SmoothConicBundle:
    surface: SurfaceData
    c1E: Vector
    c2E: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "c1E", tuple(int(x) for x in self.c1E))


@dataclass(frozen=True)
class SingularConicBundle:
    surface: SurfaceData
    c1rel: Vector
    c2rel: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "c1rel", tuple(int(x) for x in self.c1rel))


@dataclass(frozen=True)
class DelPezzoFibration:
    """Over P^1.  For K in {8, 9} the twist determines everything else."""

    K: int
    d: int = 1
    relK3: int | None = None
    eX: int | None = None
    twist: int | None = None
    name: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FanoRankOne:
    """Picard rank one.  ``index`` (c1 = index * x) is optional and only
    needed to build the full triple."""

    degree: int
    eX: int
    index: int | None = None
    name: str | None = field(default=None, compare=False)


MfsDescription = Union[FanoRankOne, DelPezzoFibration, SmoothConicBundle, SingularConicBundle]


@dataclass(frozen=True)
class InvariantRecord:
    base_dim: int
    fibration_kind: str
    b2X: int
    b3X: int
    eX: int
    chiOX: int
    K3: int | None = None
    w2_type: W2Type | None = None
    relK3: int | None = None
    K: int | None = None
    d: int | None = None
    twist: int | None = None
    x3_mod3: str | None = None
    cf_divisibility: int | None = None
    cf_norm: int | None = None
    cf_type: VectorType | None = None
    degree: int | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.b3X < 0 or self.b3X % 2:
            raise ModelError([("b3", f"b3 must be even and nonnegative, got {self.b3X}")])
        if self.eX != 2 + 2 * self.b2X - self.b3X:
            raise ModelError([("betti", "eX != 2 + 2 b2 - b3")])

    def items(self):
        """Non-empty fields in declaration order, as plain values."""
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if v is None:
                continue
            if isinstance(v, enum.Enum):
                v = v.value
            yield name, v


# -- validation -----------------------------------------------------------------


def surface_violations(s: SurfaceData) -> list[tuple[str, str]]:
    L = s.lattice
    out: list[tuple[str, str]] = []
    if len(s.c1Y) != L.rank:
        return [("dimension", f"c1Y has length {len(s.c1Y)}, lattice rank is {L.rank}")]
    if s.eY != 2 + L.rank:
        out.append(("euler", f"eY must be 2 + rank = {2 + L.rank}, got {s.eY}"))
    if not is_characteristic(L, s.c1Y):
        out.append(("wu", "c1Y is not characteristic"))
    c1sq = s.c1_squared
    if (c1sq + s.eY) % 12:
        out.append(("noether", f"c1Y^2 + eY = {c1sq + s.eY} is not divisible by 12"))
    elif L.signature != 4 * s.chi - s.eY:
        out.append(("signature", f"signature {L.signature} != 4*chi - eY = {4 * s.chi - s.eY}"))
    if 3 * s.eY < c1sq:
        out.append(("miyaoka-yau", f"3 eY = {3 * s.eY} < c1Y^2 = {c1sq}"))
    elif 3 * s.eY == c1sq and not (L.gram == ((1,),) and c1sq == 9):
        out.append(("miyaoka-yau", "equality 3 eY = c1Y^2 only for the projective plane"))
    return out


def validate_surface(s: SurfaceData) -> int:
    """Check the surface data and return chi(O_Y)."""
    bad = surface_violations(s)
    if bad:
        raise ModelError(bad)
    return s.chi


def _check_vector(name: str, v: Vector, rank: int) -> None:
    if len(v) != rank:
        raise ModelError([("dimension", f"{name} has length {len(v)}, lattice rank is {rank}")], field=name)


def validate_delpezzo(m: DelPezzoFibration) -> None:
    if m.K not in ALLOWED_K:
        raise ModelError([("K", f"K must be one of 1..6, 8, 9; got {m.K}")], field="K")
    if m.K == 6:
        if m.d not in ALLOWED_D_FOR_K6:
            raise ModelError([("d", f"for K = 6, d must be one of {ALLOWED_D_FOR_K6}; got {m.d}")], field="d")
    elif m.d != 1:
        raise ModelError([("d", f"d must be 1 unless K = 6; got {m.d}")], field="d")
    if m.K <= 6:
        if m.twist is not None:
            raise ModelError([("twist", "twist is only meaningful for K = 8 or 9")], field="twist")
        missing = [k for k in ("relK3", "eX") if getattr(m, k) is None]
        if missing:
            raise ModelError([("missing", f"K <= 6 requires {', '.join(missing)}")], field=missing[0])
        b3 = 6 - m.eX
        if b3 < 0 or b3 % 2:
            raise ModelError([("b3", f"b3 = 6 - eX = {b3} must be even and nonnegative")], field="eX")
        if m.relK3 % 2:
            # w2 = x here, and w2 . x^2 is even on any closed 6-manifold
            raise ModelError([("relK3", "relK3 must be even")], field="relK3")
        return
    if m.twist is None:
        raise ModelError([("missing", f"K = {m.K} requires twist")], field="twist")
    rel, e = _fixed_delpezzo_numbers(m.K, m.twist)
    if m.K == 8 and m.twist > -1:
        raise ModelError([("twist", f"K = 8 requires twist <= -1, got {m.twist}")], field="twist")
    if m.relK3 is not None and m.relK3 != rel:
        raise ModelError([("relK3", f"relK3 is determined by the twist: expected {rel}")], field="relK3")
    if m.eX is not None and m.eX != e:
        raise ModelError([("eX", f"eX is determined by the twist: expected {e}")], field="eX")


def _fixed_delpezzo_numbers(K: int, twist: int) -> tuple[int, int]:
    """(relK3, eX) for the quadric and projective-plane bundles."""
    if K == 8:
        return -8 * twist, 2 * twist + 8
    return 0, 6


def validate_singular(m: SingularConicBundle) -> None:
    validate_surface(m.surface)
    _check_vector("c1rel", m.c1rel, m.surface.rank)
    if not any(m.c1rel):
        raise ModelError([("discriminant", "c1rel must be nonzero (empty discriminant)")], field="c1rel")
    n = m.surface.lattice.pair(m.c1rel, m.c1rel)
    if n % 2:
        raise ModelError([("integrality", f"c1rel^2 = {n} must be even")], field="c1rel")
    b3 = _singular_b3(m)
    if b3 < 0:
        raise ModelError([("b3", f"b3 = {b3} is negative")], field="c1rel")


def validate(m: MfsDescription) -> None:
    if isinstance(m, FanoRankOne):
        if m.degree <= 0:
            raise ModelError([("degree", "degree must be positive")], field="degree")
        b3 = 4 - m.eX
        if b3 < 0 or b3 % 2:
            raise ModelError([("b3", f"b3 = 4 - eX = {b3} must be even and nonnegative")], field="eX")
        if m.index is not None and m.index not in (1, 2, 3, 4):
            raise ModelError([("index", "index must be 1, 2, 3 or 4")], field="index")
    elif isinstance(m, DelPezzoFibration):
        validate_delpezzo(m)
    elif isinstance(m, SmoothConicBundle):
        validate_surface(m.surface)
        _check_vector("c1E", m.c1E, m.surface.rank)
    elif isinstance(m, SingularConicBundle):
        validate_singular(m)
    else:
        raise TypeError(f"not a description: {m!r}")


# -- smooth conic bundles --------------------------------------------------------


def _smooth_numbers(m: SmoothConicBundle) -> dict:
    L = m.surface.lattice
    s = m.surface.c1_squared
    n = L.pair(m.c1E, m.c1E)
    eY = m.surface.eY
    c1_cubed = 6 * s + 2 * n - 8 * m.c2E
    # p1(X) is pulled back from p1(Y) + c1(E)^2 - 4 c2(E)
    N = n - 4 * m.c2E + s - 2 * eY
    return {"s": s, "n": n, "c1_cubed": c1_cubed, "N": N}


def _w2_type(y_spin: bool, x_spin: bool, diff_zero: bool) -> W2Type:
    if y_spin:
        return W2Type.ZERO if x_spin else W2Type.II
    if x_spin:
        return W2Type.I
    return W2Type.III0 if diff_zero else W2Type.III1


def invariants_smooth(m: SmoothConicBundle) -> InvariantRecord:
    validate(m)
    num = _smooth_numbers(m)
    y_spin = m.surface.lattice.parity is Parity.EVEN
    x_spin = all((a + b) % 2 == 0 for a, b in zip(m.surface.c1Y, m.c1E))
    diff_zero = all(x % 2 == 0 for x in m.c1E)
    return InvariantRecord(
        base_dim=2,
        fibration_kind="smooth",
        b2X=m.surface.rank + 1,
        b3X=0,
        eX=2 * m.surface.eY,
        chiOX=m.surface.chi,
        K3=-num["c1_cubed"],
        w2_type=_w2_type(y_spin, x_spin, diff_zero),
        name=m.name,
    )


def smooth_triple(m: SmoothConicBundle) -> WallJuppTriple:
    validate(m)
    L = m.surface.lattice
    r = L.rank
    num = _smooth_numbers(m)
    vals = {(0, 0, 0): m.c2E - num["n"]}
    gc = L.dual(m.c1E)
    for i in range(r):
        vals[(0, 0, i + 1)] = -gc[i]
        for j in range(i, r):
            vals[(0, i + 1, j + 1)] = -L.gram[i][j]
    cubic = CubicForm.from_monomials(r + 1, vals)
    p1 = (-num["N"],) + (0,) * r
    return WallJuppTriple(cubic, p1, c1_vector(m), 0)


# -- singular conic bundles --------------------------------------------------------


def _singular_b3(m: SingularConicBundle) -> int:
    L = m.surface.lattice
    return L.pair(m.c1rel, m.c1rel) + L.pair(m.surface.c1Y, m.c1rel)


def _singular_numbers(m: SingularConicBundle) -> dict:
    L = m.surface.lattice
    s = m.surface.c1_squared
    n = L.pair(m.c1rel, m.c1rel)
    cc = L.pair(m.c1rel, m.surface.c1Y)
    b3 = n + cc
    eY = m.surface.eY
    chi = m.surface.chi
    u3 = n // 2 + m.c2rel
    c1_cubed = u3 + 3 * cc + 6 * s
    # <p, [Y]> where p1(X) = p + 3u^2; 9 eX/2 + 3 b3/2 = 9 eY - 3 b3
    P = 84 * chi - c1_cubed - 9 * eY + 3 * b3 - 3 * n
    return {"n": n, "cc": cc, "b3": b3, "u3": u3, "c1_cubed": c1_cubed, "P": P}


def invariants_singular(m: SingularConicBundle) -> InvariantRecord:
    validate(m)
    num = _singular_numbers(m)
    L = m.surface.lattice
    cf = tuple(-x for x in m.c1rel)
    return InvariantRecord(
        base_dim=2,
        fibration_kind="singular",
        b2X=m.surface.rank + 1,
        b3X=num["b3"],
        eX=2 * m.surface.eY - num["b3"],
        chiOX=m.surface.chi,
        K3=-num["c1_cubed"],
        w2_type=W2Type.II if L.parity is Parity.EVEN else W2Type.III1,
        cf_divisibility=divisibility(cf),
        cf_norm=L.pair(cf, cf),
        cf_type=vector_type(L, cf),
        name=m.name,
    )


def c2rel_from_record(rec: InvariantRecord) -> int:
    """Recover c2 of a singular conic bundle from its record."""
    return -rec.K3 + 3 * rec.eX - 72 * rec.chiOX + (5 * rec.cf_norm) // 2


def singular_triple(m: SingularConicBundle) -> WallJuppTriple:
    validate(m)
    L = m.surface.lattice
    r = L.rank
    num = _singular_numbers(m)
    vals = {(0, 0, 0): num["u3"]}
    gc = L.dual(m.c1rel)
    for i in range(r):
        vals[(0, 0, i + 1)] = gc[i]
        for j in range(i, r):
            vals[(0, i + 1, j + 1)] = 2 * L.gram[i][j]
    cubic = CubicForm.from_monomials(r + 1, vals)
    p1 = (2 * num["P"] + 3 * num["u3"],) + tuple(3 * x for x in gc)
    return WallJuppTriple(cubic, p1, c1_vector(m), num["b3"])


# -- del Pezzo fibrations ------------------------------------------------------------


def _delpezzo_numbers(m: DelPezzoFibration) -> dict:
    """x^3, x^2 y, p1 pairing, c1 vector and b3."""
    if m.K == 9:
        t = m.twist
        return {"x3": t, "x2y": 1, "p1": (t, 3), "c1": (3, 2 - t), "b3": 0}
    if m.K == 8:
        c = m.twist
        return {"x3": -2 * c, "x2y": 2, "p1": (4 * c, 0), "c1": (2, c + 2), "b3": -2 * c - 2}
    a = 6 * m.K // m.d - m.relK3
    return {"x3": a, "x2y": m.K // m.d, "p1": (a - 48, 3 * (m.K - 8) // m.d), "c1": (1, 0), "b3": 6 - m.eX}


def invariants_delpezzo(m: DelPezzoFibration) -> InvariantRecord:
    validate(m)
    if m.K in (8, 9):
        rel, e = _fixed_delpezzo_numbers(m.K, m.twist)
    else:
        rel, e = m.relK3, m.eX
    return InvariantRecord(
        base_dim=1,
        fibration_kind="n/a",
        b2X=2,
        b3X=6 - e,
        eX=e,
        chiOX=1,
        K3=rel - 6 * m.K // m.d,
        relK3=rel,
        K=m.K,
        d=m.d,
        twist=m.twist if m.K in (8, 9) else None,
        x3_mod3=("0" if m.twist % 3 == 0 else "nonzero") if m.K == 9 else None,
        name=m.name,
    )


def delpezzo_triple(m: DelPezzoFibration) -> WallJuppTriple:
    validate(m)
    num = _delpezzo_numbers(m)
    cubic = CubicForm.from_monomials(2, {(0, 0, 0): num["x3"], (0, 0, 1): num["x2y"]})
    return WallJuppTriple(cubic, num["p1"], num["c1"], num["b3"])


# -- rank one Fano -------------------------------------------------------------------


def invariants_fano(m: FanoRankOne) -> InvariantRecord:
    validate(m)
    return InvariantRecord(
        base_dim=0,
        fibration_kind="n/a",
        b2X=1,
        b3X=4 - m.eX,
        eX=m.eX,
        chiOX=1,
        K3=-(m.index**3) * m.degree if m.index else None,
        degree=m.degree,
        name=m.name,
    )


def fano_triple(m: FanoRankOne) -> WallJuppTriple:
    validate(m)
    if m.index is None:
        raise ModelError([("index", "the triple of a rank one Fano needs its index")], field="index")
    i = m.index
    p1 = i * i * m.degree - 48 // i
    return WallJuppTriple(CubicForm.from_monomials(1, {(0, 0, 0): m.degree}), (p1,), (i,), 4 - m.eX)


# -- dispatch -----------------------------------------------------------------------


def invariants(m: MfsDescription) -> InvariantRecord:
    if isinstance(m, FanoRankOne):
        return invariants_fano(m)
    if isinstance(m, DelPezzoFibration):
        return invariants_delpezzo(m)
    if isinstance(m, SmoothConicBundle):
        return invariants_smooth(m)
    if isinstance(m, SingularConicBundle):
        return invariants_singular(m)
    raise TypeError(f"not a description: {m!r}")


def triple(m: MfsDescription) -> WallJuppTriple:
    if isinstance(m, FanoRankOne):
        return fano_triple(m)
    if isinstance(m, DelPezzoFibration):
        return delpezzo_triple(m)
    if isinstance(m, SmoothConicBundle):
        return smooth_triple(m)
    if isinstance(m, SingularConicBundle):
        return singular_triple(m)
    raise TypeError(f"not a description: {m!r}")


def c1_vector(m: MfsDescription) -> Vector:
    """c1(X) in the basis used by ``triple``."""
    if isinstance(m, FanoRankOne):
        return (m.index,)
    if isinstance(m, DelPezzoFibration):
        return _delpezzo_numbers(m)["c1"]
    if isinstance(m, SmoothConicBundle):
        return (-2,) + tuple(a + b for a, b in zip(m.surface.c1Y, m.c1E))
    if isinstance(m, SingularConicBundle):
        return (1,) + m.surface.c1Y
    raise TypeError(f"not a description: {m!r}")


def hrr_residue(m: MfsDescription) -> int:
    """<c1^3> - <c1 p1> - 48 chi(O_X), computed from the triple; zero for valid data."""
    T = triple(m)
    c1 = c1_vector(m)
    chi = m.surface.chi if isinstance(m, (SmoothConicBundle, SingularConicBundle)) else 1
    return T.cubic.cube(c1) - T.p1(c1) - 48 * chi


# -- Hodge-theoretic feasibility ----------------------------------------------------------


@dataclass(frozen=True)
class HodgeReport:
    feasible: bool
    violations: tuple[str, ...]
    equality: bool
    primed_excluded: bool
    checked: bool

    def __bool__(self) -> bool:
        return self.feasible


def hodge_feasibility(r: InvariantRecord) -> HodgeReport:
    """e + b3 >= 6 chi for records over a surface, with equality only when b2 = 2.

    Also reports whether the primed branches of the surface comparison are
    excluded (b2 even, or e + b3 >= 12 chi).  Records over a point or a curve
    are not constrained.
    """
    lhs, rhs = r.eX + r.b3X, 6 * r.chiOX
    equality = lhs == rhs
    excluded = r.b2X % 2 == 0 or lhs >= 12 * r.chiOX
    if r.base_dim != 2:
        return HodgeReport(True, (), equality, excluded, False)
    bad = []
    if lhs < rhs:
        bad.append(f"e + b3 = {lhs} < 6 chi = {rhs}")
    elif equality and r.b2X != 2:
        bad.append(f"e + b3 = 6 chi = {rhs} requires b2 = 2, got {r.b2X}")
    return HodgeReport(not bad, tuple(bad), equality, excluded, True)


