"""Oriented diffeomorphism decisions on pairs of invariant records."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .lattice import BilinearLattice, IsometryMap, is_isometry, mat_vec
from .models import (
    DelPezzoFibration,
    InvariantRecord,
    SingularConicBundle,
    SmoothConicBundle,
    SurfaceData,
    invariants,
)


class Outcome(str, enum.Enum):
    DIFFEOMORPHIC = "Diffeomorphic"
    NOT_DIFFEOMORPHIC = "NotDiffeomorphic"
    UNDETERMINED = "UndeterminedFinite"


EXIT_CODES = {Outcome.DIFFEOMORPHIC: 0, Outcome.NOT_DIFFEOMORPHIC: 1, Outcome.UNDETERMINED: 2}


@dataclass(frozen=True)
class Reason:
    rule: str
    left: object
    right: object
    ok: bool

    def __str__(self) -> str:
        rel = "==" if self.ok else "!="
        return f"{self.rule}: {self.left} {rel} {self.right}"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    branch: str
    reasons: tuple[Reason, ...]
    notes: tuple[str, ...] = ()

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.outcome]


class _Trace:
    def __init__(self):
        self.reasons: list[Reason] = []
        self.notes: list[str] = []

    def check(self, rule: str, left, right, ok: bool | None = None) -> bool:
        ok = (left == right) if ok is None else ok
        self.reasons.append(Reason(rule, left, right, ok))
        return ok

    def verdict(self, outcome: Outcome, branch: str) -> Verdict:
        return Verdict(outcome, branch, tuple(self.reasons), tuple(self.notes))


def _enum_value(v):
    return getattr(v, "value", v)


def compare(a: InvariantRecord, b: InvariantRecord) -> Verdict:
    da, db = a.base_dim, b.base_dim
    if da == 0 and db == 0:
        return _compare_point(a, b)
    if da == 0 or db == 0:
        t = _Trace()
        t.check("b2", a.b2X, b.b2X)
        return t.verdict(Outcome.NOT_DIFFEOMORPHIC, "cross")
    if da == 1 and db == 1:
        return _compare_curve(a, b)
    if da == 2 and db == 2:
        return _compare_surface(a, b)
    return _compare_cross(a, b)


def _compare_point(a, b) -> Verdict:
    t = _Trace()
    ok = t.check("degree", a.degree, b.degree)
    ok = t.check("eX", a.eX, b.eX) and ok
    return t.verdict(Outcome.DIFFEOMORPHIC if ok else Outcome.NOT_DIFFEOMORPHIC, "degree")


def _compare_curve(a, b) -> Verdict:
    t = _Trace()
    no = t.verdict
    if not t.check("K", a.K, b.K):
        return no(Outcome.NOT_DIFFEOMORPHIC, "K-case")
    if a.K == 9:
        ok = t.check("x3_mod3", a.x3_mod3, b.x3_mod3)
    elif a.K == 8:
        ok = t.check("relK3", a.relK3, b.relK3)
    else:
        ok = t.check("d", a.d, b.d) and t.check("eX", a.eX, b.eX)
        if ok:
            if a.relK3 == b.relK3:
                t.check("relK3", a.relK3, b.relK3)
            else:
                target = -12 * (a.d - 1) * a.K // a.d
                ok = t.check("relK3+relK3'", a.relK3 + b.relK3, target)
    return t.verdict(Outcome.DIFFEOMORPHIC if ok else Outcome.NOT_DIFFEOMORPHIC, "K-case")


def _primed_allowed(r: InvariantRecord, t: _Trace) -> bool:
    lhs = r.eX + r.b3X
    if r.b2X % 2 == 0:
        t.notes.append(f"primed branch excluded: b2 = {r.b2X} is even")
        return False
    if lhs >= 12 * r.chiOX:
        t.notes.append(f"primed branch excluded: e + b3 = {lhs} >= 12 chi = {12 * r.chiOX}")
        return False
    return True


def _compare_surface(a, b) -> Verdict:
    t = _Trace()
    if not t.check("kind", a.fibration_kind, b.fibration_kind):
        return t.verdict(Outcome.NOT_DIFFEOMORPHIC, "kind")
    smooth = a.fibration_kind == "smooth"
    plain, primed = ("A", "A'") if smooth else ("B", "B'")
    ok = t.check("w2_type", _enum_value(a.w2_type), _enum_value(b.w2_type))
    ok = t.check("eX", a.eX, b.eX) and ok
    if not smooth:
        ok = t.check("b3", a.b3X, b.b3X) and ok
        ok = t.check("cf_divisibility", a.cf_divisibility, b.cf_divisibility) and ok
        ok = t.check("cf_type", _enum_value(a.cf_type), _enum_value(b.cf_type)) and ok
    if not ok:
        return t.verdict(Outcome.NOT_DIFFEOMORPHIC, plain)

    same = [("chi", a.chiOX, b.chiOX), ("K3", a.K3, b.K3)]
    if not smooth:
        same.append(("cf_norm", a.cf_norm, b.cf_norm))
    if all(x == y for _, x, y in same):
        for rule, x, y in same:
            t.check(rule, x, y)
        return _sufficient(a, t, plain)

    e, b3 = a.eX, a.b3X
    if smooth:
        chi_sum, k_sum = e // 4 if e % 4 == 0 else None, -12 * e
    else:
        chi_sum = (e - b3) // 4 if (e - b3) % 4 == 0 else None
        k_sum = -12 * e + 18 * b3
    ok = _primed_allowed(a, t) & _primed_allowed(b, t)
    ok = t.check("chi+chi'", a.chiOX + b.chiOX, chi_sum) and ok
    ok = t.check("K3+K3'", a.K3 + b.K3, k_sum) and ok
    if not smooth:
        ok = t.check("cf_norm+cf_norm'", a.cf_norm + b.cf_norm, 0) and ok
    if not ok:
        for rule, x, y in same:
            if x != y:
                t.check(rule, x, y)
        return t.verdict(Outcome.NOT_DIFFEOMORPHIC, plain)
    return _sufficient(a, t, primed)


def _sufficient(a: InvariantRecord, t: _Trace, branch: str) -> Verdict:
    if a.fibration_kind == "singular" and a.chiOX == 1 and a.b2X >= 10:
        t.notes.append(
            "exceptional range chi = 1 and b2 >= 10: the base form is (1) + q(-1) with q >= 9, "
            "where primitive vectors of given norm and type fall into several orbits; "
            "the conditions leave finitely many candidates (read as b2 >= 10, not b2 <= 10)"
        )
        return t.verdict(Outcome.UNDETERMINED, branch)
    return t.verdict(Outcome.DIFFEOMORPHIC, branch)


# -- the two spaces that fiber over both a curve and a surface -----------------------


@lru_cache(maxsize=1)
def canonical_records() -> dict[str, tuple[InvariantRecord, InvariantRecord]]:
    """(over a curve, over a surface) records of P^2 x P^1 and of the double cover X."""
    plane = SurfaceData(BilinearLattice(((1,),)), (3,))
    p2p1 = (
        invariants(DelPezzoFibration(K=9, twist=0, name="P2xP1 over P1")),
        invariants(SmoothConicBundle(plane, (0,), 0, name="P2xP1 over P2")),
    )
    xx = (
        invariants(DelPezzoFibration(K=2, d=1, relK3=6, eX=-34, name="X over P1")),
        invariants(SingularConicBundle(plane, (-8,), -8, name="X over P2")),
    )
    return {"P2xP1": p2p1, "X": xx}


def canonical_match(r: InvariantRecord) -> str | None:
    """Name of the canonical space whose same-dimension record is diffeomorphic to r."""
    for name, pair in canonical_records().items():
        ref = pair[0] if r.base_dim == 1 else pair[1]
        if compare(r, ref).outcome is Outcome.DIFFEOMORPHIC:
            return name
    return None


def _compare_cross(a, b) -> Verdict:
    t = _Trace()
    ma, mb = canonical_match(a), canonical_match(b)
    t.check("canonical", ma or "none", mb or "none", ok=ma is not None and ma == mb)
    if ma is not None and ma == mb:
        return t.verdict(Outcome.DIFFEOMORPHIC, "cross")
    return t.verdict(Outcome.NOT_DIFFEOMORPHIC, "cross")


# -- explicit isomorphisms of smooth conic bundles ----------------------------------


def smooth_isomorphism(m: SmoothConicBundle, m2: SmoothConicBundle, f: IsometryMap) -> tuple[tuple[int, ...], ...]:
    """The map H^2(X) -> H^2(X') induced by an (anti-)isometry f of the bases.

    f must send c1(E) to c1(E') mod 2.  Then u goes to sign*u' + v with
    2v = f(c1 E) - sign*c1 E', and y to f(y).  Whether the result transports
    the whole triple depends on the numerical conditions compared above.
    """
    L, L2 = m.surface.lattice, m2.surface.lattice
    if not is_isometry(f.matrix, L.gram, L2.gram, f.sign):
        raise ValueError("f is not an (anti-)isometry between the base forms")
    fc = mat_vec(f.matrix, m.c1E)
    diff = [a - f.sign * b for a, b in zip(fc, m2.c1E)]
    if any(x % 2 for x in diff):
        raise ValueError("f(c1 E) and c1 E' differ mod 2")
    v = [x // 2 for x in diff]
    r = L.rank
    phi = [[0] * (r + 1) for _ in range(r + 1)]
    phi[0][0] = f.sign
    for i in range(r):
        phi[i + 1][0] = v[i]
        for j in range(r):
            phi[i + 1][j + 1] = f.matrix[i][j]
    return tuple(tuple(row) for row in phi)
