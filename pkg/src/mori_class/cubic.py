"""Symmetric trilinear forms on H^2 and the Wall-Jupp triple.

A triple (cubic form, p1 pairing, w2, b3) is a complete oriented
diffeomorphism invariant of a simply connected 6-manifold with torsion-free
homology.  ``equivalent_bounded`` searches for an isomorphism between two
triples among integer matrices with small entries.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Mapping, Sequence

from .lattice import LatticeError, integer_det, mat_vec

Vector = tuple[int, ...]


class CubicError(ValueError):
    pass


@dataclass(frozen=True)
class CubicForm:
    """Fully symmetric integer tensor ``mu[i][j][k]``."""

    tensor: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        t = tuple(tuple(tuple(int(x) for x in row) for row in mat) for mat in self.tensor)
        object.__setattr__(self, "tensor", t)
        n = len(t)
        if n == 0 or any(len(m) != n or any(len(r) != n for r in m) for m in t):
            raise CubicError("tensor must be an n x n x n array with n >= 1")
        for i, j, k in itertools.product(range(n), repeat=3):
            v = t[i][j][k]
            if any(t[a][b][c] != v for a, b, c in itertools.permutations((i, j, k))):
                raise CubicError(f"tensor is not symmetric at {(i, j, k)}")

    @classmethod
    def from_monomials(cls, rank: int, values: Mapping[tuple[int, int, int], int]) -> "CubicForm":
        """Build from values on sorted index triples; missing triples are zero."""
        t = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
        for key, v in values.items():
            for a, b, c in set(itertools.permutations(key)):
                t[a][b][c] = int(v)
        return cls(tuple(tuple(tuple(r) for r in m) for m in t))

    @property
    def rank(self) -> int:
        return len(self.tensor)

    def evaluate(self, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> int:
        n = self.rank
        if not len(a) == len(b) == len(c) == n:
            raise CubicError(f"vectors must have length {n}")
        t = self.tensor
        total = 0
        for i in range(n):
            if a[i]:
                ti = t[i]
                for j in range(n):
                    if b[j]:
                        total += a[i] * b[j] * sum(ti[j][k] * c[k] for k in range(n))
        return total

    def cube(self, a: Sequence[int]) -> int:
        return self.evaluate(a, a, a)

    def pullback(self, phi: Sequence[Sequence[int]]) -> "CubicForm":
        """The form ``(a, b, c) -> self(phi a, phi b, phi c)``."""
        n = self.rank
        cols = [tuple(phi[r][i] for r in range(n)) for i in range(n)]
        vals = {
            (i, j, k): self.evaluate(cols[i], cols[j], cols[k])
            for i in range(n)
            for j in range(i, n)
            for k in range(j, n)
        }
        return CubicForm.from_monomials(n, vals)

    def entries(self) -> list[int]:
        n = self.rank
        return [self.tensor[i][j][k] for i in range(n) for j in range(i, n) for k in range(j, n)]


def evaluate(C: CubicForm, a, b, c) -> int:
    return C.evaluate(a, b, c)


@dataclass(frozen=True)
class WallJuppTriple:
    cubic: CubicForm
    p1_pairing: Vector
    w2: Vector
    b3: int

    def __post_init__(self):
        object.__setattr__(self, "p1_pairing", tuple(int(x) for x in self.p1_pairing))
        object.__setattr__(self, "w2", tuple(int(x) % 2 for x in self.w2))
        n = self.cubic.rank
        if len(self.p1_pairing) != n or len(self.w2) != n:
            raise CubicError("p1 pairing and w2 must have the cubic form's rank")
        if self.b3 < 0 or self.b3 % 2:
            raise CubicError(f"b3 must be a nonnegative even integer, got {self.b3}")

    @property
    def rank(self) -> int:
        return self.cubic.rank

    def p1(self, a: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.p1_pairing, a))


def triple_transport_check(phi: Sequence[Sequence[int]], T: WallJuppTriple, T2: WallJuppTriple) -> bool:
    """Does ``phi`` (columns = images of basis vectors) carry T onto T2?"""
    n = T.rank
    if T2.rank != n or len(phi) != n or any(len(r) != n for r in phi):
        raise CubicError("ranks do not match")
    if abs(integer_det(phi)) != 1:
        raise LatticeError("phi is not unimodular")
    if T.b3 != T2.b3:
        return False
    cols = [tuple(phi[r][i] for r in range(n)) for i in range(n)]
    if any(T2.p1(cols[i]) != T.p1_pairing[i] for i in range(n)):
        return False
    if tuple(x % 2 for x in mat_vec(phi, T.w2)) != T2.w2:
        return False
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                if T2.cubic.evaluate(cols[i], cols[j], cols[k]) != T.cubic.tensor[i][j][k]:
                    return False
    return True


# -- invariants used as non-equivalence witnesses ------------------------------

_DISTRIBUTION_LIMIT = 20_000


def _gcd(values) -> int:
    return reduce(math.gcd, (abs(v) for v in values), 0)


@lru_cache(maxsize=256)
def _distribution(T: WallJuppTriple, m: int) -> Counter:
    n = T.rank
    out: Counter = Counter()
    w2 = T.w2
    for x in itertools.product(range(m), repeat=n):
        key = (T.cubic.cube(x) % m, T.p1(x) % m)
        if m == 2:
            key += (T.cubic.evaluate(x, x, w2) % 2, tuple(x) == w2)
        out[key] += 1
    return out


def _profile_entries(T: WallJuppTriple):
    """(name, thunk) pairs, cheapest first."""
    yield "rank", lambda: T.rank
    yield "b3", lambda: T.b3
    yield "cubic_gcd", lambda: _gcd(T.cubic.entries())
    yield "p1_gcd", lambda: _gcd(T.p1_pairing)
    yield "w2_zero", lambda: not any(T.w2)
    for m in (2, 3, 4):
        if m**T.rank <= _DISTRIBUTION_LIMIT:
            yield f"mod{m}_distribution", lambda m=m: _distribution(T, m)


def invariant_profile(T: WallJuppTriple) -> dict:
    """Quantities preserved by every isomorphism of triples."""
    return {key: value() for key, value in _profile_entries(T)}


def distinguishing_invariant(T: WallJuppTriple, T2: WallJuppTriple) -> tuple[str, object, object] | None:
    """The first profile entry on which T and T2 differ, computed lazily."""
    other = dict(_profile_entries(T2))
    for key, value in _profile_entries(T):
        if key not in other:
            continue
        va, vb = value(), other[key]()
        if va != vb:
            if isinstance(va, Counter):
                va, vb = sorted(va.items()), sorted(vb.items())
            return key, va, vb
    return None


# -- bounded search --------------------------------------------------------------


class Equivalence(str, enum.Enum):
    FOUND = "found"
    INCONCLUSIVE = "inconclusive"
    DISTINCT = "provably_distinct"


@dataclass(frozen=True)
class EquivalenceResult:
    status: Equivalence
    phi: tuple[tuple[int, ...], ...] | None = None
    witness: tuple[str, object, object] | None = None
    nodes: int = 0
    budget_exhausted: bool = False
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.status is Equivalence.FOUND


def equivalent_bounded(
    T: WallJuppTriple,
    T2: WallJuppTriple,
    entry_bound: int = 3,
    budget: int = 2_000_000,
) -> EquivalenceResult:
    """Search integer matrices with entries in [-entry_bound, entry_bound].

    Columns are chosen one at a time in lexicographic order, pruning on the
    p1 pairing and on every cubic value the chosen columns already determine;
    the first complete hit is the lexicographically least one.
    """
    witness = distinguishing_invariant(T, T2)
    if witness is not None:
        return EquivalenceResult(Equivalence.DISTINCT, witness=witness, detail=f"{witness[0]} differs")
    n = T.rank
    B = entry_bound
    box = list(itertools.product(range(-B, B + 1), repeat=n))
    # candidates for column j: p1 and diagonal cube already fixed
    cands = [
        [c for c in box if any(c) and T2.p1(c) == T.p1_pairing[j] and T2.cubic.cube(c) == T.cubic.tensor[j][j][j]]
        for j in range(n)
    ]
    t = T.cubic.tensor
    C2 = T2.cubic
    nodes = 0
    cols: list[Vector] = []

    def consistent(j: int, c: Vector) -> bool:
        for a in range(j + 1):
            ca = c if a == j else cols[a]
            for b in range(a, j + 1):
                cb = c if b == j else cols[b]
                if a == b == j:
                    continue
                if C2.evaluate(ca, cb, c) != t[a][b][j]:
                    return False
        return True

    def dfs(j: int):
        nonlocal nodes
        if j == n:
            phi = tuple(tuple(cols[i][r] for i in range(n)) for r in range(n))
            if abs(integer_det(phi)) == 1 and tuple(x % 2 for x in mat_vec(phi, T.w2)) == T2.w2:
                return phi
            return None
        for c in cands[j]:
            nodes += 1
            if nodes > budget:
                raise _Budget
            if consistent(j, c):
                cols.append(c)
                hit = dfs(j + 1)
                if hit is not None:
                    return hit
                cols.pop()
        return None

    try:
        phi = dfs(0)
    except _Budget:
        return EquivalenceResult(Equivalence.INCONCLUSIVE, nodes=nodes, budget_exhausted=True,
                                 detail="node budget exhausted")
    if phi is not None:
        return EquivalenceResult(Equivalence.FOUND, phi=phi, nodes=nodes)
    return EquivalenceResult(Equivalence.INCONCLUSIVE, nodes=nodes,
                             detail=f"no isomorphism with entries bounded by {B}")


class _Budget(Exception):
    pass
