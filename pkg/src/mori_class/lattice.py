"""Unimodular symmetric bilinear forms over the integers.

Vectors are plain tuples of ints in the lattice basis; matrices act on column
vectors, so ``f(v) = M @ v`` and the columns of ``M`` are the images of the
basis vectors.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

_MAX_ROOT_CANDIDATES = 2_000_000


class LatticeError(ValueError):
    """Malformed lattice, vector or map."""


class HypothesisError(LatticeError):
    """Inputs violate the preconditions of an isometry search."""


class BudgetExceeded(LatticeError):
    """A bounded enumeration ran past its node budget."""


class Parity(str, enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


class VectorType(str, enum.Enum):
    CHARACTERISTIC = "Characteristic"
    ORDINARY = "Ordinary"


# -- exact integer linear algebra -------------------------------------------


def integer_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _as_matrix(m: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in m)


def _signature(gram: Matrix) -> int:
    # Congruence diagonalization over Q; an all-zero diagonal is fixed by
    # replacing e_i with e_i + e_j for some nonzero off-diagonal entry.
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    while a:
        m = len(a)
        piv = next((i for i in range(m) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(m) for j in range(i + 1, m) if a[i][j] != 0), None)
            if pair is None:
                raise LatticeError("degenerate form")
            i, j = pair
            for k in range(m):
                a[i][k] += a[j][k]
            for k in range(m):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in range(m) if k != piv]
        a = [[a[r][c] - a[r][piv] * a[piv][c] / p for c in rest] for r in rest]
    return pos - neg


# -- the lattice -------------------------------------------------------------

E8_GRAM: Matrix = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


@dataclass(frozen=True)
class BilinearLattice:
    """A unimodular symmetric integer form given by its Gram matrix."""

    gram: Matrix
    form_label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        gram = _as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0:
            raise LatticeError("lattice rank must be positive")
        if any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix is not square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix is not symmetric")
        if abs(integer_det(gram)) != 1:
            raise LatticeError(f"Gram matrix has determinant {integer_det(gram)}, not +-1")

    # constructors

    @classmethod
    def diagonal(cls, p: int, q: int) -> "BilinearLattice":
        """p(+1) + q(-1)."""
        n = p + q
        gram = tuple(
            tuple((1 if i < p else -1) if i == j else 0 for j in range(n)) for i in range(n)
        )
        return cls(gram, form_label=f"{p}(+1)+{q}(-1)")

    @classmethod
    def hyperbolic(cls, r: int = 1) -> "BilinearLattice":
        return direct_sum(*[cls(((0, 1), (1, 0)), form_label="H")] * r)

    @classmethod
    def e8(cls, sign: int = 1) -> "BilinearLattice":
        return cls(tuple(tuple(sign * x for x in row) for row in E8_GRAM),
                   form_label="E8" if sign > 0 else "-E8")

    @classmethod
    def standard(cls, rank: int, signature: int, parity: Parity | str) -> "BilinearLattice":
        """The standard indefinite (or diagonal) form with the given invariants."""
        if (rank - signature) % 2 or abs(signature) > rank:
            raise LatticeError(f"no form of rank {rank} and signature {signature}")
        if Parity(parity) is Parity.ODD:
            return cls.diagonal((rank + signature) // 2, (rank - signature) // 2)
        if signature % 8:
            raise LatticeError("even unimodular forms need signature divisible by 8")
        s = signature // 8
        r = (rank - 8 * abs(s)) // 2
        if r < 0 or (r == 0 and s == 0):
            raise LatticeError(f"no even form of rank {rank} and signature {signature}")
        parts = [cls.hyperbolic(r)] if r else []
        parts += [cls.e8(1 if s > 0 else -1)] * abs(s)
        return direct_sum(*parts)

    # invariants

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def signature(self) -> int:
        return _signature(self.gram)

    @cached_property
    def parity(self) -> Parity:
        # v.v = sum v_i^2 g_ii (mod 2), so the diagonal decides.
        return Parity.EVEN if all(self.gram[i][i] % 2 == 0 for i in range(self.rank)) else Parity.ODD

    @property
    def is_definite(self) -> bool:
        return abs(self.signature) == self.rank

    def standard_label(self) -> str:
        p, q = (self.rank + self.signature) // 2, (self.rank - self.signature) // 2
        if self.parity is Parity.ODD:
            return f"{p}(+1)+{q}(-1)"
        s = self.signature // 8
        r = (self.rank - 8 * abs(s)) // 2
        e8 = "E8" if s > 0 else "-E8"
        return " + ".join(x for x in (f"{r}H" if r else "", f"{abs(s)}{e8}" if s else "") if x)

    def is_diagonal_pm1(self) -> bool:
        g = self.gram
        return all(g[i][j] == 0 for i in range(self.rank) for j in range(self.rank) if i != j)

    def pair(self, a: Sequence[int], b: Sequence[int]) -> int:
        self._check(a)
        self._check(b)
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(self.rank) if a[i] for j in range(self.rank))

    def dual(self, v: Sequence[int]) -> Vector:
        """Coordinates of the functional ``w -> v . w``, i.e. ``G v``."""
        self._check(v)
        return mat_vec(self.gram, v)

    def _check(self, v: Sequence[int]) -> None:
        if len(v) != self.rank:
            raise LatticeError(f"vector of length {len(v)} in a rank-{self.rank} lattice")


def direct_sum(*parts: BilinearLattice) -> BilinearLattice:
    n = sum(p.rank for p in parts)
    gram = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                gram[off + i][off + j] = p.gram[i][j]
        off += p.rank
    labels = [p.form_label for p in parts]
    label = " + ".join(labels) if all(labels) else None
    return BilinearLattice(_as_matrix(gram), form_label=label)


# -- vector invariants ---------------------------------------------------------


def norm(L: BilinearLattice, v: Sequence[int]) -> int:
    return L.pair(v, v)


def divisibility(v: Sequence[int]) -> int:
    d = reduce(math.gcd, (abs(int(x)) for x in v), 0)
    if d == 0:
        raise LatticeError("divisibility of the zero vector is undefined")
    return d


def primitive_part(v: Sequence[int]) -> Vector:
    d = divisibility(v)
    return tuple(int(x) // d for x in v)


def is_characteristic(L: BilinearLattice, v: Sequence[int]) -> bool:
    """``v.b == b.b (mod 2)`` for every b, without passing to the primitive part."""
    gv = L.dual(v)
    return all((gv[i] - L.gram[i][i]) % 2 == 0 for i in range(L.rank))


def vector_type(L: BilinearLattice, v: Sequence[int]) -> VectorType:
    """Type of ``v``: that of its primitive part."""
    if is_characteristic(L, primitive_part(v)):
        return VectorType.CHARACTERISTIC
    return VectorType.ORDINARY


def parity(L: BilinearLattice) -> Parity:
    return L.parity


def signature(L: BilinearLattice) -> int:
    return L.signature


# -- isometries ------------------------------------------------------------------


@dataclass(frozen=True)
class IsometryMap:
    """An integral map with ``M^T G M = sign * G``."""

    matrix: Matrix
    sign: int = 1

    def apply(self, v: Sequence[int]) -> Vector:
        return mat_vec(self.matrix, v)

    def then(self, other: "IsometryMap") -> "IsometryMap":
        """``other`` after ``self``."""
        return IsometryMap(mat_mul(other.matrix, self.matrix), self.sign * other.sign)

    def is_valid_for(self, L: BilinearLattice) -> bool:
        return is_isometry(self.matrix, L.gram, L.gram, self.sign)


def is_isometry(m: Sequence[Sequence[int]], gram: Matrix, gram2: Matrix, sign: int = 1) -> bool:
    """True if ``m`` maps the form ``gram`` to ``sign * gram2`` and is unimodular."""
    mt = transpose(m)
    lhs = mat_mul(mat_mul(mt, gram2), m)
    if any(lhs[i][j] != sign * gram[i][j] for i in range(len(gram)) for j in range(len(gram))):
        return False
    return abs(integer_det(m)) == 1


def _reflection_matrix(L: BilinearLattice, u: Sequence[int]) -> Matrix:
    nu = norm(L, u)
    if nu not in (-2, -1, 1, 2):
        raise LatticeError(f"reflection needs a root of norm +-1 or +-2, got norm {nu}")
    gu = L.dual(u)
    c = 2 // nu  # 2/nu is an integer for these norms
    n = L.rank
    return tuple(tuple(int(i == j) - c * u[i] * gu[j] for j in range(n)) for i in range(n))


def reflection(L: BilinearLattice, u: Sequence[int]) -> IsometryMap:
    """sigma_u(v) = v + (v.u) u for u.u = -2, and v - (v.u) u for u.u = +2."""
    if norm(L, u) not in (-2, 2):
        raise LatticeError(f"reflection vector must have norm +-2, got {norm(L, u)}")
    return IsometryMap(_reflection_matrix(L, u))


def inverse_isometry(L: BilinearLattice, f: IsometryMap) -> IsometryMap:
    """Inverse of an isometry of L: ``G^-1 M^T G``."""
    g = L.gram
    ginv = _unimodular_inverse(g)
    return IsometryMap(mat_mul(mat_mul(ginv, transpose(f.matrix)), g), f.sign)


def _unimodular_inverse(m: Matrix) -> Matrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = tuple(tuple(int(x) for x in row[n:]) for row in a)
    if any(x.denominator != 1 for row in a for x in row[n:]):
        raise LatticeError("matrix is not unimodular")
    return out


@lru_cache(maxsize=128)
def roots(L: BilinearLattice, bound: int = 1, norms: tuple[int, ...] = (-2, -1, 1, 2)) -> tuple[Vector, ...]:
    """Vectors with coordinates in [-bound, bound] whose norm lies in ``norms``.

    One representative per +-pair (first nonzero coordinate positive).
    """
    n = L.rank
    if (2 * bound + 1) ** n > _MAX_ROOT_CANDIDATES:
        raise BudgetExceeded(f"root enumeration with bound {bound} in rank {n} is too large")
    g = np.array(L.gram, dtype=np.int64)
    cand = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    nz = cand != 0
    first = cand[np.arange(len(cand)), nz.argmax(axis=1)]
    cand = cand[nz.any(axis=1) & (first > 0)]
    norms_arr = np.einsum("ki,ij,kj->k", cand, g, cand)
    keep = np.isin(norms_arr, np.array(norms))
    return tuple(tuple(int(x) for x in row) for row in cand[keep])


def signed_permutations(L: BilinearLattice) -> tuple[Matrix, ...]:
    """-I, single sign flips and (signed) transpositions that preserve the form."""
    n = L.rank
    out = [tuple(tuple(-int(i == j) for j in range(n)) for i in range(n))]
    cands = []
    for i in range(n):
        m = [list(r) for r in identity(n)]
        m[i][i] = -1
        cands.append(m)
    for i, j in itertools.combinations(range(n), 2):
        for s in (1, -1):
            m = [list(r) for r in identity(n)]
            m[i][i] = m[j][j] = 0
            m[j][i] = m[i][j] = s
            cands.append(m)
    for m in cands:
        mm = _as_matrix(m)
        if is_isometry(mm, L.gram, L.gram):
            out.append(mm)
    return tuple(out)


def _check_pair(L: BilinearLattice, v: Sequence[int], target: Sequence[int], mod: int | None) -> None:
    L._check(v)
    L._check(target)
    if not any(v) or not any(target):
        raise HypothesisError("vectors must be nonzero")
    if divisibility(v) != 1 or divisibility(target) != 1:
        raise HypothesisError("vectors must be primitive")
    nv, nt = norm(L, v), norm(L, target)
    if (nv != nt) if mod is None else ((nv - nt) % mod):
        raise HypothesisError(f"norms differ: {nv} vs {nt}" + (f" (mod {mod})" if mod else ""))
    if L.parity is Parity.ODD and vector_type(L, v) != vector_type(L, target):
        raise HypothesisError("vector types differ in an odd lattice")


def transitivity_known(L: BilinearLattice) -> bool:
    """Transitivity on primitive vectors of given norm and type is known here.

    Only the case rank - |signature| >= 4 qualifies.  The small forms
    (1)+q(-1) are not included: for q = 5 the primitive ordinary vectors
    (3; 2, 0, 0, 0, 0) and (3; 1, 1, 1, 1, 0) of norm 5 lie in different
    orbits, since their orthogonal complements contain 8 and 2 vectors of
    norm -1 respectively.
    """
    return L.rank - abs(L.signature) >= 4


@dataclass(frozen=True)
class NotFound:
    """An isometry search ended without a hit. Never a proof of non-existence."""

    reason: str
    nodes: int
    budget_exhausted: bool


def _search_generators(L: BilinearLattice, root_bound: int) -> list[Matrix]:
    gens = [_reflection_matrix(L, u) for u in roots(L, root_bound)]
    gens += list(signed_permutations(L))
    gens += list(eichler_transvections(L))
    return list(dict.fromkeys(gens))


def wall_isometry(
    L: BilinearLattice,
    v: Sequence[int],
    target: Sequence[int],
    *,
    root_bound: int = 1,
    vector_bound: int | None = None,
    budget: int = 200_000,
) -> IsometryMap | NotFound:
    """Search for an isometry f of L with f(v) = target.

    Breadth-first search over vectors reachable from ``v`` by reflections in
    bounded roots of norm +-1, +-2, form-preserving signed permutations and
    Eichler transvections.
    Intermediate vectors are kept inside the sup-norm box ``vector_bound``.
    """
    v, target = tuple(v), tuple(target)
    _check_pair(L, v, target, None)
    n = L.rank
    if v == target:
        return IsometryMap(identity(n))
    if vector_bound is None:
        vector_bound = max(max(map(abs, v)), max(map(abs, target))) + 2
    gens = _search_generators(L, root_bound)
    parents: dict[Vector, tuple[Vector, int] | None] = {v: None}
    queue = deque([v])
    while queue:
        w = queue.popleft()
        for gi, m in enumerate(gens):
            w2 = mat_vec(m, w)
            if w2 in parents or max(map(abs, w2)) > vector_bound:
                continue
            parents[w2] = (w, gi)
            if w2 == target:
                return IsometryMap(_compose_path(parents, gens, w2, n))
            if len(parents) >= budget:
                return NotFound("node budget exhausted", len(parents), True)
            queue.append(w2)
    return NotFound("orbit closed inside the search box", len(parents), False)


def _compose_path(parents, gens, end, n) -> Matrix:
    m = identity(n)
    node = end
    while parents[node] is not None:
        prev, gi = parents[node]
        m = mat_mul(m, gens[gi])
        node = prev
    return m


# -- mod 2 ----------------------------------------------------------------------------


def mod2(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(x) % 2 for x in v)


def alpha_mod4(L: BilinearLattice, x: Sequence[int]) -> int:
    """v.v mod 4 for any integral lift v of the mod-2 class x."""
    L._check(x)
    bits = mod2(x)
    if not any(bits):
        raise LatticeError("alpha is undefined on the zero class")
    return norm(L, bits) % 4


def _bits_to_int(bits: Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b % 2)


def _int_to_bits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def _diag_root_lift(L: BilinearLattice, w: int) -> Vector | None:
    """A norm +-2 lift of the mod-2 class w in a diagonal +-1 lattice."""
    n = L.rank
    groups: dict[tuple[int, int], list[int]] = {(s, b): [] for s in (1, -1) for b in (0, 1)}
    for i in range(n):
        groups[(L.gram[i][i], (w >> i) & 1)].append(i)
    po, no, pz, nz = groups[(1, 1)], groups[(-1, 1)], groups[(1, 0)], groups[(-1, 0)]
    base = len(po) - len(no)
    # odd coordinates are 1 or 3 (adds 8), even ones 0 or 2 (adds 4)
    for a in range(len(po) + 1):
        for b in range(len(no) + 1):
            for c in range(len(pz) + 1):
                for d in range(len(nz) + 1):
                    if base + 8 * a - 8 * b + 4 * c - 4 * d in (2, -2):
                        u = [0] * n
                        for idx, k in enumerate(po):
                            u[k] = 3 if idx < a else 1
                        for idx, k in enumerate(no):
                            u[k] = 3 if idx < b else 1
                        for k in pz[:c] + nz[:d]:
                            u[k] = 2
                        return tuple(u)
    return None


_EICHLER_MAX_RANK = 8


@lru_cache(maxsize=64)
def eichler_transvections(L: BilinearLattice, bound: int = 1) -> tuple[Matrix, ...]:
    """Isometries x -> x + (x.e)m - (x.m)e - (m.m/2)(x.e)e.

    e runs over primitive isotropic vectors and m over vectors orthogonal to
    e with even norm, both with coordinates in [-bound, bound].  These are
    not products of reflections in general and carry the transitivity of
    indefinite forms that contain a hyperbolic plane.
    """
    n = L.rank
    if n > _EICHLER_MAX_RANK or n < 2:
        return ()
    g = np.array(L.gram, dtype=np.int64)
    box = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    box = box[np.any(box != 0, axis=1)]
    norms = np.einsum("ki,ij,kj->k", box, g, box)
    iso = [tuple(int(x) for x in row) for row in box[norms == 0] if math.gcd(*map(abs, row.tolist())) == 1]
    even = box[norms % 2 == 0]
    out: dict[Matrix, None] = {}
    eye = np.eye(n, dtype=np.int64)
    for e in iso:
        ev = np.array(e, dtype=np.int64)
        ge = g @ ev
        ms = even[(even @ ge) == 0]
        for m in ms:
            gm = g @ m
            half = int(m @ gm) // 2
            mat = eye + np.outer(m, ge) - np.outer(ev, gm) - half * np.outer(ev, ge)
            out[_as_matrix(mat.tolist())] = None
    return tuple(out)


def _mod2_columns(m: Matrix) -> tuple[int, ...]:
    n = len(m)
    return tuple(_bits_to_int([m[r][c] for r in range(n)]) for c in range(n))


def _mod2_generators(L: BilinearLattice) -> list[tuple[tuple[int, ...], Matrix]]:
    """Integral isometries with distinct, nontrivial actions on L/2L.

    Each entry is ``(columns mod 2 as bitmasks, integer matrix)``.
    """
    n = L.rank
    limit_weight = n if n <= 8 else 7
    lifts: dict[int, Vector] = {}
    if L.is_diagonal_pm1():
        for w in range(1, 1 << n):
            if bin(w).count("1") > limit_weight:
                continue
            u = _diag_root_lift(L, w)
            if u is not None:
                lifts[w] = u
    else:
        for bound in (1, 2):
            try:
                rs = roots(L, bound, (-2, 2))
            except BudgetExceeded:
                break
            for u in rs:
                lifts.setdefault(_bits_to_int(mod2(u)), u)
    mats = [_reflection_matrix(L, u) for _, u in sorted(lifts.items())]
    mats += list(signed_permutations(L))
    mats += list(eichler_transvections(L))
    trivial = tuple(1 << i for i in range(n))
    gens: dict[tuple[int, ...], Matrix] = {}
    for m in mats:
        cols = _mod2_columns(m)
        if cols != trivial:
            gens.setdefault(cols, m)
    return list(gens.items())


def _apply_mod2(cols: tuple[int, ...], x: int) -> int:
    y = 0
    i = 0
    while x:
        if x & 1:
            y ^= cols[i]
        x >>= 1
        i += 1
    return y


def _mod2_reduction_diag(q: int, x: Vector) -> tuple[Vector, Matrix]:
    """Reduce an ordinary class of (1)+q(-1), q >= 4, to (0; 1^m, 0...) with m <= 4.

    Uses the explicit reflections sigma_u with u = (1; 1,1,1, 0...) and
    u = (2; 1,1,1,1,1, 0..., 1) interleaved with coordinate permutations of
    the negative part.  Returns the canonical class and the integer isometry.
    """
    n = q + 1
    L = BilinearLattice.diagonal(1, q)
    total = identity(n)
    cur = mod2(x)

    def apply(m: Matrix):
        nonlocal total, cur
        total = mat_mul(m, total)
        cur = mod2(mat_vec(m, cur))

    def sort_negative():
        ones = [i for i in range(1, n) if cur[i]]
        zeros = [i for i in range(1, n) if not cur[i]]
        order = [0] + ones + zeros  # new position k takes old coordinate order[k]
        perm = [[0] * n for _ in range(n)]
        for k, old in enumerate(order):
            perm[k][old] = 1
        apply(_as_matrix(perm))

    for _ in range(4 * n):
        sort_negative()
        eps, m = cur[0], sum(cur[1:])
        if eps == 0 and 1 <= m <= 4:
            return cur, total
        if eps == 1 and m == q:
            raise HypothesisError("characteristic class has no reduction")
        if eps == 1 and m == 0:
            u = (1, 1, 1, 1) + (0,) * (n - 4)
        elif eps == 1 and m == 1:
            u = (1, 0, 1, 1, 1) + (0,) * (n - 5)
        elif eps == 1:
            u = (1, 1, 1) + (0,) * (n - 4) + (1,)
        elif m < q:
            u = (2, 1, 1, 1, 1, 1) + (0,) * (n - 7) + (1,)
        else:
            u = (1, 1, 1, 1) + (0,) * (n - 4)
        apply(_reflection_matrix(L, u))
    raise LatticeError("mod-2 reduction did not terminate")  # pragma: no cover


def mod2_isometry(
    L: BilinearLattice,
    v: Sequence[int],
    target: Sequence[int],
    *,
    budget: int = 1 << 16,
) -> IsometryMap | NotFound:
    """An isometry f of L with f(v) - target in 2L.

    For (1)+q(-1) with q >= 4 and ordinary classes this composes explicit
    reflection sequences; otherwise it searches the (finite) orbit of
    ``v mod 2`` under reflections, signed permutations and Eichler
    transvections.
    """
    v, target = tuple(v), tuple(target)
    _check_pair(L, v, target, 4)
    n = L.rank
    x, x2 = mod2(v), mod2(target)
    if x == x2:
        return IsometryMap(identity(n))
    p, q = (L.rank + L.signature) // 2, (L.rank - L.signature) // 2
    if (
        L.is_diagonal_pm1()
        and p == 1
        and q >= 4
        and L.gram[0][0] == 1
        and not is_characteristic(L, v)
    ):
        c1, m1 = _mod2_reduction_diag(q, x)
        c2, m2 = _mod2_reduction_diag(q, x2)
        if c1 == c2:
            f = IsometryMap(m1).then(inverse_isometry(L, IsometryMap(m2)))
            return f
    return _mod2_bfs(L, x, x2, budget)


def _mod2_bfs(L: BilinearLattice, x: Vector, x2: Vector, budget: int) -> IsometryMap | NotFound:
    n = L.rank
    gens = _mod2_generators(L)
    start, goal = _bits_to_int(x), _bits_to_int(x2)
    parents: dict[int, tuple[int, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for gi, (cols, _) in enumerate(gens):
            t = _apply_mod2(cols, s)
            if t in parents:
                continue
            parents[t] = (s, gi)
            if t == goal:
                m = identity(n)
                node = t
                while parents[node] is not None:
                    prev, g = parents[node]
                    m = mat_mul(m, gens[g][1])
                    node = prev
                return IsometryMap(m)
            if len(parents) >= budget:
                return NotFound("node budget exhausted", len(parents), True)
            queue.append(t)
    return NotFound("mod-2 orbit closed without reaching the target", len(parents), False)


def explicit_mod2_step(q: int, case: int, count: int) -> tuple[Vector, Vector, Vector]:
    """The three explicit reflections on (1)+q(-1).

    Returns ``(x, u, image)`` where ``image`` is ``sigma_u(x) mod 2`` with the
    negative part sorted so the 1's come first.

    case 1: x = (1; 1, 0...),            u = (1; 0,1,1,1, 0...)
    case 2: x = (1; 1^count, 0..., 0),   u = (1; 1,1, 0..., 1)
    case 3: x = (0; 1^count, 0..., 0),   u = (2; 1^5, 0..., 1)
    """
    L = BilinearLattice.diagonal(1, q)
    if case == 1:
        x = (1, 1) + (0,) * (q - 1)
        u = (1, 0, 1, 1, 1) + (0,) * (q - 4)
    elif case == 2:
        if not 2 <= count < q:
            raise HypothesisError("case 2 needs 2 <= k < q")
        x = (1,) + (1,) * count + (0,) * (q - count)
        u = (1, 1, 1) + (0,) * (q - 3) + (1,)
    elif case == 3:
        if not 5 <= count < q:
            raise HypothesisError("case 3 needs 5 <= l < q")
        x = (0,) + (1,) * count + (0,) * (q - count)
        u = (2, 1, 1, 1, 1, 1) + (0,) * (q - 6) + (1,)
    else:
        raise ValueError(f"unknown case {case}")
    img = mod2(reflection(L, u).apply(x))
    neg = sorted(img[1:], reverse=True)
    return x, u, (img[0],) + tuple(neg)


# -- orbit enumeration -------------------------------------------------------------


def orbit_enumerate(
    L: BilinearLattice,
    v: Sequence[int],
    coord_bound: int,
    *,
    root_bound: int = 1,
    search_bound: int | None = None,
    budget: int = 5_000_000,
) -> list[Vector]:
    """Orbit of v under reflections in bounded roots, clipped to the box.

    Roots have coordinates in [-root_bound, root_bound] and norm +-1 or +-2.
    The walk may pass through vectors with coordinates up to ``search_bound``
    (default ``coord_bound + 1``); only the vectors inside
    [-coord_bound, coord_bound] are returned, sorted lexicographically.
    """
    v = tuple(int(x) for x in v)
    L._check(v)
    if max(map(abs, v)) > coord_bound:
        raise LatticeError("starting vector lies outside the box")
    box = coord_bound
    coord_bound = box + 1 if search_bound is None else max(search_bound, box)
    n = L.rank
    gens = np.array([_reflection_matrix(L, u) for u in roots(L, root_bound)], dtype=np.int64)
    if len(gens) == 0:
        return [v]
    side = 2 * coord_bound + 1
    weights = side ** np.arange(n, dtype=np.int64)
    dense = side**n <= 20_000_000
    if dense:
        seen = np.zeros(side**n, dtype=bool)
    else:
        seen_set: set[int] = set()
    frontier = np.array([v], dtype=np.int64)
    code0 = int(((frontier + coord_bound) @ weights)[0])
    if dense:
        seen[code0] = True
    else:
        seen_set.add(code0)
    found = [frontier]
    total = 1
    chunk = max(1, 400_000 // (len(gens) * n))
    while len(frontier):
        nxt = []
        for start in range(0, len(frontier), chunk):
            block = frontier[start : start + chunk]
            imgs = np.einsum("gij,fj->fgi", gens, block).reshape(-1, n)
            imgs = imgs[np.all(np.abs(imgs) <= coord_bound, axis=1)]
            codes = np.unique((imgs + coord_bound) @ weights)
            if dense:
                codes = codes[~seen[codes]]
                seen[codes] = True
            else:
                codes = np.array([c for c in codes.tolist() if c not in seen_set], dtype=np.int64)
                seen_set.update(codes.tolist())
            if len(codes):
                nxt.append(codes)
        if not nxt:
            break
        codes = np.unique(np.concatenate(nxt))
        total += len(codes)
        if total > budget:
            raise BudgetExceeded(f"orbit exceeded {budget} vectors")
        frontier = _decode(codes, side, n) - coord_bound
        found.append(frontier)
    allv = np.concatenate(found)
    allv = allv[np.all(np.abs(allv) <= box, axis=1)]
    return sorted(tuple(int(x) for x in row) for row in allv)


def _decode(codes: np.ndarray, side: int, n: int) -> np.ndarray:
    out = np.empty((len(codes), n), dtype=np.int64)
    c = codes.copy()
    for i in range(n):
        out[:, i] = c % side
        c //= side
    return out


def box_vectors(n: int, bound: int) -> np.ndarray:
    """All integer vectors of length n with coordinates in [-bound, bound]."""
    return np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
