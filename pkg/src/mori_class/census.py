"""Enumerate records inside integer bounds and group them into diffeomorphism classes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .classifier import Outcome, compare
from .lattice import BilinearLattice
from .models import (
    ALLOWED_D_FOR_K6,
    ALLOWED_K,
    DelPezzoFibration,
    FanoRankOne,
    InvariantRecord,
    ModelError,
    SingularConicBundle,
    SmoothConicBundle,
    SurfaceData,
    hodge_feasibility,
    invariants,
)

FAMILIES = ("dp1", "cb-smooth", "cb-singular", "fano")

FIELDS = {
    "fano": ("degree", "eX"),
    "dp1": ("K", "d", "relK3", "eX", "twist"),
    "cb-smooth": ("q", "c1E", "c2E"),
    "cb-singular": ("q", "c1rel", "c2rel"),
}

MAX_RECORDS = 200_000


class CensusError(ValueError):
    pass


@dataclass(frozen=True)
class CensusClass:
    representative: InvariantRecord
    count: int
    undetermined: bool = False


Bounds = Mapping[str, tuple[int, int]]


def _span(bounds: Bounds, key: str) -> range:
    if key not in bounds:
        raise CensusError(f"missing bound: --min-{key} and --max-{key} are required")
    lo, hi = bounds[key]
    if lo > hi:
        raise CensusError(f"empty range for {key}: {lo} > {hi}")
    return range(lo, hi + 1)


def blown_up_plane(q: int) -> SurfaceData:
    """P^2 blown up in q points: (1) + q(-1) with c1 = (3; 1, ..., 1)."""
    return SurfaceData(BilinearLattice.diagonal(1, q), (3,) + (1,) * q)


def required_fields(family: str, bounds: Bounds) -> list[str]:
    if family == "fano":
        return ["degree", "eX"]
    if family == "dp1":
        need = ["K"]
        if "K" in bounds:
            ks = [k for k in _span(bounds, "K") if k in ALLOWED_K]
            if any(k <= 6 for k in ks):
                need += ["relK3", "eX"]
            if 6 in ks:
                need.append("d")
            if any(k >= 8 for k in ks):
                need.append("twist")
        return need
    if family in ("cb-smooth", "cb-singular"):
        return list(FIELDS[family])
    raise CensusError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def enumerate_models(family: str, bounds: Bounds) -> Iterator:
    missing = [k for k in required_fields(family, bounds) if k not in bounds]
    if missing:
        flags = ", ".join(f"--min-{k}/--max-{k}" for k in missing)
        raise CensusError(f"refusing an unbounded census: missing {flags}")
    unknown = set(bounds) - set(FIELDS[family])
    if unknown:
        raise CensusError(f"fields not used by family {family}: {', '.join(sorted(unknown))}")
    if family == "fano":
        for deg in _span(bounds, "degree"):
            for e in _span(bounds, "eX"):
                yield FanoRankOne(deg, e)
    elif family == "dp1":
        for K in _span(bounds, "K"):
            if K not in ALLOWED_K:
                continue
            if K >= 8:
                for t in _span(bounds, "twist"):
                    yield DelPezzoFibration(K=K, twist=t)
                continue
            ds = [d for d in _span(bounds, "d") if d in ALLOWED_D_FOR_K6] if K == 6 else [1]
            for d in ds:
                for rel in _span(bounds, "relK3"):
                    for e in _span(bounds, "eX"):
                        yield DelPezzoFibration(K=K, d=d, relK3=rel, eX=e)
    else:
        vec_key, int_key = FIELDS[family][1:]
        cls = SmoothConicBundle if family == "cb-smooth" else SingularConicBundle
        for q in _span(bounds, "q"):
            if q < 0:
                continue
            surf = blown_up_plane(q)
            coords = _span(bounds, vec_key)
            for vec in itertools.product(coords, repeat=q + 1):
                for c2 in _span(bounds, int_key):
                    yield cls(surf, vec, c2)


def candidate_count(family: str, bounds: Bounds) -> int:
    """Number of descriptions ``enumerate_models`` would produce."""
    next(enumerate_models(family, bounds), None)
    if family == "fano":
        return len(_span(bounds, "degree")) * len(_span(bounds, "eX"))
    if family == "dp1":
        total = 0
        for K in _span(bounds, "K"):
            if K not in ALLOWED_K:
                continue
            if K >= 8:
                total += len(_span(bounds, "twist"))
                continue
            nd = sum(d in ALLOWED_D_FOR_K6 for d in _span(bounds, "d")) if K == 6 else 1
            total += nd * len(_span(bounds, "relK3")) * len(_span(bounds, "eX"))
        return total
    vec_key, int_key = FIELDS[family][1:]
    width = len(_span(bounds, vec_key))
    return sum(width ** (q + 1) for q in _span(bounds, "q") if q >= 0) * len(_span(bounds, int_key))


def census(family: str, bounds: Bounds) -> list[CensusClass]:
    """Feasible records grouped by ``compare``, in enumeration order."""
    total = candidate_count(family, bounds)
    if total > MAX_RECORDS:
        raise CensusError(f"{total} candidate models exceed the limit of {MAX_RECORDS}; tighten the bounds")
    reps: list[InvariantRecord] = []
    counts: list[int] = []
    undetermined: list[bool] = []
    for m in enumerate_models(family, bounds):
        try:
            rec = invariants(m)
        except ModelError:
            continue
        if not hodge_feasibility(rec):
            continue
        for i, rep in enumerate(reps):
            v = compare(rec, rep)
            if v.outcome is Outcome.DIFFEOMORPHIC:
                counts[i] += 1
                break
            if v.outcome is Outcome.UNDETERMINED:
                undetermined[i] = True
        else:
            reps.append(rec)
            counts.append(1)
            undetermined.append(False)
    return [CensusClass(r, c, u) for r, c, u in zip(reps, counts, undetermined)]
