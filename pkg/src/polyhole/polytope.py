"""Lattice polytopes: V/H representations and lattice points of dilations."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import (
    BudgetExceeded,
    affine_rank,
    IntMatrix,
    Vector,
    content,
    integer_kernel,
    primitive,
    rational_inverse,
    solve_integer,
    sublattice_coordinates,
)

MAX_DD_INPUT = 5000
MAX_LATTICE_POINTS = 3_000_000


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# Double description


def dual_cone_rays(rows: Sequence[Sequence[int]]) -> list[Vector]:
    """Extreme rays of ``{a : r.a >= 0 for r in rows}``.

    ``rows`` must span ``R^D`` so the cone is pointed.  Incremental double
    description with the combinatorial adjacency test; all rays are kept as
    primitive integer vectors, so no rationals survive past the first step.
    """
    rows = list(dict.fromkeys(tuple(r) for r in rows))
    if not rows:
        raise ValueError("no constraints")
    D = len(rows[0])

    basis_idx: list[int] = []
    echelon: list[list] = []  # rational row echelon of chosen rows

    for i, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for piv, er in echelon:
            if v[piv]:
                f = v[piv] / er[piv]
                v = [a - f * b for a, b in zip(v, er)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is not None:
            echelon.append((piv, v))
            basis_idx.append(i)
            if len(basis_idx) == D:
                break
    if len(basis_idx) < D:
        raise ValueError("constraints do not span the ambient space")

    order = basis_idx + [i for i in range(len(rows)) if i not in set(basis_idx)]
    rows = [rows[i] for i in order]
    inv = rational_inverse(IntMatrix(rows[:D]))
    rays = []
    for j in range(D):
        col = [inv[i][j] for i in range(D)]
        den = math.lcm(*(x.denominator for x in col))
        rays.append(primitive([int(x * den) for x in col]))
    zero_sets = []
    for v in rays:
        mask = 0
        for i in range(D):
            if dot(rows[i], v) == 0:
                mask |= 1 << i
        zero_sets.append(mask)

    for idx in range(D, len(rows)):
        r = rows[idx]
        bit = 1 << idx
        vals = [dot(r, v) for v in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        if not neg:
            zero_sets = [z | bit if vals[i] == 0 else z for i, z in enumerate(zero_sets)]
            continue
        new_rays, new_zero = [], []
        for i, s in enumerate(vals):
            if s >= 0:
                new_rays.append(rays[i])
                new_zero.append(zero_sets[i] | bit if s == 0 else zero_sets[i])
        for p in pos:
            for q in neg:
                common = zero_sets[p] & zero_sets[q]
                if common.bit_count() < D - 2:
                    continue
                if any(
                    t != p and t != q and (common & zero_sets[t]) == common
                    for t in range(len(rays))
                ):
                    continue
                sp, sq = vals[p], vals[q]
                v = primitive([sp * b - sq * a for a, b in zip(rays[p], rays[q])])
                new_rays.append(v)
                new_zero.append(common | bit)
        rays, zero_sets = new_rays, new_zero
    return rays


# --------------------------------------------------------------------------
# H-representation


@dataclass(frozen=True)
class Halfspace:
    """The inequality ``normal . x <= offset``."""

    normal: Vector
    offset: int
    kind: str = "facet"  # facet | redundant | equation
    label: str = ""
    note: str = ""

    @property
    def key(self) -> tuple[Vector, int]:
        return self.normal, self.offset

    def value(self, x: Sequence[int]) -> int:
        return dot(self.normal, x)

    def to_json(self) -> dict:
        out = {"normal": list(self.normal), "offset": self.offset}
        if self.kind != "facet":
            out["kind"] = self.kind
        if self.label:
            out["label"] = self.label
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Halfspace":
        return cls(
            tuple(int(x) for x in obj["normal"]),
            int(obj["offset"]),
            obj.get("kind", "facet"),
            obj.get("label", ""),
            obj.get("note", ""),
        )


@dataclass(frozen=True)
class HRep:
    halfspaces: tuple[Halfspace, ...]

    def __post_init__(self):
        dims = {len(h.normal) for h in self.halfspaces}
        if len(dims) > 1:
            raise ValueError("halfspaces of mixed dimension")

    @property
    def ambient_dim(self) -> int:
        return len(self.halfspaces[0].normal) if self.halfspaces else 0

    def facets(self) -> list[Halfspace]:
        return [h for h in self.halfspaces if h.kind == "facet"]

    def keys(self) -> set[tuple[Vector, int]]:
        return {h.key for h in self.halfspaces}

    def facet_keys(self) -> set[tuple[Vector, int]]:
        return {h.key for h in self.facets()}

    def canonical(self) -> "HRep":
        return HRep(tuple(sorted(self.halfspaces, key=lambda h: (h.normal, h.offset, h.kind))))

    def inequalities(self) -> list[tuple[Vector, int]]:
        return [h.key for h in self.halfspaces]

    def to_json(self) -> dict:
        return {"halfspaces": [h.to_json() for h in self.canonical().halfspaces]}

    @classmethod
    def from_json(cls, obj: dict) -> "HRep":
        return cls(tuple(Halfspace.from_json(h) for h in obj["halfspaces"])).canonical()

    def __len__(self):
        return len(self.halfspaces)


def contains(H: HRep, x: Sequence[int], n: int = 1) -> bool:
    """Whether ``x`` lies in the ``n``-th dilation of the polytope described by ``H``."""
    if n < 0:
        raise ValueError("dilation must be nonnegative")
    if len(x) != H.ambient_dim:
        raise ValueError(f"point has dimension {len(x)}, expected {H.ambient_dim}")
    return all(dot(h.normal, x) <= n * h.offset for h in H.halfspaces)


# --------------------------------------------------------------------------
# Lattice point enumeration


def enumerate_lattice_points(
    inequalities: Sequence[tuple[Sequence[int], int]],
    lo: Sequence[int],
    hi: Sequence[int],
    limit: int = MAX_LATTICE_POINTS,
) -> list[Vector]:
    """Integer points of ``{x : a.x <= b}`` inside the box ``[lo, hi]``.

    Depth-first over coordinates; each coordinate's interval is narrowed by
    every inequality using the exact values already fixed and the box for
    the coordinates still free.  Output is in lexicographic order.
    """
    N = len(lo)
    ineqs = [(tuple(a), b) for a, b in inequalities]
    if any(l > h for l, h in zip(lo, hi)):
        return []
    # minrest[i][k] = sum over j >= k of min(a_j lo_j, a_j hi_j)
    minrest = []
    for a, _ in ineqs:
        m = [0] * (N + 1)
        for k in range(N - 1, -1, -1):
            m[k] = m[k + 1] + min(a[k] * lo[k], a[k] * hi[k])
        minrest.append(m)
    out: list[Vector] = []
    x = [0] * N
    partial = [0] * len(ineqs)

    def rec(k: int):
        if k == N:
            out.append(tuple(x))
            if len(out) > limit:
                raise BudgetExceeded(f"more than {limit} lattice points")
            return
        lo_k, hi_k = lo[k], hi[k]
        for i, (a, b) in enumerate(ineqs):
            ak = a[k]
            rest = b - partial[i] - minrest[i][k + 1]
            if ak > 0:
                hi_k = min(hi_k, rest // ak)
            elif ak < 0:
                lo_k = max(lo_k, -(rest // -ak))
            elif rest < 0:
                return
        if lo_k > hi_k:
            return
        saved = partial[:]
        for v in range(lo_k, hi_k + 1):
            x[k] = v
            for i, (a, _) in enumerate(ineqs):
                partial[i] = saved[i] + a[k] * v
            rec(k + 1)
        partial[:] = saved

    if N == 0:
        return [()] if all(b >= 0 for _, b in ineqs) else []
    rec(0)
    return out


# --------------------------------------------------------------------------
# Polytopes


class LatticePolytope:
    """Convex hull of finitely many integer points.

    ``points`` is the deduplicated, lexicographically sorted generating set;
    vertices and facets are computed on demand and cached.
    """

    def __init__(self, points: Iterable[Sequence[int]], name: str = "", embedding=None):
        pts = sorted(set(tuple(int(c) for c in p) for p in points))
        if not pts:
            raise ValueError("a polytope needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("points of mixed dimension")
        self.points: tuple[Vector, ...] = tuple(pts)
        self.ambient_dim: int = dims.pop()
        self.name = name
        # (origin, basis) when this polytope is a facet expressed in lattice coordinates
        self.embedding = embedding

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<LatticePolytope{label} N={self.ambient_dim} dim={self.dim} points={len(self.points)}>"

    @cached_property
    def _frame(self):
        return sublattice_coordinates(self.points)

    @property
    def dim(self) -> int:
        return self._frame[1].ncols

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @cached_property
    def _coordinate_polytope(self) -> "LatticePolytope":
        origin, basis, coords = self._frame
        return LatticePolytope(coords)

    @cached_property
    def hrep(self) -> HRep:
        return facet_enumeration(self)

    @cached_property
    def vertices(self) -> tuple[Vector, ...]:
        if self.dim == 0:
            return self.points
        if not self.is_full_dimensional:
            origin, basis, coords = self._frame
            cverts = set(self._coordinate_polytope.vertices)
            return tuple(p for p, c in zip(self.points, coords) if c in cverts)
        facets = self.hrep.facets()
        out = []
        for p in self.points:
            tight = [h.normal for h in facets if h.value(p) == h.offset]
            if len(tight) >= self.dim and IntMatrix(tight).rank() == self.dim:
                out.append(p)
        return tuple(out)

    def bounding_box(self, n: int = 1) -> tuple[Vector, Vector]:
        lo = tuple(n * min(p[i] for p in self.points) for i in range(self.ambient_dim))
        hi = tuple(n * max(p[i] for p in self.points) for i in range(self.ambient_dim))
        return lo, hi

    def lattice_points(self, n: int = 1) -> list[Vector]:
        return lattice_points(self, n)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "LatticePolytope":
        pts = [tuple(int(c) for c in p) for p in obj["points"]]
        if "ambient_dim" in obj and any(len(p) != obj["ambient_dim"] for p in pts):
            raise ValueError("point dimension does not match ambient_dim")
        return cls(pts, name=obj.get("name", ""))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def facet_enumeration(P: LatticePolytope) -> HRep:
    """Irredundant facet description with primitive integer normals.

    For lower-dimensional polytopes the affine hull is included as pairs of
    opposite halfspaces of kind ``"equation"``.
    """
    if P.dim == 0:
        raise ValueError("facet enumeration needs a polytope of dimension >= 1")
    if len(P.points) > MAX_DD_INPUT or P.ambient_dim > 12:
        raise BudgetExceeded("polytope too large for exact facet enumeration")
    if not P.is_full_dimensional:
        return _lifted_hrep(P)
    rows = [(1,) + p for p in P.points]
    halfspaces = []
    for ray in dual_cone_rays(rows):
        c, a = ray[0], ray[1:]
        normal = tuple(-x for x in a)
        g = content(normal)
        assert g == 1, "facet normal of a lattice polytope must be primitive"
        halfspaces.append(Halfspace(normal, c))
    return HRep(tuple(halfspaces)).canonical()


def _lifted_hrep(P: LatticePolytope) -> HRep:
    origin, basis, _ = P._frame
    inner = P._coordinate_polytope.hrep
    halfspaces = []
    BT = basis.T
    for h in inner.facets():
        a = solve_integer(BT, h.normal)
        assert a is not None
        halfspaces.append(Halfspace(a, h.offset + dot(a, origin)))
    for e in integer_kernel(BT):
        e = primitive(e)
        b = dot(e, origin)
        halfspaces.append(Halfspace(e, b, kind="equation"))
        halfspaces.append(Halfspace(tuple(-x for x in e), -b, kind="equation"))
    return HRep(tuple(halfspaces)).canonical()


def lattice_points(P: LatticePolytope, n: int = 1, fixed: dict[int, int] | None = None) -> list[Vector]:
    """Sorted list of the integer points of ``n * P``.

    ``fixed`` pins coordinates (by index) to given values.
    """
    if n < 0:
        raise ValueError("dilation must be nonnegative")
    fixed = fixed or {}
    if n == 0:
        pt = (0,) * P.ambient_dim
        return [pt] if all(pt[i] == v for i, v in fixed.items()) else []
    if P.dim == 0:
        pt = tuple(n * c for c in P.points[0])
        return [pt] if all(pt[i] == v for i, v in fixed.items()) else []
    if not P.is_full_dimensional:
        origin, basis, _ = P._frame
        inner = lattice_points(P._coordinate_polytope, n)
        out = []
        for y in inner:
            x = tuple(n * o + v for o, v in zip(origin, basis @ y))
            if all(x[i] == v for i, v in fixed.items()):
                out.append(x)
        return sorted(out)
    lo, hi = P.bounding_box(n)
    lo, hi = list(lo), list(hi)
    for i, v in fixed.items():
        lo[i] = max(lo[i], v)
        hi[i] = min(hi[i], v)
    ineqs = [(a, n * b) for a, b in P.hrep.inequalities()]
    return enumerate_lattice_points(ineqs, lo, hi)


def slice_points(P: LatticePolytope, n: int, k: int, axis: int = 0) -> list[Vector]:
    """Lattice points of ``n * P`` on the hyperplane ``x[axis] == k`` (0-based axis)."""
    if not 0 <= axis < P.ambient_dim:
        raise ValueError("axis out of range")
    return lattice_points(P, n, fixed={axis: k})


def restrict_to_facet(P: LatticePolytope, F: Halfspace) -> LatticePolytope:
    """The facet ``F`` of ``P`` as a full-dimensional polytope in its own lattice coordinates."""
    if F.key not in P.hrep.facet_keys():
        raise ValueError(f"{F.key} is not a facet of the polytope")
    pts = [p for p in lattice_points(P, 1) if F.value(p) == F.offset]
    origin, basis, coords = sublattice_coordinates(pts)
    name = f"{P.name}|{F.label}" if F.label else ""
    return LatticePolytope(coords, name=name, embedding=(origin, basis))


def pyramid(P: LatticePolytope) -> LatticePolytope:
    """``conv({(p, 1) : p in P.points} ∪ {0})``."""
    apex = (0,) * (P.ambient_dim + 1)
    return LatticePolytope([p + (1,) for p in P.points] + [apex], name=f"pyr({P.name})" if P.name else "")


def classify_halfspaces(H: HRep, P: LatticePolytope) -> HRep:
    """Mark each halfspace of ``H`` as facet or redundant with respect to ``P``.

    Raises ``ValueError`` if some point of ``P`` violates a halfspace.
    """
    out = []
    for h in H.halfspaces:
        vals = [h.value(p) for p in P.points]
        if max(vals) > h.offset:
            raise ValueError(f"halfspace {h.key} is violated by the polytope")
        tight = [p for p, v in zip(P.points, vals) if v == h.offset]
        is_facet = len(tight) >= P.dim and affine_rank(tight) == P.dim - 1
        out.append(Halfspace(h.normal, h.offset, "facet" if is_facet else "redundant", h.label, h.note))
    return HRep(tuple(out)).canonical()
