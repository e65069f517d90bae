"""Affine semigroups of lattice polytopes: membership, holes, normality.

The graded semigroup of ``P`` is generated by ``A_P = {(p, 1) : p ∈ P ∩ Z^N}``.
A *hole* is a lattice point of the cone over ``P`` (inside the lattice
``Z A_P``) that is not a sum of generators.

Stopping rule used by :func:`enumerate_holes`: for a lattice polytope of
dimension ``d`` and ``n >= d - 1`` every lattice point of ``(n+1)P`` is a
lattice point of ``nP`` plus a lattice point of ``P`` (Bruns, Gubeladze and
Trung).  So a hole at height ``n >= d`` is a hole at height ``n - 1`` plus a
generator, and one empty level at height ``>= d - 1`` rules out holes at all
larger heights.
"""
from __future__ import annotations

import enum
import itertools
import math
import os
import time
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .linalg import (
    BudgetExceeded,
    IntMatrix,
    Vector,
    inverse_unimodular,
    primitive,
    rational_inverse,
    smith_normal_form,
    solve_integer,
    sublattice_coordinates,
    hermite_normal_form,
)
from .polytope import LatticePolytope, dot, dual_cone_rays, lattice_points, slice_points
from .families import PhdSpec, build_phd, expected_holes

STOPPING_RULE = (
    "for n >= d-1, (n+1)P ∩ Z^d = nP ∩ Z^d + P ∩ Z^d (Bruns-Gubeladze-Trung), "
    "so holes at height n >= d are holes at height n-1 plus a generator; "
    "an empty level at height >= d-1 certifies that no further holes exist"
)


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def _deadline_from_env() -> float | None:
    ms = os.environ.get("POLYHOLE_BUDGET_MS")
    if not ms:
        return None
    return time.monotonic() + int(ms) / 1000.0


def _add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# Graded semigroup


class GradedSemigroup:
    """Semigroup generated by the homogenized lattice points of a polytope.

    A polytope that is not full-dimensional is first re-expressed in the
    lattice coordinates of its affine hull; ``frame`` records the map.
    """

    def __init__(self, P: LatticePolytope):
        self.frame = None
        if not P.is_full_dimensional:
            origin, basis, coords = P._frame
            self.frame = (origin, basis)
            P = LatticePolytope(coords, name=P.name)
        self.polytope = P
        self.ambient_dim = P.ambient_dim + 1
        self.dim = P.dim
        self.hrep = P.hrep
        self._ineqs = [(h.normal, h.offset) for h in self.hrep.halfspaces]
        lp = lattice_points(P, 1)
        gens = [p + (1,) for p in lp]
        # fail fast: try generators that take big steps first
        self.generators: tuple[Vector, ...] = tuple(sorted(gens, key=lambda g: (-sum(g), g)))
        self._cache: dict[Vector, Vector | None] = {}
        self._zero = (0,) * self.ambient_dim

    def __repr__(self):
        return f"<GradedSemigroup of {self.polytope!r}: {len(self.generators)} generators>"

    @cached_property
    def lattice_index(self) -> int:
        """Index of ``Z A_P`` in ``Z^(N+1)``."""
        snf = smith_normal_form(IntMatrix.from_columns(self.generators))
        assert snf.rank == self.ambient_dim
        return math.prod(snf.elementary_divisors)

    @cached_property
    def _lattice_basis(self) -> IntMatrix:
        return hermite_normal_form(IntMatrix.from_columns(self.generators)).H

    def in_group(self, x: Sequence[int]) -> bool:
        if self.lattice_index == 1:
            return True
        return solve_integer(self._lattice_basis, x) is not None

    def in_cone(self, x: Sequence[int]) -> bool:
        m = x[-1]
        if m < 0:
            return False
        y = x[:-1]
        for a, b in self._ineqs:
            if sum(p * q for p, q in zip(a, y)) > m * b:
                return False
        return True

    def _search(self, r: Vector) -> bool:
        if r[-1] == 0:
            return r == self._zero
        try:
            return self._cache[r] is not None
        except KeyError:
            pass
        for g in self.generators:
            s = tuple(a - b for a, b in zip(r, g))
            if self.in_cone(s) and self._search(s):
                self._cache[r] = g
                return True
        self._cache[r] = None
        return False

    def is_member(self, x: Sequence[int]) -> bool:
        """Whether ``x`` is a sum of exactly ``x[-1]`` generators."""
        x = tuple(x)
        if len(x) != self.ambient_dim:
            raise ValueError(f"expected a point of length {self.ambient_dim}")
        if not self.in_cone(x):
            return False
        return self._search(x)

    def decompose(self, x: Sequence[int]) -> list[Vector] | None:
        """Generators summing to ``x`` (with multiplicity), or ``None``."""
        x = tuple(x)
        if not self.is_member(x):
            return None
        out = []
        while x[-1] > 0:
            g = self._cache[x]
            out.append(g)
            x = _sub(x, g)
        return sorted(out)

    def degree_points(self, n: int) -> list[Vector]:
        """Homogenized lattice points of ``nP``."""
        return [p + (n,) for p in lattice_points(self.polytope, n)]

    def holes_at_degree(self, n: int) -> list[Vector]:
        if n < 1:
            raise ValueError("degree must be >= 1")
        return [x for x in self.degree_points(n) if self.in_group(x) and not self._search(x)]


def homogenize(P: LatticePolytope) -> GradedSemigroup:
    return GradedSemigroup(P)


def is_member(S: GradedSemigroup, x: Sequence[int]) -> bool:
    return S.is_member(x)


def decompose(S: GradedSemigroup, x: Sequence[int]) -> list[Vector] | None:
    return S.decompose(x)


def holes_at_degree(S: GradedSemigroup, n: int) -> list[Vector]:
    return S.holes_at_degree(n)


# --------------------------------------------------------------------------
# Hole enumeration


@dataclass
class HoleReport:
    holes_by_degree: dict[int, list[Vector]]
    certified_complete: bool
    stop_reason: str  # propagation_empty | degree_budget | infinite_suspected | time_budget
    degree_budget: int
    probe_evidence: list | None = None
    rule: str = STOPPING_RULE

    @property
    def holes(self) -> list[Vector]:
        return sorted(h for level in self.holes_by_degree.values() for h in level)

    @property
    def max_degree(self) -> int:
        return max(self.holes_by_degree)

    def to_json(self) -> dict:
        out = {
            "holes": {str(n): [list(h) for h in hs] for n, hs in sorted(self.holes_by_degree.items())},
            "certified": self.certified_complete,
            "stop_reason": self.stop_reason,
            "degree_budget": self.degree_budget,
        }
        if self.certified_complete:
            out["certificate"] = self.rule
        if self.probe_evidence:
            out["probe_evidence"] = self.probe_evidence
        return out


def enumerate_holes(S: GradedSemigroup, degree_budget: int, deadline: float | None = None) -> HoleReport:
    """All holes up to ``degree_budget``, with a completeness certificate when one exists.

    Heights ``2..d-1`` are scanned exhaustively; from height ``d`` on only
    the translates of the previous level's holes by generators are tested.
    """
    d = S.dim
    if degree_budget < max(d, 1):
        raise ValueError(f"degree budget must be >= dimension ({d})")
    if deadline is None:
        deadline = _deadline_from_env()
    levels: dict[int, list[Vector]] = {1: []}
    if d - 1 <= 1:
        return HoleReport(levels, True, "propagation_empty", degree_budget)
    for n in range(2, degree_budget + 1):
        if deadline is not None and time.monotonic() > deadline:
            return HoleReport(levels, False, "time_budget", degree_budget)
        if n <= d - 1:
            level = S.holes_at_degree(n)
        else:
            cands = {_add(h, g) for h in levels[n - 1] for g in S.generators}
            level = sorted(c for c in cands if S.in_cone(c) and not S._search(c))
        levels[n] = level
        if not level and n >= d - 1:
            return HoleReport(levels, True, "propagation_empty", degree_budget)
    evidence = _chain_evidence(S, levels, degree_budget)
    return HoleReport(levels, False, "infinite_suspected", degree_budget, evidence)


def _chain_evidence(S, levels, top, limit=5):
    out = []
    prev = set(levels.get(top - 1, []))
    for x in levels[top][:limit]:
        for g in S.generators:
            parent = _sub(x, g)
            if parent in prev:
                out.append({"hole": list(x), "parent_hole": list(parent), "generator": list(g)})
                break
    return out


@dataclass
class KNormalVerdict:
    k: int
    horizon: int
    failures: dict[int, list[Vector]]
    certified: bool
    verdict: Verdict

    @property
    def verified_up_to_horizon(self) -> bool:
        return not any(self.failures.values())

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "horizon": self.horizon,
            "verified_up_to_horizon": self.verified_up_to_horizon,
            "certified_for_all_n": self.certified,
            "verdict": self.verdict.value,
            "failures": {str(n): [list(p) for p in ps] for n, ps in sorted(self.failures.items()) if ps},
        }


def is_k_normal(S: GradedSemigroup, k: int, horizon: int) -> KNormalVerdict:
    """Check the splitting condition for heights ``k..horizon`` and try to certify it beyond."""
    if k < 1 or horizon < k:
        raise ValueError("need 1 <= k <= horizon")
    failures = {}
    for n in range(k, horizon + 1):
        failures[n] = [x for x in S.degree_points(n) if not S._search(x)]
    if any(failures.values()):
        return KNormalVerdict(k, horizon, failures, False, Verdict.NO)
    report = enumerate_holes(S, max(horizon, S.dim))
    certified = (
        S.lattice_index == 1
        and report.certified_complete
        and all(n < k for n, hs in report.holes_by_degree.items() if hs)
    )
    return KNormalVerdict(k, horizon, failures, certified, Verdict.YES if certified else Verdict.UNKNOWN)


def default_degree_budget(dim: int) -> int:
    return max(dim + 3, 8)


def is_normal(S: GradedSemigroup, degree_budget: int | None = None) -> Verdict:
    report = enumerate_holes(S, degree_budget or default_degree_budget(S.dim))
    if report.holes:
        return Verdict.NO
    return Verdict.YES if report.certified_complete else Verdict.UNKNOWN


# --------------------------------------------------------------------------
# Cones and Hilbert bases


class Cone:
    """Cone generated by integer vectors; must be pointed."""

    def __init__(self, generators: Iterable[Sequence[int]]):
        gens = {primitive(tuple(g)) for g in generators}
        gens = sorted(g for g in gens if any(g))
        if not gens:
            raise ValueError("cone needs a nonzero generator")
        self.generators: tuple[Vector, ...] = tuple(gens)
        self.ambient_dim = len(gens[0])

    @cached_property
    def dim(self) -> int:
        return IntMatrix(self.generators).rank()

    @cached_property
    def facets(self) -> tuple[Vector, ...]:
        """Inward primitive facet normals (full-dimensional cones only)."""
        if self.dim != self.ambient_dim:
            raise ValueError("facets are only computed for full-dimensional cones")
        normals = dual_cone_rays(self.generators)
        if IntMatrix(normals).rank() != self.ambient_dim:
            raise ValueError("cone is not pointed")
        return tuple(sorted(normals))

    def is_pointed(self) -> bool:
        if self.dim != self.ambient_dim:
            _, _, coords = sublattice_coordinates([(0,) * self.ambient_dim, *self.generators])
            return Cone(coords[1:]).is_pointed()
        try:
            self.facets
        except ValueError:
            return False
        return True

    def contains(self, x: Sequence[int]) -> bool:
        return all(dot(n, x) >= 0 for n in self.facets)

    @cached_property
    def grading(self) -> Vector:
        """Sum of the inward facet normals; positive on the cone minus 0."""
        return tuple(sum(col) for col in zip(*self.facets))

    @cached_property
    def extreme_rays(self) -> tuple[Vector, ...]:
        D = self.ambient_dim
        out = []
        for g in self.generators:
            tight = [n for n in self.facets if dot(n, g) == 0]
            if len(tight) >= D - 1 and (D == 1 or IntMatrix(tight).rank() == D - 1):
                out.append(g)
        return tuple(out)


@dataclass(frozen=True)
class HilbertBasis:
    cone: Cone
    elements: tuple[Vector, ...]


def pulling_triangulation(rays: Sequence[Vector]) -> list[tuple[int, ...]]:
    """Triangulate ``cone(rays)`` using only the given (extreme) rays.

    Each simplicial cone is a sorted tuple of ray indices.
    """
    rays = [tuple(r) for r in rays]
    zero = (0,) * len(rays[0])
    memo: dict[frozenset, list] = {}

    def faces_of(idx: tuple[int, ...]) -> list[tuple[int, ...]]:
        _, _, coords = sublattice_coordinates([zero] + [rays[i] for i in idx])
        coords = coords[1:]
        out = []
        for n in dual_cone_rays(coords):
            out.append(tuple(i for i, c in zip(idx, coords) if dot(n, c) == 0))
        return out

    def rec(idx: tuple[int, ...]) -> list[tuple[int, ...]]:
        key = frozenset(idx)
        if key in memo:
            return memo[key]
        k = IntMatrix([rays[i] for i in idx]).rank()
        if len(idx) == k:
            res = [tuple(sorted(idx))]
        elif k == 1:
            raise ValueError("rays must be extreme rays of a pointed cone")
        else:
            apex = idx[0]
            res = []
            for F in faces_of(idx):
                if apex in F:
                    continue
                res += [tuple(sorted((apex,) + T)) for T in rec(F)]
        memo[key] = res
        return res

    return rec(tuple(range(len(rays))))


def parallelepiped_points(gens: Sequence[Vector]) -> list[Vector]:
    """Nonzero lattice points of the half-open parallelepiped spanned by ``gens``."""
    M = IntMatrix.from_columns(gens)
    snf = smith_normal_form(M)
    Uinv = inverse_unimodular(snf.U)
    Minv = rational_inverse(M)
    D = M.nrows
    out = []
    for y in itertools.product(*(range(s) for s in snf.elementary_divisors)):
        x = Uinv @ y
        lam = [sum(Minv[i][j] * x[j] for j in range(D)) for i in range(D)]
        frac = [l - math.floor(l) for l in lam]
        p = tuple(sum(M.rows[i][j] * frac[j] for j in range(D)) for i in range(D))
        assert all(c.denominator == 1 for c in p)
        p = tuple(int(c) for c in p)
        if any(p):
            out.append(p)
    return out


def hilbert_basis(C: Cone) -> HilbertBasis:
    """Minimal generating set of the monoid ``C ∩ Z^D``.

    Candidates are the extreme rays plus the lattice points of the
    fundamental parallelepipeds of a triangulation; together they generate
    the monoid, and the irreducible ones among them form the basis.
    """
    if C.dim != C.ambient_dim:
        origin, basis, coords = sublattice_coordinates([(0,) * C.ambient_dim, *C.generators])
        inner = hilbert_basis(Cone(coords[1:]))
        elems = tuple(sorted(basis @ e for e in inner.elements))
        return HilbertBasis(C, elems)
    if not C.is_pointed():
        raise ValueError("Hilbert basis requested for a non-pointed cone")
    rays = list(C.extreme_rays)
    cands = set(rays)
    for simplex in pulling_triangulation(rays):
        cands.update(parallelepiped_points([rays[i] for i in simplex]))
    return HilbertBasis(C, tuple(sorted(_irreducibles(C, cands))))


def _irreducibles(C: Cone, cands: Iterable[Vector]) -> list[Vector]:
    facets = C.facets
    vals = {x: tuple(dot(n, x) for n in facets) for x in cands}
    order = sorted(vals, key=lambda x: (sum(vals[x]), x))
    basis: list[Vector] = []
    for x in order:
        vx = vals[x]
        if not any(all(a <= b for a, b in zip(vals[y], vx)) for y in basis):
            basis.append(x)
    return basis


def cone_semigroup_decompose(
    target: Vector, gens: Sequence[Vector], C: Cone, node_budget: int = 200_000
) -> list[Vector] | None:
    """Write ``target`` as a nonnegative integer combination of ``gens``.

    Search is graded by ``C.grading``, which strictly decreases along every
    step, so it terminates.  Returns ``None`` when no combination exists and
    raises ``BudgetExceeded`` when the node budget runs out.
    """
    facets = C.facets
    gvals = sorted(
        ((tuple(dot(n, g) for n in facets), g) for g in gens if any(g)),
        key=lambda t: -sum(t[0]),
    )
    failed: set[Vector] = set()
    nodes = 0

    def rec(rv: tuple[int, ...]) -> list[Vector] | None:
        nonlocal nodes
        if not any(rv):
            return []
        if rv in failed:
            return None
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded("semigroup membership search budget exhausted")
        for gv, g in gvals:
            if all(a <= b for a, b in zip(gv, rv)):
                sub = rec(tuple(b - a for a, b in zip(gv, rv)))
                if sub is not None:
                    return sub + [g]
        failed.add(rv)
        return None

    res = rec(tuple(dot(n, target) for n in facets))
    return sorted(res) if res is not None else None


# --------------------------------------------------------------------------
# Very ampleness


@dataclass
class VertexCertificate:
    vertex: Vector
    hilbert_basis: tuple[Vector, ...]
    witnesses: dict[Vector, list[Vector] | None]
    status: Verdict

    def to_json(self) -> dict:
        return {
            "vertex": list(self.vertex),
            "status": self.status.value,
            "hilbert_basis": [list(b) for b in self.hilbert_basis],
            "witnesses": [
                {"element": list(b), "witness": None if w is None else [list(g) for g in w]}
                for b, w in sorted(self.witnesses.items())
            ],
        }


@dataclass
class VeryAmplenessCertificate:
    entries: list[VertexCertificate]
    verdict: Verdict

    @property
    def failing_vertices(self) -> list[Vector]:
        return [e.vertex for e in self.entries if e.status is Verdict.NO]

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "vertices": [e.to_json() for e in self.entries]}


def certify_very_ample(P: LatticePolytope, node_budget: int = 200_000) -> VeryAmplenessCertificate:
    """Vertex-local very-ampleness test.

    ``P`` is very ample iff at every vertex ``v`` the semigroup generated by
    ``{p - v : p ∈ P ∩ Z^d}`` contains the Hilbert basis of its cone.
    """
    if not P.is_full_dimensional:
        raise ValueError("certify_very_ample needs a full-dimensional polytope")
    S = GradedSemigroup(P)
    if S.lattice_index != 1:
        raise ValueError("the lattice points of P do not generate the full lattice")
    pts = lattice_points(P, 1)
    entries = []
    for v in P.vertices:
        gens = [_sub(p, v) for p in pts if p != v]
        C = Cone(gens)
        hb = hilbert_basis(C).elements
        witnesses: dict[Vector, list[Vector] | None] = {}
        status = Verdict.YES
        for b in hb:
            try:
                w = cone_semigroup_decompose(b, gens, C, node_budget)
            except BudgetExceeded:
                status = Verdict.UNKNOWN if status is Verdict.YES else status
                continue
            witnesses[b] = w
            if w is None:
                status = Verdict.NO
        entries.append(VertexCertificate(v, hb, witnesses, status))
    statuses = {e.status for e in entries}
    if Verdict.NO in statuses:
        verdict = Verdict.NO
    elif Verdict.UNKNOWN in statuses:
        verdict = Verdict.UNKNOWN
    else:
        verdict = Verdict.YES
    return VeryAmplenessCertificate(entries, verdict)


# --------------------------------------------------------------------------
# Slice decompositions


@dataclass
class SliceCheck:
    n: int
    k: int
    ok: bool
    outside_sumset: list[Vector]  # slice points that are not sums
    unexplained: list[Vector]  # outside_sumset minus the allowed extra points
    spurious: list[Vector]  # sums that are not slice points (must be empty)

    def to_json(self) -> dict:
        return {
            "case": [self.n, self.k],
            "ok": self.ok,
            "outside_sumset": [list(p) for p in self.outside_sumset],
            "unexplained": [list(p) for p in self.unexplained],
        }


def sumset(*sets: Iterable[Vector]) -> set[Vector]:
    """Minkowski sum of finite point sets."""
    if not sets:
        return set()
    return reduce(lambda acc, s: {_add(a, b) for a in acc for b in s}, sets[1:], set(sets[0]))


def verify_slice_decompositions(
    P: "LatticePolytope | PhdSpec",
    cases: Sequence[tuple[int, int]] = ((2, 1), (3, 1), (3, 2), (4, 1)),
    extra: dict[tuple[int, int], Iterable[Vector]] | None = None,
) -> list[SliceCheck]:
    """Compare slices ``nP ∩ {x_1 = k}`` with sums of ``n-k`` points of the
    ``x_1 = 0`` face and ``k`` points of the ``x_1 = 1`` slice.

    ``extra`` lists points allowed outside the sumset for a case.  Given a
    :class:`PhdSpec`, the default allows the expected degree-2 holes for
    ``(2, 1)`` and nothing else.
    """
    if isinstance(P, PhdSpec):
        if extra is None:
            extra = {(2, 1): [u[:-1] for u in expected_holes(P)]}
        P = build_phd(P)
    extra = extra or {}
    P0 = slice_points(P, 1, 0)
    P1 = slice_points(P, 1, 1)
    out = []
    for n, k in cases:
        actual = set(slice_points(P, n, k))
        sums = sumset(*([P0] * (n - k) + [P1] * k))
        allowed = set(extra.get((n, k), ()))
        outside = sorted(actual - sums)
        unexplained = sorted(set(outside) - allowed)
        spurious = sorted(sums - actual)
        ok = not unexplained and not spurious and allowed <= actual
        out.append(SliceCheck(n, k, ok, outside, unexplained, spurious))
    return out
