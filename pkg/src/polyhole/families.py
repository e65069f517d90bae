"""Constructors for the concrete polytopes and configurations studied here.

``P(h, d)`` is the d-dimensional polytope with exactly ``h`` holes, built
from the named points ``u1..u10``, ``v_i`` and ``v'_i``.  Points are emitted
literally and deduplicated by :class:`LatticePolytope`; nothing about
vertices or facets is assumed.
"""
from __future__ import annotations

from dataclasses import dataclass

from .linalg import IntMatrix, Vector, content
from .polytope import HRep, Halfspace, LatticePolytope


@dataclass(frozen=True)
class PhdSpec:
    h: int
    d: int

    def __post_init__(self):
        if not isinstance(self.h, int) or not isinstance(self.d, int):
            raise TypeError("h and d must be integers")
        if self.h < 1 or self.d < 3:
            raise ValueError(f"need h >= 1 and d >= 3, got h={self.h}, d={self.d}")

    @property
    def facet_count(self) -> int:
        return 8 * (self.d - 2) + 2


def _e(d: int, *idx: int) -> list[int]:
    """Sum of unit vectors with 1-based indices ``idx``."""
    v = [0] * d
    for i in idx:
        v[i - 1] += 1
    return v


def _mid(d: int) -> list[int]:
    """e_2 + ... + e_{d-1}."""
    return _e(d, *range(2, d))


def _comb(*terms: tuple[int, list[int]]) -> Vector:
    d = len(terms[0][1])
    return tuple(sum(c * v[i] for c, v in terms) for i in range(d))


def named_points(spec: PhdSpec) -> dict[str, Vector]:
    """The labelled generating points ``u1..u10``, ``v{i}``, ``v{i}'``."""
    h, d = spec.h, spec.d
    mid, ed, e1 = _mid(d), _e(d, d), _e(d, 1)
    pts = {
        "u1": (0,) * d,
        "u2": tuple(ed),
        "u3": tuple(mid),
        "u4": _comb((h, mid), (h, ed)),
        "u5": _comb((h - 1, mid), (h, ed)),
        "u6": _comb((h, mid), (h - 1, ed)),
        "u7": _comb((1, e1), (4, ed)),
        "u8": _comb((1, e1), (5, ed)),
        "u9": _comb((1, e1), (1, mid)),
        "u10": _comb((1, e1), (1, mid), (1, ed)),
    }
    for i in range(2, d):
        pts[f"v{i}"] = tuple(_e(d, i))
        pts[f"v{i}'"] = tuple(_e(d, i, d))
    return pts


def build_phd(spec: PhdSpec) -> LatticePolytope:
    return LatticePolytope(named_points(spec).values(), name=f"P[{spec.h},{spec.d}]")


def hyperplane_rows(spec: PhdSpec) -> list[tuple[str, Vector, int, str]]:
    """The ten hyperplane families as ``(label, a, b, side)``.

    ``side`` is ``"le"`` when the polytope lies in ``a.x <= b`` and ``"ge"``
    for ``a.x >= b``.
    """
    h, d = spec.h, spec.d
    rows = [("H0", tuple(_e(d, 1)), 0, "ge"), ("H1", tuple(_e(d, d)), 0, "ge")]

    def row(i, c1, ci, cother, cd):
        a = [0] * d
        a[0] = c1
        for j in range(2, d):
            a[j - 1] = ci if j == i else cother
        a[d - 1] = cd
        return tuple(a)

    for i in range(2, d):
        rows += [
            (f"H2,{i}", row(i, 0, -1, 0, 0), 0, "le"),
            (f"H3,{i}", row(i, 0, -(d - 4), 1, -1), 1, "le"),
            (f"H4,{i}", row(i, 4, -4, 0, -1), 0, "le"),
            (f"H5,{i}", row(i, -4, -1, 0, 1), 1, "le"),
            (f"H6,{i}", row(i, 1, -(d - 3), 1, 0), 1, "le"),
            (f"H7,{i}", row(i, 5 * h - 5, -((d - 3) * (5 * h - 1) - 4), 5 * h - 1, 1), 5 * h, "le"),
            (f"H8,{i}", row(i, h - 5, -(d - 3) * (h - 1), h - 1, 1), h, "le"),
            (f"H9,{i}", row(i, h - 1, -((d - 3) * h - 1), h, 0), h, "le"),
        ]
    return rows


def build_expected_hrep(spec: PhdSpec) -> HRep:
    """The claimed facet system, in ``a.x <= b`` form with primitive normals."""
    out = []
    for label, a, b, side in hyperplane_rows(spec):
        note = f"{label}: {'>=' if side == 'ge' else '<='} form"
        if side == "ge":
            a, b = tuple(-x for x in a), -b
        g = content(a)
        if g != 1:
            if b % g:
                raise ValueError(f"{label} cannot be made primitive")
            a, b = tuple(x // g for x in a), b // g
        out.append(Halfspace(a, b, "facet", label, note))
    return HRep(tuple(out)).canonical()


def build_ogata_p2() -> LatticePolytope:
    pts = [
        (0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 2),
        (0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (1, 1, 1, 3),
    ]
    return LatticePolytope(pts, name="P_2")


def build_qk(k: int) -> LatticePolytope:
    if k < 1:
        raise ValueError("k must be >= 1")
    pts = [
        (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (1, 0, 1), (0, 1, 1), (1, 1, k), (1, 1, k + 1),
    ]
    return LatticePolytope(pts, name=f"Q_{k}")


def f0_columns(spec: PhdSpec) -> list[tuple[str, Vector]]:
    """Labelled lattice points of the face ``x_1 = 0`` in the order
    ``v2, v2', ..., u3_0.., u2_0.., u1_0..u1_h``."""
    h, d = spec.h, spec.d
    mid, ed = _mid(d), _e(d, d)
    cols = []
    for i in range(2, d):
        cols.append((f"v{i}", tuple(_e(d, i))))
        cols.append((f"v{i}'", tuple(_e(d, i, d))))
    for j in range(h):
        cols.append((f"u3_{j}", _comb((j + 1, mid), (j, ed))))
    for j in range(h):
        cols.append((f"u2_{j}", _comb((j, mid), (j + 1, ed))))
    for j in range(h + 1):
        cols.append((f"u1_{j}", _comb((j, mid), (j, ed))))
    return cols


def build_f0_configuration(spec: PhdSpec) -> IntMatrix:
    """The ``d x (2(d-2)+3h+1)`` configuration matrix of the face ``x_1 = 0``.

    Column ``v*`` is ``e_1 + v``: the first row (the vanishing ``x_1``
    coordinate) becomes the homogenizing row of ones.
    """
    cols = []
    for _, v in f0_columns(spec):
        assert v[0] == 0
        cols.append((1,) + v[1:])
    return IntMatrix.from_columns(cols)


def expected_holes(spec: PhdSpec) -> list[Vector]:
    """``(e_1 + j(e_2+...+e_{d-1}) + (j+2)e_d, 2)`` for ``j = 1..h``."""
    d = spec.d
    out = []
    for j in range(1, spec.h + 1):
        u = _comb((1, _e(d, 1)), (j, _mid(d)), (j + 2, _e(d, d)))
        out.append(u + (2,))
    return sorted(out)
