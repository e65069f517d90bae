import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gcd_of_minors, rational_rank, sympy_invariant_factors
from polyhole.families import PhdSpec, build_phd
from polyhole.linalg import (
    BudgetExceeded,
    IntMatrix,
    hermite_normal_form,
    integer_kernel,
    is_totally_unimodular,
    is_unimodular_simplex,
    lattice_index,
    smith_normal_form,
    solve_integer,
    sublattice_coordinates,
)
from polyhole.polytope import facet_enumeration, lattice_points

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def homogenized(points):
    return IntMatrix.from_columns([tuple(p) + (1,) for p in points])


def check_hermite_shape(H, rank, pivots):
    # lower column echelon: column j has its first nonzero at row r, rows strictly increasing
    for r, j in pivots:
        assert H[r, j] > 0
        assert all(H[i, j] == 0 for i in range(r))
        for k in range(j):
            assert 0 <= H[r, k] < H[r, j]
    for j in range(rank, H.ncols):
        assert all(H[i, j] == 0 for i in range(H.nrows))
    assert [j for _, j in pivots] == list(range(rank))
    rows = [r for r, _ in pivots]
    assert rows == sorted(set(rows))


# --- Hermite form


def test_hnf_identity():
    hf = hermite_normal_form(IntMatrix.identity(3))
    assert hf.H == IntMatrix.identity(3)
    assert hf.U == IntMatrix.identity(3)
    assert hf.rank == 3


def test_hnf_rank_p13_generators():
    M = homogenized(lattice_points(build_phd(PhdSpec(1, 3))))
    hf = hermite_normal_form(M)
    assert hf.rank == rational_rank(M.tolist()) == 4


def test_hnf_zero_column():
    M = IntMatrix([[1, 0, 2], [3, 0, 6], [0, 0, 1]])
    hf = hermite_normal_form(M)
    assert len(hf.pivots) == hf.rank == rational_rank([[1, 2], [3, 6], [0, 1]]) == 2


@settings(max_examples=250, deadline=None)
@given(matrices())
def test_hnf_identity_holds(rows):
    M = IntMatrix(rows)
    hf = hermite_normal_form(M)
    assert M @ hf.U == hf.H
    assert abs(hf.U.det()) == 1
    assert hf.rank == rational_rank(rows)
    check_hermite_shape(hf.H, hf.rank, hf.pivots)
    for k in hf.kernel_basis():
        assert M @ k == (0,) * M.nrows


def test_hnf_deterministic():
    M = IntMatrix([[4, 6, 8], [2, 3, 5]])
    assert hermite_normal_form(M) == hermite_normal_form(M)


# --- Smith form


def test_snf_diag():
    assert smith_normal_form(IntMatrix([[2, 0], [0, 3]])).elementary_divisors == (1, 6)


@pytest.mark.parametrize("h,d", [(1, 3), (2, 4)])
def test_snf_phd_lattice(h, d):
    M = homogenized(lattice_points(build_phd(PhdSpec(h, d))))
    divs = smith_normal_form(M).elementary_divisors
    assert divs == (1,) * (d + 1)
    assert sympy_invariant_factors(M.tolist()) == [1] * (d + 1)


@settings(max_examples=250, deadline=None)
@given(matrices())
def test_snf_identity_holds(rows):
    M = IntMatrix(rows)
    sf = smith_normal_form(M)
    assert sf.U @ M @ sf.V == sf.S
    assert abs(sf.U.det()) == 1 and abs(sf.V.det()) == 1
    divs = sf.elementary_divisors
    assert all(a > 0 for a in divs)
    assert all(b % a == 0 for a, b in zip(divs, divs[1:]))
    for i in range(sf.S.nrows):
        for j in range(sf.S.ncols):
            if i != j:
                assert sf.S[i, j] == 0
    r = len(divs)
    assert r == rational_rank(rows)
    if r:
        prod = 1
        for x in divs:
            prod *= x
        assert prod == gcd_of_minors(rows, r)


def random_unimodular(n, rng, steps=8):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            rows[0] = [-x for x in rows[0]]
            continue
        q = rng.randint(-3, 3)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix(rows)


@settings(max_examples=200, deadline=None)
@given(matrices(), st.integers(0, 10**6))
def test_snf_invariant_under_unimodular(rows, seed):
    rng = random.Random(seed)
    M = IntMatrix(rows)
    P = random_unimodular(M.nrows, rng)
    Q = random_unimodular(M.ncols, rng)
    assert abs(P.det()) == 1 and abs(Q.det()) == 1
    assert smith_normal_form(P @ M @ Q).elementary_divisors == smith_normal_form(M).elementary_divisors


# --- solving and kernels


@settings(max_examples=200, deadline=None)
@given(matrices(), st.lists(small_ints, min_size=5, max_size=5))
def test_solve_integer_solution_is_exact(rows, x):
    M = IntMatrix(rows)
    x = tuple(x[: M.ncols])
    b = M @ x
    y = solve_integer(M, b)
    assert y is not None and M @ y == b


def test_solve_integer_none_when_only_rational():
    assert solve_integer(IntMatrix([[2, 4]]), (1,)) is None


def test_integer_kernel():
    M = IntMatrix([[1, 1, 1], [0, 1, 2]])
    (k,) = integer_kernel(M)
    assert M @ k == (0, 0) and abs(k[0]) == 1


def test_lattice_index():
    assert lattice_index([(2, 0), (0, 3)]) == 6
    assert lattice_index([(1, 1), (1, -1)]) == 2
    assert lattice_index([(1, 0), (0, 1), (1, 1)]) == 1


# --- sublattice coordinates


def test_sublattice_saturation():
    origin, B, coords = sublattice_coordinates([(0, 0), (2, 0)])
    assert origin == (0, 0)
    assert B.ncols == 1 and B.column(0) in [(1, 0), (-1, 0)]
    assert sorted(abs(c[0]) for c in coords) == [0, 2]


def test_sublattice_f0_square():
    P = build_phd(PhdSpec(1, 3))
    F0 = [p for p in P.vertices if p[0] == 0]
    origin, B, coords = sublattice_coordinates(F0)
    assert B.ncols == 2
    assert sorted(coords) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_sublattice_single_point():
    origin, B, coords = sublattice_coordinates([(3, -1, 2)])
    assert origin == (3, -1, 2) and B.ncols == 0 and coords == [()]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=1, max_size=6))
def test_sublattice_roundtrip(points):
    origin, B, coords = sublattice_coordinates(points)
    for p, c in zip(points, coords):
        back = tuple(o + s for o, s in zip(origin, B @ c)) if B.ncols else origin
        assert back == tuple(p)
    assert B.ncols == rational_rank([[a - b for a, b in zip(p, points[0])] for p in points] + [[0, 0, 0]])
    # saturation: the basis columns extend to a unimodular matrix iff the SNF divisors are all 1
    if B.ncols:
        assert smith_normal_form(B).elementary_divisors == (1,) * B.ncols


# --- unimodular simplices


def unit_simplex(d):
    return [tuple(0 for _ in range(d))] + [tuple(int(i == j) for j in range(d)) for i in range(d)]


def test_unit_simplex_is_unimodular():
    for d in range(1, 6):
        assert is_unimodular_simplex(unit_simplex(d))


def test_f42_unimodular():
    P = build_phd(PhdSpec(2, 4))
    H = facet_enumeration(P)
    # F_{4,2}: 4x_1 - 4x_2 - x_4 <= 0
    (F,) = [f for f in H.facets() if f.normal == (4, -4, 0, -1)]
    verts = [v for v in P.vertices if F.value(v) == F.offset]
    assert len(verts) == 4
    assert is_unimodular_simplex(verts)


def test_fat_simplex_not_unimodular():
    d, h = 4, 3
    pts = [tuple(0 for _ in range(d - 1))]
    pts += [tuple(int(i == j) for j in range(d - 1)) for i in range(d - 2)]
    pts.append(tuple((h - 1) * int(j == d - 2) for j in range(d - 1)))
    edges = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    assert abs(gcd_of_minors(edges, d - 1)) == 2
    assert not is_unimodular_simplex(pts)


def test_non_simplex_false():
    assert not is_unimodular_simplex([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert not is_unimodular_simplex([(0, 0), (1, 1), (2, 2)])


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_unimodular_simplex_invariance(d, seed):
    rng = random.Random(seed)
    base = unit_simplex(d)
    if rng.random() < 0.5:
        base[-1] = tuple(2 * x for x in base[-1])
    expected = is_unimodular_simplex(base)
    U = random_unimodular(d, rng)
    t = tuple(rng.randint(-5, 5) for _ in range(d))
    moved = [tuple(a + b for a, b in zip(U @ p, t)) for p in base]
    rng.shuffle(moved)
    assert is_unimodular_simplex(moved) == expected


# --- total unimodularity


def brute_tu(rows):
    m, n = len(rows), len(rows[0])
    for k in range(1, min(m, n) + 1):
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                if abs(IntMatrix([[rows[i][j] for j in ci] for i in ri]).det()) > 1:
                    return False
    return True


def test_tu_identity():
    assert is_totally_unimodular(IntMatrix.identity(4))


def test_tu_f22_columns():
    d = 4
    e = lambda i: tuple(int(j == i - 1) for j in range(d))  # noqa: E731
    sub = lambda a, b: tuple(x - y for x, y in zip(a, b))  # noqa: E731
    cols = [(0,) * d, sub((0,) * d, e(d)), e(1), sub(e(1), e(d))]
    cols += [e(i) for i in range(3, d)] + [sub(e(i), e(d)) for i in range(3, d)]
    M = IntMatrix.from_columns(cols)
    assert is_totally_unimodular(M)


def test_tu_small_false():
    assert not is_totally_unimodular(IntMatrix([[1, 1], [-1, 1]]))
    assert not is_totally_unimodular(IntMatrix([[2]]))


def test_tu_budget():
    M = IntMatrix([[1 if (i + j) % 3 else 0 for j in range(16)] for i in range(16)])
    with pytest.raises(BudgetExceeded):
        is_totally_unimodular(M, budget=1000)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.lists(
    st.lists(st.sampled_from([-1, 0, 1]), min_size=4, max_size=4), min_size=m, max_size=m)))
def test_tu_matches_brute(rows):
    assert is_totally_unimodular(IntMatrix(rows)) == brute_tu(rows)
