"""Independent oracles used to freeze expected values.

Nothing here imports the code paths it checks.
"""
import itertools
from fractions import Fraction


def box_points(lo, hi):
    return list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def rational_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def in_hull_lp(vertices, x, n=1):
    """x in n*conv(vertices), decided by an exact-enough LP (scipy/HiGHS)."""
    import numpy as np
    from scipy.optimize import linprog

    A = np.array(vertices, dtype=float).T
    A = np.vstack([A, np.ones(len(vertices))])
    b = np.array(list(x) + [n], dtype=float)
    r = linprog(np.zeros(len(vertices)), A_eq=A, b_eq=b, bounds=[(0, None)] * len(vertices), method="highs")
    return r.status == 0


def brute_lattice_points(vertices, n=1):
    lo = [n * min(v[i] for v in vertices) for i in range(len(vertices[0]))]
    hi = [n * max(v[i] for v in vertices) for i in range(len(vertices[0]))]
    return sorted(p for p in box_points(lo, hi) if in_hull_lp(vertices, p, n))


def nfold_sumset(points, n):
    acc = {tuple(0 for _ in points[0])}
    for _ in range(n):
        acc = {tuple(a + b for a, b in zip(s, p)) for s in acc for p in points}
    return acc


def brute_ridge_facets(points):
    """Facets of a full-dimensional polytope by trying every d-subset of points.

    Each affinely independent d-subset spans a hyperplane; it is a facet if all
    points lie on one side.  Returns primitive (normal, offset) with normal.x <= offset.
    """
    import math
    import sympy

    pts = [tuple(p) for p in points]
    d = len(pts[0])
    out = set()
    for sub in itertools.combinations(pts, d):
        M = sympy.Matrix([[1, *p] for p in sub])
        ns = M.nullspace()
        if len(ns) != 1:
            continue
        v = ns[0]
        den = sympy.ilcm(*[sympy.fraction(c)[1] for c in v])
        v = [int(c * den) for c in v]
        g = math.gcd(*v[1:])
        if g == 0:
            continue
        v = [c // g for c in v]
        c0, a = v[0], v[1:]
        vals = [sum(x * y for x, y in zip(a, p)) for p in pts]
        if all(val >= -c0 for val in vals):
            out.add((tuple(-x for x in a), c0))
        elif all(val <= -c0 for val in vals):
            out.add((tuple(a), -c0))
    facets = set()
    for a, b in out:
        tight = [p for p in pts if sum(x * y for x, y in zip(a, p)) == b]
        if rational_rank([[1, *p] for p in tight]) == d:
            facets.add((a, b))
    return facets


# ---------------------------------------------------------------------------
# Toric ideals through fibers


def _monomials(nvars, degree):
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def _image(columns, m):
    return tuple(sum(e * c[i] for e, c in zip(m, columns)) for i in range(len(columns[0])))


def fiber_minima(columns, max_degree):
    """For each monomial up to ``max_degree``: the lex-smallest monomial with the same image.

    Exponent tuples compare lexicographically with the first variable largest.
    """
    out = {}
    for deg in range(1, max_degree + 1):
        fibers = {}
        for m in _monomials(len(columns), deg):
            fibers.setdefault(_image(columns, m), []).append(m)
        for ms in fibers.values():
            lo = min(ms)
            for m in ms:
                out[m] = lo
    return out


def _div(a, b):
    return all(x <= y for x, y in zip(a, b))


def truncated_reduced_groebner(columns, max_degree):
    """The reduced lex Gröbner basis of the toric ideal, elements of degree <= max_degree.

    A monomial lies in the initial ideal iff it is not the minimum of its
    fiber.  Minimal such monomials are the leads and the fiber minima are the
    trailing terms.
    """
    mins = fiber_minima(columns, max_degree)
    leads = []
    for m in sorted(mins, key=lambda m: (sum(m), m)):
        if mins[m] != m and not any(_div(l, m) for l in leads):
            leads.append(m)
    return sorted((l, mins[l]) for l in leads)


def standard_monomials_match(leads, columns, max_degree):
    """True iff the monomials avoiding ``leads`` are exactly the fiber minima."""
    mins = fiber_minima(columns, max_degree)
    bad = []
    for m, lo in mins.items():
        standard = not any(_div(l, m) for l in leads)
        if standard != (m == lo):
            bad.append(m)
    return sorted(bad)


# ---------------------------------------------------------------------------
# Integer matrices


def det_fraction(rows):
    """Determinant by Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(det)


def gcd_of_minors(rows, r):
    """gcd of all r x r minors: the product of the first r elementary divisors."""
    import math

    g = 0
    for ri in itertools.combinations(range(len(rows)), r):
        for ci in itertools.combinations(range(len(rows[0])), r):
            g = math.gcd(g, det_fraction([[rows[i][j] for j in ci] for i in ri]))
    return g


def sympy_invariant_factors(rows):
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    return [int(x) for x in invariant_factors(Matrix(rows), domain=ZZ) if x != 0]


# ---------------------------------------------------------------------------
# Cones and semigroups


def in_cone_lp(rays, x):
    """x in the real cone spanned by rays (scipy LP)."""
    import numpy as np
    from scipy.optimize import linprog

    A = np.array(rays, dtype=float).T
    r = linprog(np.zeros(len(rays)), A_eq=A, b_eq=np.array(x, dtype=float),
                bounds=[(0, None)] * len(rays), method="highs")
    return r.status == 0


def brute_hilbert_basis(rays):
    """Irreducible lattice points of cone(rays), searched in a box that must contain them.

    Every Hilbert basis element lies in a fundamental parallelepiped of some
    simplicial subcone, so its coordinates are bounded by the sums of
    absolute ray coordinates.
    """
    d = len(rays[0])
    bound = [sum(abs(r[i]) for r in rays) for i in range(d)]
    pts = [p for p in box_points([-b for b in bound], bound) if any(p) and in_cone_lp(rays, p)]
    S = set(pts)
    out = []
    for p in pts:
        if not any(tuple(a - b for a, b in zip(p, q)) in S for q in pts if q != p):
            out.append(p)
    return sorted(out)


def graded_closure(gens, grade, top):
    """All sums of gens (including 0) with grade <= top, where grade is a positive functional."""
    seen = {tuple(0 for _ in gens[0])}
    frontier = list(seen)
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = tuple(a + b for a, b in zip(s, g))
                if t not in seen and grade(t) <= top:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return seen


def brute_holes(vertices, max_degree):
    """Holes by degree: LP lattice points of nP minus the n-fold sumset of P's points."""
    pts = brute_lattice_points(vertices, 1)
    out = {}
    for n in range(2, max_degree + 1):
        layer = brute_lattice_points(vertices, n)
        sums = nfold_sumset(pts, n)
        out[n] = sorted(tuple(p) + (n,) for p in layer if tuple(p) not in sums)
    return out


def positive_functional(gens):
    """Integer-valued c with c.g >= 1 for every generator of a pointed cone (scipy LP)."""
    import numpy as np
    from scipy.optimize import linprog

    G = np.array(gens, dtype=float)
    d = G.shape[1]
    r = linprog(G.sum(axis=0), A_ub=-G, b_ub=-np.ones(len(gens)),
                bounds=[(None, None)] * d, method="highs")
    assert r.status == 0
    c = [int(round(x * 1000)) for x in r.x]
    assert all(sum(a * b for a, b in zip(c, g)) >= 1 for g in gens)
    return c


def vertex_semigroup_gaps(points, v, radius):
    """Cone lattice points within ``radius`` (sup norm) of the origin, in the tangent
    cone at v, that are not sums of the vectors p - v."""
    gens = [tuple(a - b for a, b in zip(p, v)) for p in points if tuple(p) != tuple(v)]
    c = positive_functional(gens)
    grade = lambda x: sum(a * b for a, b in zip(c, x))  # noqa: E731
    d = len(v)
    cand = [x for x in box_points([-radius] * d, [radius] * d) if any(x) and in_cone_lp(gens, x)]
    top = max(grade(x) for x in cand)
    closure = graded_closure(gens, grade, top)
    return sorted(x for x in cand if x not in closure)


def sympy_toric_groebner(columns):
    """Reduced lex Gröbner basis of the toric ideal by eliminating t from x_j - t^a_j."""
    import sympy

    d = len(columns[0])
    t = sympy.symbols(f"t1:{d + 1}")
    x = sympy.symbols(f"v0:{len(columns)}")
    gens = [xj - sympy.Mul(*[ti**a for ti, a in zip(t, col)]) for xj, col in zip(x, columns)]
    basis = sympy.groebner(gens, *t, *x, order="lex")
    out = []
    for g in basis.exprs:
        if g.free_symbols & set(t):
            continue
        terms = sympy.Poly(g, *x).terms()
        assert len(terms) == 2 and sorted(c for _, c in terms) == [-1, 1]
        a, b = sorted(tuple(m) for m, _ in terms)
        out.append((b, a))
    return sorted(out)
