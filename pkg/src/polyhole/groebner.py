"""Binomial Gröbner bases of the toric ideal of the ``x_1 = 0`` face of ``P(h, d)``.

Variables, largest first::

    x_1 > ... > x_{2d-4} > y_1 > ... > y_h > z_1 > ... > z_h > w_0 > ... > w_h

With exponent vectors laid out in this order, lex comparison is plain tuple
comparison.  All polynomials met here are binomials with coefficients ±1;
anything else is treated as an internal error.
"""
from __future__ import annotations

import itertools
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .families import PhdSpec
from .linalg import IntMatrix

Monomial = tuple[int, ...]
Polynomial = dict  # Monomial -> int coefficient


class NonBinomialError(AssertionError):
    pass


@dataclass(frozen=True)
class VariableOrder:
    names: tuple[str, ...]

    @classmethod
    def for_spec(cls, spec: PhdSpec) -> "VariableOrder":
        h, d = spec.h, spec.d
        names = [f"x{i}" for i in range(1, 2 * d - 3)]
        names += [f"y{j}" for j in range(1, h + 1)]
        names += [f"z{j}" for j in range(1, h + 1)]
        names += [f"w{k}" for k in range(0, h + 1)]
        assert len(names) == 2 * d + 3 * h - 3
        return cls(tuple(names))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def monomial(self, *factors: str | tuple[str, int]) -> Monomial:
        """Build a monomial from names, optionally with exponents: ``("w0", 2)``."""
        e = [0] * len(self.names)
        for f in factors:
            name, k = (f, 1) if isinstance(f, str) else f
            e[self.index(name)] += k
        return tuple(e)

    def format(self, m: Monomial) -> str:
        parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, m) if k]
        return "*".join(parts) or "1"


def lex_compare(a: Monomial, b: Monomial, order: VariableOrder | None = None) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to, or greater than ``b``."""
    if len(a) != len(b) or (order is not None and len(a) != len(order)):
        raise ValueError("monomials over different variable sets")
    return (a > b) - (a < b)


@dataclass(frozen=True)
class Binomial:
    lead: Monomial
    trail: Monomial
    provenance: str = ""  # G1..G8, spair, reduced
    as_written: bool = True  # False if the written first term was not the larger one

    def __post_init__(self):
        if not self.lead > self.trail:
            raise ValueError("binomial lead must exceed its trailing monomial")

    @classmethod
    def oriented(cls, first: Monomial, second: Monomial, provenance: str = "") -> "Binomial":
        if first > second:
            return cls(first, second, provenance, True)
        return cls(second, first, provenance, False)

    @property
    def degree(self) -> int:
        return max(sum(self.lead), sum(self.trail))

    def as_polynomial(self) -> Polynomial:
        return {self.lead: 1, self.trail: -1}

    def format(self, order: VariableOrder) -> str:
        return f"{order.format(self.lead)} - {order.format(self.trail)}"


@dataclass(frozen=True)
class ToricMap:
    """Column ``j`` is the exponent vector of the image of variable ``j`` in ``t_1..t_d``."""

    columns: tuple[tuple[int, ...], ...]

    @classmethod
    def for_spec(cls, spec: PhdSpec) -> "ToricMap":
        h, d = spec.h, spec.d

        def t(*pairs):  # pairs of (index, exponent), 1-based
            v = [0] * d
            for i, k in pairs:
                v[i - 1] += k
            return tuple(v)

        mid = range(2, d)
        cols = []
        for i in range(1, d - 1):
            cols.append(t((1, 1), (i + 1, 1)))
            cols.append(t((1, 1), (i + 1, 1), (d, 1)))
        for j in range(1, h + 1):
            cols.append(t((1, 1), *((q, j) for q in mid), (d, j - 1)))
        for j in range(1, h + 1):
            cols.append(t((1, 1), *((q, j - 1) for q in mid), (d, j)))
        for k in range(0, h + 1):
            cols.append(t((1, 1), *((q, k) for q in mid), (d, k)))
        return cls(tuple(cols))

    def image(self, m: Monomial) -> tuple[int, ...]:
        d = len(self.columns[0])
        return tuple(sum(e * c[i] for e, c in zip(m, self.columns)) for i in range(d))

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.columns)


def in_toric_ideal(g: Binomial, A: ToricMap) -> bool:
    return A.image(g.lead) == A.image(g.trail)


# --------------------------------------------------------------------------
# The sets G1..G8


def generate_g_sets(spec: PhdSpec, order: VariableOrder | None = None) -> list[Binomial]:
    """All binomials of ``G1 .. G8`` with the displayed index ranges.

    Empty index ranges give empty subsets.  For ``h = 1`` and ``d >= 4`` the
    ``k``-indexed part of ``G8`` mentions ``z_2``, which does not exist; those
    elements are left out (with a warning).
    """
    h, d = spec.h, spec.d
    o = order or VariableOrder.for_spec(spec)
    m = o.monomial
    x = lambda i: f"x{i}"  # noqa: E731
    out: list[Binomial] = []

    def add(first, second, tag):
        if first != second:
            out.append(Binomial.oriented(first, second, tag))

    for i in range(1, d - 2):
        for j in range(i + 1, d - 1):
            add(m(x(2 * i - 1), x(2 * j)), m(x(2 * i), x(2 * j - 1)), "G1")
    for letter in ("y", "z"):
        for i, j, k, l in itertools.combinations_with_replacement(range(1, h + 1), 4):
            if i + l == j + k:
                add(m(f"{letter}{i}", f"{letter}{l}"), m(f"{letter}{j}", f"{letter}{k}"), "G2")
    for i, j, k, l in itertools.combinations_with_replacement(range(0, h + 1), 4):
        if i + l == j + k:
            add(m(f"w{i}", f"w{l}"), m(f"w{j}", f"w{k}"), "G3")
    for i in range(1, d - 1):
        for j in range(1, h + 1):
            add(m(x(2 * i - 1), f"z{j}"), m(x(2 * i), f"w{j - 1}"), "G4")
            add(m(x(2 * i - 1), f"w{j}"), m(x(2 * i), f"y{j}"), "G4")
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            add(m(f"y{i}", f"z{j}"), m(f"w{i - 1}", f"w{j}"), "G5")
    for i in range(1, h):
        for j in range(1, h + 1):
            add(m(f"y{i}", f"w{j}"), m(f"y{i + 1}", f"w{j - 1}"), "G6")
            add(m(f"z{i}", f"w{j}"), m(f"z{i + 1}", f"w{j - 1}"), "G6")
    for i in range(1, d - 1):
        for j in range(2, h + 1):
            add(m(x(2 * i - 1), f"y{j}", "w0"), m(x(2 * i), "y1", f"y{j - 1}"), "G7")
    if d >= 4 and h < 2:
        warnings.warn("G8 elements with z_2 omitted: h = 1 has no variable z_2", stacklevel=2)
    else:
        for k in range(0, d - 3):
            lead = m(*[x(2 * q - 1) for q in range(1, k + 1)], *[x(2 * q) for q in range(k + 1, d - 1)])
            tail = m(("z1", d - 4 - k), "z2", ("w0", k + 1))
            add(lead, tail, "G8")
    add(m(x(2 * d - 4), *[x(2 * q - 1) for q in range(1, d - 2)]), m(("w0", d - 3), "w1"), "G8")
    add(m(*[x(2 * q - 1) for q in range(1, d - 1)]), m(("w0", d - 3), "y1"), "G8")
    return out


# --------------------------------------------------------------------------
# Reduction


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _check_binomial(p: Polynomial):
    if len(p) > 2:
        raise NonBinomialError(f"intermediate polynomial has {len(p)} terms")


def reduce(p: Polynomial | Binomial, G: Sequence[Binomial], order: VariableOrder | None = None) -> Polynomial:
    """Normal form of ``p`` modulo ``G``.

    The reducer is always the first element of ``G`` whose lead divides the
    largest reducible term.
    """
    if isinstance(p, Binomial):
        p = p.as_polynomial()
    p = {m: c for m, c in p.items() if c}
    _check_binomial(p)
    while True:
        for mono in sorted(p, reverse=True):
            g = next((g for g in G if _divides(g.lead, mono)), None)
            if g is not None:
                break
        else:
            return p
        c = p.pop(mono)
        new = tuple(a - l + t for a, l, t in zip(mono, g.lead, g.trail))
        p[new] = p.get(new, 0) + c
        if p[new] == 0:
            del p[new]
        _check_binomial(p)


def reduce_monomial(m: Monomial, G: Sequence[Binomial]) -> Monomial:
    while True:
        g = next((g for g in G if _divides(g.lead, m)), None)
        if g is None:
            return m
        m = tuple(a - l + t for a, l, t in zip(m, g.lead, g.trail))


def s_pair(g1: Binomial, g2: Binomial, order: VariableOrder | None = None) -> Polynomial:
    L = tuple(max(a, b) for a, b in zip(g1.lead, g2.lead))
    t1 = tuple(a - l + t for a, l, t in zip(L, g1.lead, g1.trail))
    t2 = tuple(a - l + t for a, l, t in zip(L, g2.lead, g2.trail))
    if t1 == t2:
        return {}
    return {t1: -1, t2: 1}


def initial_ideal_squarefree(G: Iterable[Binomial], order: VariableOrder | None = None) -> bool:
    return all(e <= 1 for g in G for e in g.lead)


def reduced_basis(G: Sequence[Binomial]) -> list[Binomial]:
    """Reduced Gröbner basis obtained from a Gröbner basis ``G``."""
    # ties on the lead keep the smallest trailing term, so the result does not depend on input order
    G = sorted(set(G), key=lambda g: (sum(g.lead), g.lead, g.trail))
    minimal = []
    for g in G:
        if not any(_divides(f.lead, g.lead) for f in minimal):
            minimal = [f for f in minimal if not _divides(g.lead, f.lead)] + [g]
    out = []
    for g in minimal:
        t = reduce_monomial(g.trail, minimal)
        out.append(Binomial(g.lead, t, "reduced"))
    return sorted(out, key=lambda g: (g.lead, g.trail))


# --------------------------------------------------------------------------
# Verification


@dataclass
class GroebnerReport:
    generators: int
    kernel_failures: list[int]
    pairs_checked: int
    failures: list[dict]
    membership_bound: int
    fibers_checked: int
    binomials_checked: int
    membership_failures: list[dict]
    squarefree_initial: bool
    certified: bool
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.certified
            and not self.kernel_failures
            and not self.failures
            and not self.membership_failures
        )

    def to_json(self) -> dict:
        return {
            "generators": self.generators,
            "kernel_failures": self.kernel_failures,
            "pairs_checked": self.pairs_checked,
            "failures": self.failures,
            "membership_bound": self.membership_bound,
            "fibers_checked": self.fibers_checked,
            "binomials_checked": self.binomials_checked,
            "membership_failures": self.membership_failures,
            "squarefree_initial": self.squarefree_initial,
            "certified": self.certified,
            "ok": self.ok,
            "notes": self.notes,
        }


def monomials_of_degree(nvars: int, degree: int):
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def buchberger_verify(
    G: Sequence[Binomial],
    order: VariableOrder,
    A: ToricMap,
    membership_bound: int | None = None,
    max_monomials: int = 2_000_000,
) -> GroebnerReport:
    """Check that ``G`` is a Gröbner basis of the toric ideal of ``A``.

    (i) every S-pair reduces to zero modulo ``G``;  (ii) up to
    ``membership_bound``, every binomial ``u - v`` of the ideal reduces to
    zero, checked fiber by fiber: all monomials with the same image must
    share one normal form.
    """
    G = list(G)
    notes = []
    kernel_failures = [i for i, g in enumerate(G) if not in_toric_ideal(g, A)]
    failures = []
    pairs = 0
    for i, j in itertools.combinations(range(len(G)), 2):
        pairs += 1
        r = reduce(s_pair(G[i], G[j]), G)
        if r:
            failures.append(
                {"pair": [i, j], "remainder": [[list(m), c] for m, c in sorted(r.items(), reverse=True)]}
            )
    if membership_bound is None:
        membership_bound = max((g.degree for g in G), default=1) + 2
    nvars = len(order)
    fibers_checked = binomials_checked = 0
    membership_failures = []
    certified = True
    total = 0
    for deg in range(1, membership_bound + 1):
        fibers = defaultdict(set)
        sizes = defaultdict(int)
        for mono in monomials_of_degree(nvars, deg):
            total += 1
            if total > max_monomials:
                certified = False
                notes.append(f"monomial budget exhausted in degree {deg}")
                break
            img = A.image(mono)
            fibers[img].add(reduce_monomial(mono, G))
            sizes[img] += 1
        for img, nfs in fibers.items():
            fibers_checked += 1
            binomials_checked += sizes[img] * (sizes[img] - 1) // 2
            if len(nfs) > 1:
                membership_failures.append(
                    {"degree": deg, "image": list(img), "normal_forms": [list(m) for m in sorted(nfs)]}
                )
        if not certified:
            break
    return GroebnerReport(
        generators=len(G),
        kernel_failures=kernel_failures,
        pairs_checked=pairs,
        failures=failures,
        membership_bound=membership_bound,
        fibers_checked=fibers_checked,
        binomials_checked=binomials_checked,
        membership_failures=membership_failures,
        squarefree_initial=initial_ideal_squarefree(G),
        certified=certified,
        notes=notes,
    )


def verify_spec(spec: PhdSpec, membership_bound: int | None = None) -> GroebnerReport:
    order = VariableOrder.for_spec(spec)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        G = generate_g_sets(spec, order)
    report = buchberger_verify(G, order, ToricMap.for_spec(spec), membership_bound)
    report.notes.extend(str(w.message) for w in caught)
    not_as_written = [g.format(order) for g in G if not g.as_written]
    if not_as_written:
        report.notes.append(f"written first term is not the lex-initial term for: {not_as_written}")
    return report
