"""Rational polyhedral cones with exact V- and H-representations.

A cone is stored as primitive integer extreme rays plus a canonical basis
of its lineality space, together with a pruned H-representation (primitive
integer functionals ``a`` with ``a . x >= 0``).  Conversions go through
Fourier-Motzkin elimination, so everything stays exact.  Intended scale is
ambient rank <= 4 with a handful of rays.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import fm
from .intlinalg import (
    dot,
    kernel_basis,
    nullspace_rational,
    primitive,
    rank_rational,
    saturate,
    solve_rational,
)


def _canonical_subspace_basis(vectors: Sequence[Sequence[int]], n: int) -> tuple:
    """Canonical integer basis of a rational subspace (saturated, echelon, sign-fixed)."""
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    if not vecs:
        return ()
    sat = saturate(vecs, n)
    # bring to a canonical echelon-like form over Z via row reduction on Q then saturation
    rows = [[Fraction(x) for x in v] for v in sat]
    m = len(rows)
    r = 0
    pivots = []
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    canon = [primitive(rows[i]) for i in range(r)]
    return tuple(sorted(canon))


class Cone:
    """Rational polyhedral cone in Z^n (not necessarily strictly convex)."""

    def __init__(self, n: int, rays: tuple, lineality: tuple, hrep: tuple):
        self.n = n
        self.rays = rays          # sorted primitive extreme rays (mod lineality)
        self.lineality = lineality  # canonical basis of the lineality space
        self.hrep = hrep          # sorted primitive functionals, a.x >= 0
        self._dual: "Cone" | None = None
        self._faces: list["Cone"] | None = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_rays(cls, n: int, generators: Sequence[Sequence]) -> "Cone":
        gens = [primitive(g) for g in generators]
        gens = [g for g in gens if any(x != 0 for x in g)]
        if not gens:
            return cls._from_hrep_raw(n, [tuple(row) for row in _identity_pm(n)])
        k = len(gens)
        # x in cone  <=>  exists t >= 0 with x - G t = 0
        rows = []
        for i in range(n):
            coeffs = [0] * n + [0] * k
            coeffs[i] = 1
            for j, g in enumerate(gens):
                coeffs[n + j] = -g[i]
            rows.extend(fm.make_eq(coeffs, 0))
        for j in range(k):
            coeffs = [0] * (n + k)
            coeffs[n + j] = -1
            rows.append(fm.normalize_row(coeffs, False, 0))  # -t_j <= 0
        shadow = fm.project(rows, n + k, list(range(n)))
        hrep = _rows_to_hrep(shadow, n)
        return cls._from_hrep_raw(n, hrep)

    @classmethod
    def from_inequalities(cls, n: int, functionals: Sequence[Sequence]) -> "Cone":
        hrep = [primitive(a) for a in functionals]
        hrep = [a for a in hrep if any(x != 0 for x in a)]
        return cls._from_hrep_raw(n, hrep)

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls.from_rays(n, [])

    @classmethod
    def full(cls, n: int) -> "Cone":
        return cls.from_inequalities(n, [])

    @classmethod
    def _from_hrep_raw(cls, n: int, functionals: Sequence[tuple]) -> "Cone":
        rows = [fm.normalize_row([-a_i for a_i in a], False, 0) for a in functionals]
        pruned = fm.prune(rows, n) if rows else []
        hrep = tuple(sorted(_rows_to_hrep(pruned, n)))
        lin = nullspace_rational([list(a) for a in hrep]) if hrep else [
            tuple(1 if i == j else 0 for i in range(n)) for j in range(n)
        ]
        lineality = _canonical_subspace_basis([primitive(v) for v in lin], n)
        rays = _extreme_rays(n, hrep, lineality)
        return cls(n, tuple(sorted(rays)), lineality, hrep)

    # -- basic queries ---------------------------------------------------

    @property
    def generators(self) -> tuple:
        """Primitive generators: extreme rays plus +-lineality basis."""
        out = list(self.rays)
        for v in self.lineality:
            out.append(v)
            out.append(tuple(-x for x in v))
        return tuple(out)

    def dim(self) -> int:
        vecs = list(self.rays) + list(self.lineality)
        if not vecs:
            return 0
        return rank_rational(vecs)

    def is_strictly_convex(self) -> bool:
        return not self.lineality

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) >= 0 for a in self.hrep)

    def contains_interior(self, x: Sequence) -> bool:
        """Relative interior membership."""
        span_ok = self._in_span(x)
        if not span_ok:
            return False
        for a in self.hrep:
            v = dot(a, x)
            if v < 0:
                return False
            if v == 0 and any(dot(a, g) != 0 for g in self.rays):
                return False
        return True

    def _in_span(self, x: Sequence) -> bool:
        vecs = list(self.rays) + list(self.lineality)
        if not vecs:
            return all(v == 0 for v in x)
        cols = [[Fraction(vecs[j][i]) for j in range(len(vecs))] for i in range(self.n)]
        return solve_rational(cols, list(x)) is not None

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def relative_interior_point(self) -> tuple:
        if not self.rays:
            return tuple(0 for _ in range(self.n))
        acc = [0] * self.n
        for g in self.rays:
            acc = [a + b for a, b in zip(acc, g)]
        return tuple(acc)

    def span_perp_basis(self) -> list[tuple[int, ...]]:
        """Integer basis of the annihilator of span(cone) in the dual lattice."""
        vecs = list(self.rays) + list(self.lineality)
        if not vecs:
            return [tuple(r) for r in _std_basis(self.n)]
        return kernel_basis(_rows(vecs))

    def dual(self) -> "Cone":
        """Polar dual {m : <m, x> >= 0 for all x in the cone}."""
        if self._dual is None:
            self._dual = Cone._from_hrep_raw(
                self.n, [tuple(g) for g in self.generators]
            )
        return self._dual

    def negate(self) -> "Cone":
        return Cone(
            self.n,
            tuple(sorted(tuple(-x for x in r) for r in self.rays)),
            self.lineality,
            tuple(sorted(tuple(-x for x in a) for a in self.hrep)),
        )

    def faces(self) -> list["Cone"]:
        """All faces, including the cone itself and its minimal face."""
        if self._faces is not None:
            return self._faces
        seen = {}
        hrep = list(self.hrep)
        for k in range(len(hrep) + 1):
            for s in combinations(range(len(hrep)), k):
                kept = [
                    g
                    for g in self.rays
                    if all(dot(hrep[i], g) == 0 for i in s)
                ]
                face = Cone.from_rays(
                    self.n, list(kept) + [v for v in self.lineality]
                    + [tuple(-x for x in v) for v in self.lineality]
                )
                seen.setdefault(face.key(), face)
        self._faces = sorted(seen.values(), key=lambda c: (c.dim(), c.key()))
        return self._faces

    def facets(self) -> list["Cone"]:
        d = self.dim()
        return [f for f in self.faces() if f.dim() == d - 1]

    def is_face_of(self, other: "Cone") -> bool:
        if not other.contains_cone(self):
            return False
        active = [
            a for a in other.hrep if all(dot(a, g) == 0 for g in self.generators)
        ]
        kept = [g for g in other.rays if all(dot(a, g) == 0 for a in active)]
        face = Cone.from_rays(
            other.n,
            list(kept)
            + list(other.lineality)
            + [tuple(-x for x in v) for v in other.lineality],
        )
        return face.key() == self.key()

    def intersection(self, other: "Cone") -> "Cone":
        return Cone._from_hrep_raw(self.n, list(self.hrep) + list(other.hrep))

    def is_simplicial(self) -> bool:
        return self.is_strictly_convex() and len(self.rays) == self.dim()

    def is_smooth(self) -> bool:
        """Generators extend to a basis of the ambient lattice."""
        if not self.is_simplicial():
            return False
        if not self.rays:
            return True
        from .intlinalg import smith_normal_form

        snf = smith_normal_form([list(r) for r in self.rays])
        return all(f == 1 for f in snf.invariant_factors)

    def key(self) -> tuple:
        return (self.n, self.rays, self.lineality)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        base = "Cone(rays=%s" % (list(self.rays),)
        if self.lineality:
            base += ", lineality=%s" % (list(self.lineality),)
        return base + ")"


def _rows(vecs):
    return [list(v) for v in vecs]


def _std_basis(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _identity_pm(n):
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(tuple(e))
        out.append(tuple(-x for x in e))
    return out


def _rows_to_hrep(rows, n):
    """Convert <=-0 rows back to >=-0 functionals (homogeneous part only)."""
    out = []
    seen = set()
    for coeffs, strict, rhs in rows:
        if all(c == 0 for c in coeffs):
            continue
        a = primitive([-c for c in coeffs])
        if a not in seen:
            seen.add(a)
            out.append(a)
    return out


def _extreme_rays(n, hrep, lineality):
    """Extreme rays of {x : hrep >= 0}, canonical modulo the lineality space."""
    lin_dim = len(lineality)
    if not hrep:
        return ()
    rays = set()
    rows = [list(a) for a in hrep]
    target_null = lin_dim + 1
    for k in range(0, len(rows) + 1):
        for s in combinations(range(len(rows)), k):
            sub = [rows[i] for i in s]
            ns = nullspace_rational(sub) if sub else nullspace_rational([[0] * n])
            if len(ns) != target_null:
                continue
            # directions in null(S) modulo lineality
            for cand in _null_directions(ns, lineality, n):
                for v in (cand, tuple(-x for x in cand)):
                    if all(dot(a, v) >= 0 for a in hrep) and any(
                        dot(a, v) > 0 for a in hrep
                    ):
                        rays.add(_reduce_mod_lineality(v, lineality))
    return tuple(sorted(rays))


def _null_directions(ns_basis, lineality, n):
    """Candidate ray directions: null-space vectors independent of the lineality."""
    if not lineality:
        if len(ns_basis) == 1:
            return [primitive(ns_basis[0])]
        return []
    out = []
    for v in ns_basis:
        stack = [list(u) for u in lineality] + [list(map(Fraction, v))]
        if rank_rational(stack) == len(lineality) + 1:
            out.append(primitive(v))
    # combinations of basis vectors may also stick out, but for a null space of
    # dimension lineality+1 one independent vector suffices
    return out[:1]


def _reduce_mod_lineality(v, lineality):
    if not lineality:
        return primitive(v)
    # subtract the rational projection onto the lineality space (exact Gram)
    lin = [list(map(Fraction, u)) for u in lineality]
    gram = [[sum(a * b for a, b in zip(u, w)) for w in lin] for u in lin]
    rhs = [sum(Fraction(a) * Fraction(b) for a, b in zip(u, v)) for u in lin]
    coeffs = solve_rational(gram, rhs)
    red = [Fraction(x) for x in v]
    for c, u in zip(coeffs, lin):
        red = [r - c * a for r, a in zip(red, u)]
    return primitive(red)
