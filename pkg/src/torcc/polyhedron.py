"""Locally closed rational polyhedra: exact mixed strict/non-strict systems."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from . import fm
from .cones import Cone
from .intlinalg import dot, rank_rational, solve_rational

RELS = ("<", "<=", "=", ">", ">=")


@dataclass(frozen=True)
class LinCondition:
    """Primitive-integer condition ``coeffs . x REL rhs``."""

    coeffs: tuple
    rel: str
    rhs: object

    @classmethod
    def make(cls, coeffs: Sequence, rel: str, rhs) -> "LinCondition":
        if rel not in RELS:
            raise ValueError("unknown relation %r" % rel)
        co = [Fraction(c) for c in coeffs]
        r = Fraction(rhs)
        den = 1
        for c in co + [r]:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in co]
        ri = int(r * den)
        g = 0
        for v in ints + [ri]:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
            ri //= g
        if rel in ("<", "<="):
            ints = [-v for v in ints]
            ri = -ri
            rel = ">" if rel == "<" else ">="
        return cls(tuple(ints), rel, ri)

    def holds(self, x: Sequence) -> bool:
        v = sum(Fraction(c) * Fraction(xi) for c, xi in zip(self.coeffs, x))
        if self.rel == "=":
            return v == self.rhs
        if self.rel == ">":
            return v > self.rhs
        return v >= self.rhs

    def fm_rows(self) -> list:
        if self.rel == "=":
            return fm.make_eq(self.coeffs, self.rhs)
        return [fm.make_ge(self.coeffs, self.rhs, strict=self.rel == ">")]

    def closure(self) -> "LinCondition":
        return LinCondition(self.coeffs, "=" if self.rel == "=" else ">=", self.rhs)

    def flip_strictness(self) -> "LinCondition":
        if self.rel == "=":
            return self
        return LinCondition(self.coeffs, ">" if self.rel == ">=" else ">=", self.rhs)

    def translate(self, v: Sequence) -> "LinCondition":
        shift = sum(Fraction(c) * Fraction(x) for c, x in zip(self.coeffs, v))
        return LinCondition.make(self.coeffs, self.rel, Fraction(self.rhs) + shift)

    def negate_space(self) -> "LinCondition":
        """Condition describing {-x : original holds at x}."""
        return LinCondition.make(
            [-c for c in self.coeffs], self.rel, self.rhs
        )


class LCPolyhedron:
    """Intersection of finitely many strict/closed half-spaces and hyperplanes."""

    def __init__(self, n: int, conditions: Sequence[LinCondition]):
        self.n = n
        seen: list[LinCondition] = []
        empty = False
        for c in conditions:
            if all(v == 0 for v in c.coeffs):
                # ground condition: either vacuous or marks emptiness
                if not c.holds([0] * n):
                    empty = True
                    break
                continue
            if c not in seen:
                seen.append(c)
        if empty:
            self.conditions: tuple = (LinCondition(tuple([0] * n), ">", 0),)
            self._empty_marker = True
        else:
            self.conditions = tuple(seen)
            self._empty_marker = False

    @classmethod
    def from_strings(
        cls, n: int, triples: Sequence[tuple[Sequence, str, object]]
    ) -> "LCPolyhedron":
        return cls(n, [LinCondition.make(*t) for t in triples])

    @classmethod
    def whole_space(cls, n: int) -> "LCPolyhedron":
        return cls(n, [])

    @classmethod
    def empty(cls, n: int) -> "LCPolyhedron":
        return cls(n, [LinCondition(tuple([0] * n), ">", 0)])

    @classmethod
    def from_cone(cls, cone: Cone, interior: bool = False, shift: Sequence = None) -> "LCPolyhedron":
        """Cone (or its relative interior) translated by ``shift``.

        Relative interior: facet inequalities strict, span equalities kept.
        """
        conds = []
        for a in cone.hrep:
            facet = any(dot(a, g) != 0 for g in cone.rays)
            neg = tuple(-x for x in a)
            if neg in cone.hrep and a > neg:
                continue  # the pair encodes an equality; keep one copy
            if neg in cone.hrep:
                conds.append(LinCondition.make(a, "=", 0))
            elif interior and facet:
                conds.append(LinCondition.make(a, ">", 0))
            else:
                conds.append(LinCondition.make(a, ">=", 0))
        poly = cls(cone.n, conds)
        if shift is not None and any(Fraction(x) != 0 for x in shift):
            poly = poly.translate(shift)
        return poly

    def is_empty(self) -> bool:
        if self._empty_marker:
            return True
        return not fm.feasible(self.fm_rows(), self.n)

    def fm_rows(self) -> list:
        rows = []
        for c in self.conditions:
            rows.extend(c.fm_rows())
        return rows

    def contains(self, x: Sequence) -> bool:
        if self._empty_marker:
            return False
        return all(c.holds(x) for c in self.conditions)

    def intersection(self, other: "LCPolyhedron") -> "LCPolyhedron":
        return LCPolyhedron(self.n, list(self.conditions) + list(other.conditions))

    def translate(self, v: Sequence) -> "LCPolyhedron":
        if self._empty_marker:
            return self
        return LCPolyhedron(self.n, [c.translate(v) for c in self.conditions])

    def negate_space(self) -> "LCPolyhedron":
        if self._empty_marker:
            return self
        return LCPolyhedron(self.n, [c.negate_space() for c in self.conditions])

    def closure(self) -> "LCPolyhedron":
        if self._empty_marker:
            return self
        return LCPolyhedron(self.n, [c.closure() for c in self.conditions])

    def dual_flip(self) -> "LCPolyhedron":
        """Swap strict and non-strict facets (the combinatorial dual body)."""
        if self._empty_marker:
            return self
        return LCPolyhedron(self.n, [c.flip_strictness() for c in self.conditions])

    def recession_cone(self) -> Cone:
        """Recession cone of the closure."""
        if self._empty_marker:
            return Cone.zero(self.n)
        functionals = []
        for c in self.conditions:
            functionals.append(c.coeffs)
            if c.rel == "=":
                functionals.append(tuple(-x for x in c.coeffs))
        return Cone.from_inequalities(self.n, functionals)

    def is_bounded(self) -> bool:
        rec = self.recession_cone()
        return rec.dim() == 0

    def closure_vertices(self) -> list[tuple[Fraction, ...]]:
        """Vertices of the closure (0-dimensional faces)."""
        if self._empty_marker:
            return []
        rows = [c for c in self.conditions]
        verts = set()
        for s in combinations(range(len(rows)), self.n):
            sub = [list(rows[i].coeffs) for i in s]
            if rank_rational(sub) != self.n:
                continue
            sol = solve_rational(sub, [rows[i].rhs for i in s])
            if sol is None:
                continue
            pt = tuple(sol)
            if all(c.closure().holds(pt) for c in self.conditions):
                verts.add(pt)
        return sorted(verts)

    def witness(self):
        if self._empty_marker:
            return None
        return fm.witness(self.fm_rows(), self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LCPolyhedron):
            return NotImplemented
        return self.n == other.n and set(self.conditions) == set(other.conditions)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.conditions)))

    def __repr__(self) -> str:
        if self._empty_marker:
            return "LCPolyhedron(empty)"
        return "LCPolyhedron(%s)" % "; ".join(
            "%s %s %s" % (list(c.coeffs), c.rel, c.rhs) for c in self.conditions
        )


def box_polyhedron(n: int, lo: Sequence, hi: Sequence, strict: bool = False) -> LCPolyhedron:
    conds = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        conds.append(LinCondition.make(e, ">" if strict else ">=", lo[i]))
        conds.append(LinCondition.make([-x for x in e], ">" if strict else ">=", -Fraction(hi[i])))
    return LCPolyhedron(n, conds)
