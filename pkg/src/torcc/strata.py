"""Hyperplane-arrangement stratifications of a bounded open window.

Cells are the sign-vector strata of a finite affine arrangement inside the
open box (-R, R)^n.  Each cell carries an exact rational witness point, a
canonical ordered direction basis (used for orientations), and the face
partial order; covering-pair incidence signs feed every compactly
supported complex downstream.  Cells are convex and relatively open, so
sheaves on the poset model constructible sheaves on the window exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from . import fm
from .intlinalg import primitive, rank_rational, solve_rational
from .polyhedron import LCPolyhedron


@dataclass(frozen=True, order=True)
class Hyperplane:
    """Normalized affine hyperplane coeffs . x = rhs."""

    coeffs: tuple
    rhs: object

    @classmethod
    def make(cls, coeffs: Sequence, rhs) -> "Hyperplane":
        co = [Fraction(c) for c in coeffs]
        r = Fraction(rhs)
        if all(c == 0 for c in co):
            raise ValueError("degenerate hyperplane")
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
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            ints = [-v for v in ints]
            ri = -ri
        return cls(tuple(ints), ri)

    def eval_at(self, x: Sequence) -> Fraction:
        return sum(Fraction(c) * Fraction(v) for c, v in zip(self.coeffs, x)) - self.rhs


def hyperplanes_of(poly: LCPolyhedron) -> list[Hyperplane]:
    out = []
    for c in poly.conditions:
        if any(v != 0 for v in c.coeffs):
            out.append(Hyperplane.make(c.coeffs, c.rhs))
    return out


@dataclass
class Cell:
    index: int
    signs: tuple            # -1 / 0 / +1 per hyperplane
    witness: tuple          # rational interior point
    dim: int
    dirbasis: tuple         # ordered canonical basis of the direction space


class Stratification:
    """Sign-vector cells of an arrangement in the open window (-R, R)^n."""

    def __init__(self, n: int, radius, hyperplanes: Iterable[Hyperplane]):
        self.n = n
        self.radius = Fraction(radius)
        hps = sorted(set(hyperplanes))
        self.hyperplanes: tuple = tuple(hps)
        self.cells: list[Cell] = []
        self._cell_by_signs: dict = {}
        self._enumerate_cells()
        self._leq_cache: dict = {}
        self._covers: Optional[list[list[int]]] = None
        self._incidence: dict = {}

    # -- construction ------------------------------------------------------

    def _window_rows(self):
        rows = []
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 1
            rows.append(fm.make_le(e, self.radius, strict=True))
            rows.append(fm.make_ge(e, -self.radius, strict=True))
        return rows

    def _enumerate_cells(self):
        if self.n == 1:
            self._enumerate_cells_1d()
        elif self.n == 2:
            self._enumerate_cells_2d()
        else:
            self._enumerate_cells_generic()
        self.cells.sort(key=lambda c: (c.dim, c.signs))
        for i, c in enumerate(self.cells):
            c.index = i
            self._cell_by_signs[c.signs] = i

    def _signs_of_point(self, x) -> tuple:
        out = []
        for h in self.hyperplanes:
            v = h.eval_at(x)
            out.append(0 if v == 0 else (1 if v > 0 else -1))
        return tuple(out)

    def _maybe_add(self, x) -> None:
        if not self.in_window(x):
            return
        signs = self._signs_of_point(x)
        if signs not in self._cell_by_signs:
            self._cell_by_signs[signs] = True
            self._add_cell(signs, tuple(Fraction(v) for v in x))

    def _enumerate_cells_1d(self):
        r = self.radius
        breaks = sorted(
            {Fraction(h.rhs, h.coeffs[0]) for h in self.hyperplanes}
        )
        breaks = [b for b in breaks if -r < b < r]
        points = [-r] + breaks + [r]
        for b in breaks:
            self._maybe_add((b,))
        for lo, hi in zip(points, points[1:]):
            if lo < hi:
                self._maybe_add(((lo + hi) / 2,))

    def _enumerate_cells_2d(self):
        r = self.radius
        hps = self.hyperplanes
        # exact vertices: pairwise intersections inside the window
        vertices = set()
        for i in range(len(hps)):
            for j in range(i + 1, len(hps)):
                a1, a2 = hps[i].coeffs, hps[j].coeffs
                det = a1[0] * a2[1] - a1[1] * a2[0]
                if det == 0:
                    continue
                x = Fraction(hps[i].rhs * a2[1] - hps[j].rhs * a1[1], det)
                y = Fraction(a1[0] * hps[j].rhs - a2[0] * hps[i].rhs, det)
                if -r < x < r and -r < y < r:
                    vertices.add((x, y))
        for v in vertices:
            self._maybe_add(v)
        edge_witnesses = []
        for h in hps:
            a = h.coeffs
            norm2 = Fraction(a[0] * a[0] + a[1] * a[1])
            base = (Fraction(h.rhs * a[0], 1) / norm2, Fraction(h.rhs * a[1], 1) / norm2)
            d = (Fraction(-a[1]), Fraction(a[0]))  # direction along the line
            # parameter range inside the open window
            t_lo, t_hi = None, None
            ok = True
            for k in range(2):
                if d[k] == 0:
                    if not (-r < base[k] < r):
                        ok = False
                        break
                    continue
                lo_k = (-r - base[k]) / d[k]
                hi_k = (r - base[k]) / d[k]
                if lo_k > hi_k:
                    lo_k, hi_k = hi_k, lo_k
                t_lo = lo_k if t_lo is None else max(t_lo, lo_k)
                t_hi = hi_k if t_hi is None else min(t_hi, hi_k)
            if not ok or t_lo is None or t_lo >= t_hi:
                continue
            params = sorted(
                {
                    Fraction(
                        Fraction(h2.rhs)
                        - (h2.coeffs[0] * base[0] + h2.coeffs[1] * base[1]),
                        h2.coeffs[0] * d[0] + h2.coeffs[1] * d[1],
                    )
                    for h2 in hps
                    if h2.coeffs[0] * d[0] + h2.coeffs[1] * d[1] != 0
                }
            )
            params = [t for t in params if t_lo < t < t_hi]
            stops = [t_lo] + params + [t_hi]
            for lo, hi in zip(stops, stops[1:]):
                if lo >= hi:
                    continue
                t = (lo + hi) / 2
                w = (base[0] + t * d[0], base[1] + t * d[1])
                self._maybe_add(w)
                edge_witnesses.append((w, a))
        # 2-cells: push each edge witness off its line both ways
        self._maybe_add((Fraction(0), Fraction(0)))
        for w, a in edge_witnesses:
            step = None
            for h2 in hps:
                pairing = h2.coeffs[0] * a[0] + h2.coeffs[1] * a[1]
                if pairing == 0:
                    continue
                val = h2.eval_at(w)
                if val != 0:
                    cand = abs(val) / abs(Fraction(pairing))
                    step = cand if step is None else min(step, cand)
            for k in range(2):
                if a[k] != 0:
                    room = (self.radius - abs(w[k])) / abs(Fraction(a[k]))
                    step = room if step is None else min(step, room)
            if step is None:
                step = Fraction(1)
            t = step / 2
            for sgn in (1, -1):
                self._maybe_add((w[0] + sgn * t * a[0], w[1] + sgn * t * a[1]))

    def _enumerate_cells_generic(self):
        base = self._window_rows()

        def rec(idx, rows, signs):
            if idx == len(self.hyperplanes):
                w = fm.witness(rows, self.n)
                if w is None:
                    raise AssertionError("feasible branch lost its witness")
                self._add_cell(tuple(signs), w)
                return
            h = self.hyperplanes[idx]
            branches = (
                (-1, fm.make_le(h.coeffs, h.rhs, strict=True)),
                (0, None),
                (1, fm.make_ge(h.coeffs, h.rhs, strict=True)),
            )
            for sign, row in branches:
                if sign == 0:
                    new_rows = rows + fm.make_eq(h.coeffs, h.rhs)
                else:
                    new_rows = rows + [row]
                if fm.feasible(new_rows, self.n):
                    rec(idx + 1, new_rows, signs + [sign])

        rec(0, base, [])

    def _add_cell(self, signs, witness):
        active = [
            list(h.coeffs) for h, s in zip(self.hyperplanes, signs) if s == 0
        ]
        d = self.n - (rank_rational(active) if active else 0)
        basis = _canonical_ordered_basis(active, self.n)
        self.cells.append(Cell(-1, signs, witness, d, basis))

    # -- lookups -----------------------------------------------------------

    def cell_of_point(self, x: Sequence) -> int:
        if not self.in_window(x):
            raise ValueError("point lies outside the open window")
        signs = []
        for h in self.hyperplanes:
            v = h.eval_at(x)
            signs.append(0 if v == 0 else (1 if v > 0 else -1))
        key = tuple(signs)
        if key not in self._cell_by_signs:
            raise ValueError("point lies outside the enumerated window cells")
        return self._cell_by_signs[key]

    def in_window(self, x: Sequence) -> bool:
        return all(abs(Fraction(v)) < self.radius for v in x)

    def leq(self, i: int, j: int) -> bool:
        """Is cell i contained in the closure of cell j?"""
        key = (i, j)
        if key in self._leq_cache:
            return self._leq_cache[key]
        si = self.cells[i].signs
        sj = self.cells[j].signs
        ok = all(a == b or a == 0 for a, b in zip(si, sj))
        self._leq_cache[key] = ok
        return ok

    def covers(self) -> list[list[int]]:
        """covers()[i] = cells j with i <= j and dim j = dim i + 1."""
        if self._covers is None:
            out = [[] for _ in self.cells]
            for i, ci in enumerate(self.cells):
                for j, cj in enumerate(self.cells):
                    if cj.dim == ci.dim + 1 and self.leq(i, j):
                        out[i].append(j)
            self._covers = out
        return self._covers

    def upset(self, i: int) -> list[int]:
        """Star of a cell: all cells whose closure contains it."""
        return [j for j in range(len(self.cells)) if self.leq(i, j)]

    def comparable_pairs(self) -> list[tuple[int, int]]:
        out = []
        for i in range(len(self.cells)):
            for j in range(len(self.cells)):
                if i != j and self.leq(i, j):
                    out.append((i, j))
        return out

    def incidence(self, i: int, j: int) -> int:
        """Orientation sign for a covering pair i <= j (dim j = dim i + 1)."""
        key = (i, j)
        if key in self._incidence:
            return self._incidence[key]
        ci, cj = self.cells[i], self.cells[j]
        if cj.dim != ci.dim + 1 or not self.leq(i, j):
            raise ValueError("incidence is defined for covering pairs only")
        u = tuple(Fraction(a) - Fraction(b) for a, b in zip(cj.witness, ci.witness))
        cols = [list(map(Fraction, v)) for v in ci.dirbasis] + [list(u)]
        mat = [
            [Fraction(cj.dirbasis[c][r]) for c in range(len(cj.dirbasis))]
            for r in range(self.n)
        ]
        coords = []
        for v in cols:
            sol = solve_rational(mat, v)
            if sol is None:
                raise AssertionError("covering-pair direction outside face span")
            coords.append(sol)
        det = _det([[coords[c][r] for c in range(len(coords))] for r in range(len(coords))])
        sign = 1 if det > 0 else -1
        self._incidence[key] = sign
        return sign

    # -- adaptation --------------------------------------------------------

    def is_adapted(self, poly: LCPolyhedron) -> bool:
        return all(h in self.hyperplanes for h in hyperplanes_of(poly))

    def cells_in(self, poly: LCPolyhedron) -> list[int]:
        if not self.is_adapted(poly):
            raise ValueError("polyhedron is not adapted to the stratification")
        return [c.index for c in self.cells if poly.contains(c.witness)]

    def key(self) -> tuple:
        return (self.n, self.radius, self.hyperplanes)

    def __repr__(self) -> str:
        return "Stratification(n=%d, R=%s, %d hyperplanes, %d cells)" % (
            self.n,
            self.radius,
            len(self.hyperplanes),
            len(self.cells),
        )


def _canonical_ordered_basis(active_rows, n):
    """Ordered basis of the null space of the active functionals (echelon)."""
    if not active_rows:
        rows = []
    else:
        rows = active_rows
    from .intlinalg import nullspace_rational

    if rows:
        ns = nullspace_rational(rows)
    else:
        ns = [tuple(Fraction(1 if i == j else 0) for i in range(n)) for j in range(n)]
    if not ns:
        return ()
    # echelonize for canonical ordering: sort by pivot position
    mat = [list(v) for v in ns]
    m = len(mat)
    r = 0
    pivots = []
    for c in range(n):
        piv = None
        for i in range(r, m):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        mat[r] = [x / mat[r][c] for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return tuple(primitive(mat[i]) for i in range(r))


def _det(a):
    n = len(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(a[0][0])
    tot = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        tot += (-1) ** j * Fraction(a[0][j]) * _det(minor)
    return tot


_STRAT_CACHE: dict = {}


def refine_arrangement(
    polys: Sequence[LCPolyhedron], radius, n: Optional[int] = None,
    extra_hyperplanes: Sequence[Hyperplane] = (),
) -> Stratification:
    """Stratification adapted to every input polyhedron within the window."""
    if n is None:
        if not polys:
            raise ValueError("ambient dimension required when no polyhedra given")
        n = polys[0].n
    hps: list[Hyperplane] = list(extra_hyperplanes)
    for p in polys:
        hps.extend(hyperplanes_of(p))
    key = (n, Fraction(radius), tuple(sorted(set(hps))))
    if key not in _STRAT_CACHE:
        # setdefault keeps the first instance under concurrent builds, so
        # identity-based checks downstream see one object per key
        _STRAT_CACHE.setdefault(key, Stratification(n, radius, hps))
    return _STRAT_CACHE[key]
