"""Affine semigroups, Hilbert bases, lattice points, and semigroup modules.

Cones here live in the character space M_R and lattices may be finer than
Z^n (fractional character lattices), given by a rational basis and an
optional affine offset.  All enumeration is bounded and exact: Hilbert
basis elements are found below the sum of the extreme-ray generators and
filtered for irreducibility, which is exact for pointed cones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fm
from .cones import Cone
from .intlinalg import primitive, solve_rational
from .polyhedron import LCPolyhedron


@dataclass(frozen=True)
class LatticeFrame:
    """Affine lattice offset + Z-span(basis) inside Q^n."""

    n: int
    basis: tuple            # tuple of rational basis vectors (full rank s <= n)
    offset: tuple = None

    def __post_init__(self):
        if self.offset is None:
            object.__setattr__(self, "offset", tuple(Fraction(0) for _ in range(self.n)))

    @classmethod
    def standard(cls, n: int) -> "LatticeFrame":
        return cls(
            n,
            tuple(
                tuple(Fraction(1 if i == j else 0) for i in range(n))
                for j in range(n)
            ),
        )

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence], offset: Sequence = None) -> "LatticeFrame":
        b = tuple(tuple(Fraction(x) for x in v) for v in basis)
        n = len(b[0])
        off = tuple(Fraction(x) for x in offset) if offset is not None else None
        return cls(n, b, off)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def to_ambient(self, t: Sequence[int]) -> tuple:
        pt = list(self.offset)
        for coef, vec in zip(t, self.basis):
            pt = [p + coef * x for p, x in zip(pt, vec)]
        return tuple(pt)

    def coords_of(self, x: Sequence):
        """Lattice coordinates of an ambient point, or None if off-lattice."""
        cols = [[self.basis[j][i] for j in range(self.rank)] for i in range(self.n)]
        rhs = [Fraction(xi) - o for xi, o in zip(x, self.offset)]
        sol = solve_rational(cols, rhs)
        if sol is None or any(c.denominator != 1 for c in sol):
            return None
        return tuple(int(c) for c in sol)

    def member(self, x: Sequence) -> bool:
        return self.coords_of(x) is not None


@dataclass(frozen=True)
class AffineSemigroup:
    """Lattice points of a pointed rational cone with its Hilbert basis."""

    cone: Cone
    lattice: LatticeFrame
    hilbert_basis: tuple     # ambient-coordinate generators, sorted

    def member(self, x: Sequence) -> bool:
        return self.lattice.member(x) and self.cone.contains(x)


def _cone_in_lattice_coords(cone: Cone, lattice: LatticeFrame) -> list[tuple]:
    """H-rep functionals of the cone pulled to lattice coordinates."""
    rows = []
    for a in cone.hrep:
        row = [
            sum(Fraction(ai) * Fraction(bi) for ai, bi in zip(a, vec))
            for vec in lattice.basis
        ]
        rows.append(primitive(row))
    return rows


def hilbert_basis(cone: Cone, lattice: LatticeFrame | None = None) -> AffineSemigroup:
    """Minimal generating set of cone ∩ lattice for a pointed cone.

    Enumeration is restricted to the sub-sum zonotope of the extreme-ray
    generators, which contains every irreducible element.
    """
    if lattice is None:
        lattice = LatticeFrame.standard(cone.n)
    if any(Fraction(x) != 0 for x in lattice.offset):
        raise ValueError("hilbert basis needs a linear (non-affine) lattice")
    if not cone.is_strictly_convex():
        raise ValueError("hilbert basis requires a pointed cone")
    s = lattice.rank
    hrep_t = _cone_in_lattice_coords(cone, lattice)
    tcone = Cone.from_inequalities(s, hrep_t)
    gens = list(tcone.rays)  # primitive in lattice coordinates
    if not gens:
        return AffineSemigroup(cone, lattice, ())
    lo = [sum(min(0, g[j]) for g in gens) for j in range(s)]
    hi = [sum(max(0, g[j]) for g in gens) for j in range(s)]
    candidates = []
    for t in _grid(lo, hi):
        if all(x == 0 for x in t):
            continue
        if not tcone.contains(t):
            continue
        if not _in_zonotope(gens, t):
            continue
        candidates.append(t)
    basis_t = []
    for t in candidates:
        reducible = False
        for q in candidates:
            if q == t:
                continue
            diff = tuple(a - b for a, b in zip(t, q))
            # t = q + diff with both nonzero semigroup elements
            if any(x != 0 for x in diff) and tcone.contains(diff):
                reducible = True
                break
        if not reducible:
            basis_t.append(t)
    ambient = sorted(lattice.to_ambient(t) for t in basis_t)
    return AffineSemigroup(cone, lattice, tuple(ambient))


def _grid(lo, hi):
    def rec(prefix):
        j = len(prefix)
        if j == len(lo):
            yield tuple(prefix)
            return
        for v in range(lo[j], hi[j] + 1):
            yield from rec(prefix + [v])

    yield from rec([])


def _in_zonotope(gens, t):
    """Is t = sum t_i g_i with t_i in [0,1] solvable?"""
    k = len(gens)
    rows = []
    for i in range(len(t)):
        coeffs = [g[i] for g in gens]
        rows.extend(fm.make_eq(coeffs, t[i]))
    for j in range(k):
        e = [0] * k
        e[j] = 1
        rows.append(fm.make_ge(e, 0))
        rows.append(fm.make_le(e, 1))
    return fm.feasible(rows, k)


def lattice_points(
    poly: LCPolyhedron,
    lattice: LatticeFrame | None = None,
    box: tuple[Sequence, Sequence] | None = None,
) -> list[tuple]:
    """All lattice points of ``poly`` within an axis-aligned bounded box.

    Strict and non-strict inequalities are honored exactly.  When ``box``
    is omitted the polyhedron itself must be bounded.
    """
    if lattice is None:
        lattice = LatticeFrame.standard(poly.n)
    region = poly
    if box is not None:
        from .polyhedron import box_polyhedron

        region = poly.intersection(box_polyhedron(poly.n, box[0], box[1]))
    elif not poly.is_bounded():
        raise ValueError("unbounded polyhedron requires an explicit box")
    if region.is_empty():
        return []
    # bound lattice coordinates by projecting the region to each coordinate
    rows = []
    for cond in region.closure().conditions:
        row = [
            sum(Fraction(c) * Fraction(b) for c, b in zip(cond.coeffs, vec))
            for vec in lattice.basis
        ]
        shift = sum(
            Fraction(c) * Fraction(o) for c, o in zip(cond.coeffs, lattice.offset)
        )
        rows.append(fm.make_ge(row, Fraction(cond.rhs) - shift))
        if cond.rel == "=":
            rows.append(fm.make_le(row, Fraction(cond.rhs) - shift))
    s = lattice.rank
    ranges = []
    for j in range(s):
        shadow = fm.project(rows, s, [j])
        lo, hi = None, None
        for coeffs, strict, rhs in shadow:
            c = coeffs[0]
            if c > 0:
                b = Fraction(rhs, c)
                hi = b if hi is None else min(hi, b)
            elif c < 0:
                b = Fraction(rhs, c)
                lo = b if lo is None else max(lo, b)
        if lo is None or hi is None:
            raise ValueError("lattice coordinate %d is unbounded" % j)
        import math

        ranges.append((math.ceil(lo), math.floor(hi)))
    out = []
    for t in _grid([r[0] for r in ranges], [r[1] for r in ranges]):
        pt = lattice.to_ambient(t)
        if region.contains(pt):
            out.append(pt)
    return sorted(out)


@dataclass(frozen=True)
class SemigroupModule:
    """Finitely generated module over an affine semigroup inside a region."""

    semigroup: AffineSemigroup
    region: LCPolyhedron
    generators: tuple

    def member(self, x: Sequence) -> bool:
        return self.semigroup.lattice.member(x) and self.region.contains(x)


def module_generators(region: LCPolyhedron, semigroup: AffineSemigroup) -> SemigroupModule:
    """Minimal generators of region ∩ lattice over the semigroup.

    Requires recession(region) = cone(semigroup): the containment >= makes
    the point set a module, equality makes it finitely generated.
    """
    cone = semigroup.cone
    lattice = semigroup.lattice
    rec = region.recession_cone()
    if not rec.contains_cone(cone):
        raise ValueError("region is not a module: recession cone too small")
    if not cone.contains_cone(rec):
        raise ValueError(
            "module is not finitely generated: recession cone exceeds the semigroup cone"
        )
    if region.is_empty():
        return SemigroupModule(semigroup, region, ())
    verts = region.closure_vertices()
    if not verts:
        raise ValueError("region has no vertices; generators are unbounded")
    hil = semigroup.hilbert_basis
    margin = [
        sum(abs(Fraction(h[j])) for h in hil) if hil else Fraction(0)
        for j in range(region.n)
    ]
    lo = [min(v[j] for v in verts) - margin[j] - 1 for j in range(region.n)]
    hi = [max(v[j] for v in verts) + margin[j] + 1 for j in range(region.n)]
    candidates = lattice_points(region, lattice, (lo, hi))
    gens = []
    for m in candidates:
        reducible = False
        for h in hil:
            prev = tuple(Fraction(a) - Fraction(b) for a, b in zip(m, h))
            if region.contains(prev):
                reducible = True
                break
        if not reducible:
            gens.append(m)
    return SemigroupModule(semigroup, region, tuple(sorted(gens)))


def module_resolution_step(
    module: SemigroupModule,
) -> list[tuple[tuple[int, int], SemigroupModule]]:
    """Pairwise syzygy modules: intersections of translated semigroup cones.

    For generators m_i, m_j (i < j) the relation module is
    (cone + m_i) ∩ (cone + m_j) with its own minimal generators.
    """
    semigroup = module.semigroup
    cone_poly = LCPolyhedron.from_cone(semigroup.cone)
    out = []
    gens = module.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            inter = cone_poly.translate(gens[i]).intersection(
                cone_poly.translate(gens[j])
            )
            out.append(((i, j), module_generators(inter, semigroup)))
    return out


def resolution(
    module: SemigroupModule, depth: int = 4
) -> list[list[SemigroupModule]]:
    """Iterated syzygy layers, truncated at ``depth`` steps."""
    layers = [[module]]
    for _ in range(depth):
        nxt = []
        for mod in layers[-1]:
            for _, syz in module_resolution_step(mod):
                if syz.generators:
                    nxt.append(syz)
        if not nxt:
            break
        layers.append(nxt)
    return layers
