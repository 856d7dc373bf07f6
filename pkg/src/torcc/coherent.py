"""Coherent-side combinatorics: twisted chart generators and their graded homs.

Generators are pairs (cone, character coset); hom spaces between them are
free on lattice points of a dual cone translated into a character coset,
reported inside an explicit degree window.  The module also builds the
fan-indexed structure resolution of the unit sheaf and an independent
chart-by-chart cohomology routine for invariant divisors, both as exact
integer data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .chains import Complex
from .cones import Cone
from .fans import StackyFan
from .intlinalg import mat_vec, rank_rational, solve_rational
from .polyhedron import LCPolyhedron
from .semigroups import LatticeFrame, lattice_points


@dataclass(frozen=True)
class GenObject:
    """Chart generator: a base cone together with a character coset."""

    sf: StackyFan
    sigma: Cone
    coset: tuple

    def __post_init__(self):
        data = self.sf.m_sigma(self.sigma)
        data.group._check(self.coset)

    @property
    def chi(self) -> tuple:
        return self.sf.m_sigma(self.sigma).rep_of(self.coset)

    def key(self) -> tuple:
        return (self.sigma.key(), self.coset)

    def __repr__(self) -> str:
        return "GenObject(rays=%s, coset=%s)" % (list(self.sigma.rays), self.coset)


@dataclass(frozen=True)
class GradedHom:
    """Basis of a hom space in a bounded character window, degree 0."""

    source: GenObject
    target: GenObject
    window: int
    basis: tuple  # lattice points, ambient rational coordinates
    homological_degree: int = 0


def hom_basis(a: GenObject, b: GenObject, window: int) -> GradedHom:
    """Lattice-point basis of Hom(a, b) within the window box.

    Nonzero only when the target cone is a face of the source cone; the
    basis is tau-dual-cone points in the shifted lattice M + chi_b - chi_a.
    """
    if a.sf is not b.sf:
        raise ValueError("hom between generators of different stacky fans")
    n = a.sf.n_rank
    if not b.sigma.is_face_of(a.sigma):
        return GradedHom(a, b, window, ())
    delta = tuple(Fraction(x) - Fraction(y) for x, y in zip(b.chi, a.chi))
    frame = LatticeFrame.standard(n)
    frame = LatticeFrame(n, frame.basis, delta)
    dual = b.sigma.dual()
    poly = LCPolyhedron.from_cone(dual)
    pts = lattice_points(
        poly, frame, box=((-window,) * n, (window,) * n)
    )
    return GradedHom(a, b, window, tuple(pts))


@dataclass(frozen=True)
class HomElement:
    source: GenObject
    target: GenObject
    point: tuple


def compose(f: HomElement, g: HomElement) -> HomElement:
    """Composite g . f; basis labels add."""
    if f.target.key() != g.source.key():
        raise ValueError("incomposable: target of f differs from source of g")
    if not g.target.sigma.is_face_of(f.source.sigma):
        raise ValueError("incomposable: no face relation for the composite")
    pt = tuple(Fraction(x) + Fraction(y) for x, y in zip(f.point, g.point))
    return HomElement(f.source, g.target, pt)


def identity_element(a: GenObject) -> HomElement:
    return HomElement(a, a, tuple(Fraction(0) for _ in range(a.sf.n_rank)))


def restrict_generator(a: GenObject, tau: Cone) -> GenObject:
    """Restriction to a face chart, recanonicalizing the coset."""
    if not tau.is_face_of(a.sigma):
        raise ValueError("restriction target must be a face")
    data = a.sf.m_sigma(tau)
    coset = data.coset_of(a.chi)
    return GenObject(a.sf, tau, coset)


def _orientation_basis(c: Cone) -> list[tuple]:
    """Deterministic ordered basis of span(cone) from its sorted rays."""
    base: list[tuple] = []
    for r in c.rays:
        trial = base + [r]
        if rank_rational([list(v) for v in trial]) == len(trial):
            base.append(r)
    return base


def incidence_sign(tau: Cone, sigma: Cone) -> int:
    """Orientation-comparison sign for a facet tau of sigma."""
    b_tau = _orientation_basis(tau)
    b_sigma = _orientation_basis(sigma)
    u = sigma.relative_interior_point()
    cols = b_tau + [u]
    mat = [[Fraction(b_sigma[j][i]) for j in range(len(b_sigma))] for i in range(sigma.n)]
    coords = []
    for v in cols:
        sol = solve_rational(mat, list(v))
        if sol is None:
            raise ValueError("facet basis does not lie in the cone span")
        coords.append(sol)
    det = _det([[coords[j][i] for j in range(len(coords))] for i in range(len(coords))])
    if det == 0:
        raise ValueError("degenerate incidence")
    return 1 if det > 0 else -1


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


@dataclass
class CechComplex:
    """Fan-indexed resolution of the unit chart sheaf.

    Terms are (cohomological degree, generator); the differential stores
    signed components between term indices.  Degree of a cone of dimension
    i is n - i, so maximal cones sit in degree 0.
    """

    sf: StackyFan
    terms: list[tuple[int, GenObject]]
    components: dict  # (src_index, dst_index) -> sign

    def degree_m_strand(self, m: Sequence) -> Complex:
        """Exact strand of the character grading at the lattice point m."""
        alive = []
        for idx, (deg, gen) in enumerate(self.terms):
            if gen.sigma.dual().contains(m):
                alive.append(idx)
        alive_set = {idx: i for i, idx in enumerate(alive)}
        dims: dict[int, int] = {}
        index_in_degree = {}
        for idx in alive:
            deg = self.terms[idx][0]
            index_in_degree[idx] = dims.get(deg, 0)
            dims[deg] = dims.get(deg, 0) + 1
        diff: dict[int, list] = {}
        for (src, dst), sign in self.components.items():
            if src not in alive_set or dst not in alive_set:
                continue
            d_src = self.terms[src][0]
            mat = diff.setdefault(
                d_src,
                [[0] * dims.get(d_src, 0) for _ in range(dims.get(d_src + 1, 0))],
            )
            mat[index_in_degree[dst]][index_in_degree[src]] = sign
        return Complex(dims, diff)

    def validate(self) -> None:
        """d^2 = 0 on every strand spanned by the terms' dual cones."""
        comp: dict[tuple[int, int], int] = {}
        for (a, b), s1 in self.components.items():
            for (c, d), s2 in self.components.items():
                if b == c:
                    key = (a, d)
                    comp[key] = comp.get(key, 0) + s1 * s2
        if any(v != 0 for v in comp.values()):
            raise ValueError("structure complex differential does not square to zero")


def cech_structure_complex(sf: StackyFan) -> CechComplex:
    """Resolution of the unit by untwisted generators, one term per cone."""
    n = sf.n_rank
    terms: list[tuple[int, GenObject]] = []
    index: dict[tuple, int] = {}
    for sigma in sf.fan.cones:
        deg = n - sigma.dim()
        gen = GenObject(sf, sigma, sf.m_sigma(sigma).group.zero())
        index[sigma.key()] = len(terms)
        terms.append((deg, gen))
    components: dict[tuple[int, int], int] = {}
    for sigma in sf.fan.cones:
        for tau in sigma.facets():
            if tau.key() not in index:
                continue
            sign = incidence_sign(tau, sigma)
            components[(index[sigma.key()], index[tau.key()])] = sign
    cc = CechComplex(sf, terms, components)
    cc.validate()
    return cc


@dataclass(frozen=True)
class DivisorData:
    """Integer coefficient per ray of the upstairs fan."""

    sf: StackyFan
    coefficients: tuple

    def __post_init__(self):
        rays = self.sf.fan_hat.cones_of_dim(1)
        if len(self.coefficients) != len(rays):
            raise ValueError(
                "need exactly one coefficient per ray (%d)" % len(rays)
            )

    def ray_pairs(self) -> list[tuple[tuple, int]]:
        """(image-of-ray generator in N, coefficient), sorted by ray."""
        rays = sorted(self.sf.fan_hat.cones_of_dim(1), key=lambda c: c.key())
        return [
            (mat_vec(self.sf.beta, rays[i].rays[0]), int(self.coefficients[i]))
            for i in range(len(rays))
        ]

    def add(self, other: "DivisorData") -> "DivisorData":
        return DivisorData(
            self.sf,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def section_polyhedron(self, tau_hat: Cone) -> LCPolyhedron:
        """Chart sections: m with <m, beta(ray)> >= -a_ray for rays of the cone."""
        conds = []
        rays = sorted(self.sf.fan_hat.cones_of_dim(1), key=lambda c: c.key())
        for ray, coeff in zip(rays, self.coefficients):
            if ray.is_face_of(tau_hat):
                v = mat_vec(self.sf.beta, ray.rays[0])
                conds.append((tuple(v), ">=", -int(coeff)))
        return LCPolyhedron.from_strings(self.sf.n_rank, conds)

    def chart_vertex(self, sigma_hat: Cone) -> tuple:
        """Trivializing character on a maximal smooth chart.

        Solves <m, beta(ray)> = -a_ray over the chart's rays; requires the
        chart to be simplicial (unique solution on the span, extended by
        zero on a complement).
        """
        rays = sorted(self.sf.fan_hat.cones_of_dim(1), key=lambda c: c.key())
        eqs = []
        rhs = []
        for ray, coeff in zip(rays, self.coefficients):
            if ray.is_face_of(sigma_hat):
                eqs.append(list(mat_vec(self.sf.beta, ray.rays[0])))
                rhs.append(-int(coeff))
        if not eqs:
            return tuple(Fraction(0) for _ in range(self.sf.n_rank))
        if rank_rational(eqs) < len(eqs):
            raise ValueError("chart is not simplicial; no single trivialization")
        # underdetermined systems: pick the solution vanishing on a complement
        sol = solve_rational(eqs, rhs)
        if sol is None:
            raise ValueError("inconsistent chart trivialization")
        # project to a canonical solution: subtract nullspace components is not
        # needed for dimension checks; return the particular solution
        return tuple(sol)


def line_bundle_cohomology(
    sf: StackyFan, divisor: DivisorData, window: int
) -> dict[tuple, dict[int, int]]:
    """Chart-by-chart cohomology of an invariant divisor, graded exactly.

    For every lattice point m in the window box, the subset complex over
    maximal cones with coefficient 1 when m lies in the chart section set;
    returns {m: {homological degree: dimension}} with zero rows omitted.
    """
    n = sf.n_rank
    maxc = sorted(sf.fan_hat.maximal_cones(), key=lambda c: c.key())
    if not maxc:
        return {}
    polys = {}
    for r in range(1, len(maxc) + 1):
        for subset in combinations(range(len(maxc)), r):
            inter = maxc[subset[0]]
            for i in subset[1:]:
                inter = inter.intersection(maxc[i])
            polys[subset] = divisor.section_polyhedron(inter)
    out: dict[tuple, dict[int, int]] = {}
    for m in _integer_box(n, window):
        dims: dict[int, int] = {}
        alive: dict[tuple, int] = {}
        for subset, poly in polys.items():
            if poly.contains(m):
                k = len(subset) - 1
                alive[subset] = dims.get(k, 0)
                dims[k] = dims.get(k, 0) + 1
        if not dims:
            continue
        diff: dict[int, list] = {}
        for subset in alive:
            k = len(subset) - 1
            for j in range(len(maxc)):
                if j in subset:
                    continue
                bigger = tuple(sorted(subset + (j,)))
                if bigger not in alive:
                    continue
                sign = (-1) ** bigger.index(j)
                mat = diff.setdefault(
                    k, [[0] * dims.get(k, 0) for _ in range(dims.get(k + 1, 0))]
                )
                mat[alive[bigger]][alive[subset]] = sign
        cx = Complex(dims, diff)
        cx.validate()
        coh = cx.cohomology()
        if coh:
            out[tuple(m)] = coh
    return out


def _integer_box(n: int, radius: int):
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(-radius, radius + 1):
            yield from rec(prefix + [v])

    yield from rec([])


def euler_characteristic_check(
    sf: StackyFan, divisor: DivisorData, window: int
) -> bool:
    """Per-degree Euler characteristic equals the chart indicator sum."""
    n = sf.n_rank
    maxc = sorted(sf.fan_hat.maximal_cones(), key=lambda c: c.key())
    coh = line_bundle_cohomology(sf, divisor, window)
    for m in _integer_box(n, window):
        euler = sum((-1) ** k * v for k, v in coh.get(tuple(m), {}).items())
        indicator = 0
        for r in range(1, len(maxc) + 1):
            for subset in combinations(range(len(maxc)), r):
                inter = maxc[subset[0]]
                for i in subset[1:]:
                    inter = inter.intersection(maxc[i])
                if divisor.section_polyhedron(inter).contains(m):
                    indicator += (-1) ** (r - 1)
        if euler != indicator:
            return False
    return True
