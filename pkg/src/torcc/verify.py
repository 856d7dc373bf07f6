"""Cross-side verification: the mirror functor on generators and the check suite.

Each check compares exact integer data computed independently on the two
sides: lattice-point homs against translated-sheaf homs, chart resolutions
against the unit sheaf, dual polytopes against adjoint homs, conic
vanishing, and microsupport against the skeleton.  Reports are
deterministic and JSON-serializable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Optional, Sequence

from .chains import Complex
from .coherent import (
    CechComplex,
    DivisorData,
    GenObject,
    cech_structure_complex,
    hom_basis,
    line_bundle_cohomology,
)
from .cones import Cone
from .fans import StackyFan, build_skeleton
from .intlinalg import dot, solve_rational
from .polyhedron import LCPolyhedron
from .sheaves import (
    PosetSheaf,
    flatten_terms,
    indicator_sheaf,
    sheaves_summary_equal,
    transport,
    verdier_dual,
)
from .sheafops import (
    PropernessError,
    _fiber_data,
    convolve,
    hom_star,
    microsupport,
    rhom,
    skyscraper,
    torus_hom,
)
from .strata import Hyperplane, Stratification, refine_arrangement
from .sheaves import _refined_strat


# -- report plumbing ------------------------------------------------------------


@dataclass
class CheckResult:
    check_id: str
    status: str  # "pass" | "fail" | "error"
    params: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "check": self.check_id,
            "status": self.status,
            "params": _canon(self.params),
            "tables": _canon(self.tables),
            "failures": _canon(self.failures),
        }


@dataclass
class VerificationReport:
    suite: str
    checks: Dict[str, CheckResult] = field(default_factory=dict)

    def add(self, result: CheckResult) -> None:
        self.checks[result.check_id] = result

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "checks": {k: self.checks[k].to_dict() for k in sorted(self.checks)},
        }


def _canon(obj):
    if isinstance(obj, dict):
        return {_canon_key(k): _canon(v) for k, v in sorted(obj.items(), key=lambda kv: _canon_key(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    if isinstance(obj, Fraction):
        return "%d/%d" % (obj.numerator, obj.denominator)
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    return str(obj) if not isinstance(obj, (str, float)) else obj


def _canon_key(k):
    if isinstance(k, (tuple, list)):
        return ",".join(str(_canon(v)) for v in k)
    if isinstance(k, Fraction):
        return "%d/%d" % (k.numerator, k.denominator)
    return str(k)


# -- the generator mirror -------------------------------------------------------


def theta_polyhedron(sf: StackyFan, sigma: Cone, chi: Sequence) -> LCPolyhedron:
    """Open dual-cone region of a generator: Int(dual cone) + chi."""
    dual = sigma.dual()
    return LCPolyhedron.from_cone(dual, interior=True, shift=chi)


def kappa_generator(g: GenObject, radius, extra_polys: Sequence[LCPolyhedron] = ()) -> PosetSheaf:
    """Indicator of the shifted open dual cone, in homological shift n."""
    sf = g.sf
    poly = theta_polyhedron(sf, g.sigma, g.chi)
    strat = refine_arrangement([poly] + list(extra_polys), radius, n=sf.n_rank)
    return indicator_sheaf(strat, poly, shift=sf.n_rank)


def kappa_structure_sheaf(sf: StackyFan, radius) -> PosetSheaf:
    """Flattened mirror image of the fan-indexed unit resolution."""
    cc = cech_structure_complex(sf)
    n = sf.n_rank
    polys = [
        theta_polyhedron(sf, gen.sigma, gen.chi) for _, gen in cc.terms
    ]
    strat = refine_arrangement(polys, radius, n=n)
    terms = []
    for (deg, gen), poly in zip(cc.terms, polys):
        terms.append((deg, indicator_sheaf(strat, poly, shift=n)))
    return flatten_terms(strat, terms, cc.components)


def kappa_line_bundle(sf: StackyFan, divisor: DivisorData, radius) -> PosetSheaf:
    """Mirror of an invariant divisor via its chart cover resolution.

    Terms over nonempty subsets of maximal cones; each chart contributes
    the open dual-cone region translated by its trivializing character.
    """
    n = sf.n_rank
    maxc = sorted(sf.fan_hat.maximal_cones(), key=lambda c: c.key())
    if not maxc:
        raise ValueError("fan has no maximal cones")
    subsets = []
    for r in range(1, len(maxc) + 1):
        subsets.extend(combinations(range(len(maxc)), r))
    polys = {}
    for sub in subsets:
        inter_hat = maxc[sub[0]]
        for i in sub[1:]:
            inter_hat = inter_hat.intersection(maxc[i])
        tau = sf.base_cone(inter_hat)
        vertex = divisor.chart_vertex(maxc[sub[0]])
        dual = tau.dual()
        polys[sub] = LCPolyhedron.from_cone(
            dual, interior=True, shift=[Fraction(v) for v in vertex]
        )
    strat = refine_arrangement(list(polys.values()), radius, n=n)
    terms = []
    index = {}
    for sub in subsets:
        index[sub] = len(terms)
        terms.append((len(sub) - 1, indicator_sheaf(strat, polys[sub], shift=n)))
    components = {}
    for sub in subsets:
        for j in range(len(maxc)):
            if j in sub:
                continue
            bigger = tuple(sorted(sub + (j,)))
            sign = (-1) ** bigger.index(j)
            components[(index[sub], index[bigger])] = sign
    return flatten_terms(strat, terms, components)


# -- checks ----------------------------------------------------------------------


def generator_pairs(sf: StackyFan):
    """All (source, target) generator pairs with the face relation."""
    gens = []
    for sigma in sf.fan.cones:
        data = sf.m_sigma(sigma)
        for coset in data.group.elements():
            gens.append(GenObject(sf, sigma, coset))
    pairs = []
    for a in gens:
        for b in gens:
            if b.sigma.is_face_of(a.sigma):
                pairs.append((a, b))
    return gens, pairs


def verify_hom_match(sf: StackyFan, window: int = 3) -> CheckResult:
    """Lattice-point hom bases against per-translation sheaf homs."""
    out_radius = window + 2
    big_radius = out_radius + window
    gens, pairs = generator_pairs(sf)
    failures = []
    tables = {}
    for a, b in pairs:
        delta = tuple(Fraction(x) - Fraction(y) for x, y in zip(b.chi, a.chi))
        coherent = set(hom_basis(a, b, window + 1).basis)
        f = kappa_generator(a, big_radius)
        g = kappa_generator(b, out_radius)
        table = torus_hom(f, g, box_radius=window, out_radius=out_radius)
        key = _pair_key(a, b)
        tables[key] = {
            ",".join(str(x) for x in m): {str(k): v for k, v in dims.items()}
            for m, dims in sorted(table.items())
        }
        for m, dims in table.items():
            if set(dims) != {0} or dims.get(0) != 1:
                failures.append(
                    {"pair": key, "m": list(m), "reason": "not one-dimensional degree 0"}
                )
        for m in _box(sf.n_rank, window):
            q = tuple(Fraction(x) - d for x, d in zip(m, delta))
            expected = 1 if q in coherent else 0
            got = table.get(tuple(m), {}).get(0, 0)
            if expected != got:
                failures.append(
                    {
                        "pair": key,
                        "m": list(m),
                        "coherent": expected,
                        "constructible": got,
                    }
                )
    status = "pass" if not failures else "fail"
    return CheckResult(
        "hom-match",
        status,
        params={"window": window},
        tables=tables,
        failures=failures,
    )


def _pair_key(a: GenObject, b: GenObject) -> str:
    return "%s|%s->%s|%s" % (
        list(a.sigma.rays),
        list(a.coset),
        list(b.sigma.rays),
        list(b.coset),
    )


def _box(n, radius):
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(-radius, radius + 1):
            yield from rec(prefix + [v])

    yield from rec([])


def verify_unit(sf: StackyFan, radius=4) -> CheckResult:
    """The mirror of the unit resolution is the origin skyscraper, stalkwise."""
    if not sf.fan.is_complete():
        return CheckResult(
            "unit",
            "error",
            params={"radius": radius},
            failures=[{"reason": "fan is not complete; unit check requires completeness"}],
        )
    sheaf = kappa_structure_sheaf(sf, radius)
    strat = sheaf.strat
    origin = strat.cell_of_point(tuple(0 for _ in range(sf.n_rank)))
    failures = []
    for i in range(len(strat.cells)):
        coh = sheaf.stalk(i).cohomology() if i in sheaf.stalks else {}
        expected = {0: 1} if i == origin else {}
        if coh != expected:
            failures.append(
                {
                    "cell_witness": list(strat.cells[i].witness),
                    "got": coh,
                    "expected": expected,
                }
            )
    return CheckResult(
        "unit",
        "pass" if not failures else "fail",
        params={"radius": radius},
        failures=failures,
    )


def verify_vanishing(sf: StackyFan, radius: int = 3) -> CheckResult:
    """Conic convolution vanishing plus a nonvanishing negative control."""
    n = sf.n_rank
    failures = []
    ran = 0
    for sigma in sf.fan.cones:
        if sigma.dim() != n:
            continue
        dual = sigma.dual()
        gamma = LCPolyhedron.from_cone(dual)
        # strictly convex gamma requires a pointed dual cone
        if not dual.is_strictly_convex():
            continue
        big = radius * 3
        from .sheaves import constant_sheaf

        e_const = constant_sheaf(refine_arrangement([], big, n=n))
        g_sheaf = indicator_sheaf(refine_arrangement([gamma], big, n=n), gamma)
        conv = convolve(e_const, g_sheaf, out_radius=radius, properness="conic")
        ran += 1
        if not conv.is_zero():
            failures.append({"case": "constant*closed-cone", "sigma": str(list(sigma.rays))})
        # half-space factor against a skeleton-constrained sheaf
        v = sigma.relative_interior_point()
        half = LCPolyhedron.from_strings(n, [(tuple(v), ">=", 0)])
        theta = theta_polyhedron(sf, sigma, sf.m_sigma(sigma).rep_of(
            sf.m_sigma(sigma).group.zero()
        ))
        e_theta = indicator_sheaf(refine_arrangement([theta], big, n=n), theta, shift=n)
        g_half = indicator_sheaf(refine_arrangement([half], big, n=n), half)
        conv2 = convolve(e_theta, g_half, out_radius=radius, properness="conic")
        ran += 1
        if not conv2.is_zero():
            failures.append({"case": "theta*halfspace", "sigma": str(list(sigma.rays))})
        # negative control: unit convolution is nonzero
        zero_pt = LCPolyhedron.from_strings(
            n, [(tuple(1 if i == j else 0 for i in range(n)), "=", 0) for j in range(n)]
        )
        e2 = indicator_sheaf(refine_arrangement([theta], big, n=n), theta, shift=n)
        unit = indicator_sheaf(refine_arrangement([zero_pt], big, n=n), zero_pt)
        conv3 = convolve(e2, unit, out_radius=radius, properness="compact")
        ran += 1
        if conv3.is_zero():
            failures.append({"case": "negative-control", "sigma": str(list(sigma.rays))})
    if ran == 0:
        failures.append({"reason": "no full-dimensional cones to test"})
    return CheckResult(
        "vanishing",
        "pass" if not failures else "fail",
        params={"radius": radius, "cases": ran},
        failures=failures,
    )


def verify_polytope_duality(n: int, count: int = 10, radius: int = 3, seed: int = 7) -> CheckResult:
    """Adjoint hom of a random box against the open cone equals the dual box."""
    import random

    rng = random.Random(seed)
    failures = []
    for trial in range(count):
        dim = 1 if (trial % 2 == 0 or n == 1) else 2
        lo = [Fraction(rng.randint(-4, 2), rng.choice([1, 2])) for _ in range(dim)]
        length = [Fraction(rng.randint(1, 3), rng.choice([1, 2])) for _ in range(dim)]
        hi = [a + b for a, b in zip(lo, length)]
        conds = []
        for i in range(dim):
            e = [0] * dim
            e[i] = 1
            conds.append((tuple(e), ">", lo[i]))
            conds.append((tuple(e), "<=", hi[i]))
        d_poly = LCPolyhedron.from_strings(dim, conds)
        cone_int = LCPolyhedron.from_strings(
            dim, [(tuple(1 if i == j else 0 for i in range(dim)), ">", 0) for j in range(dim)]
        )
        neg_dual = d_poly.dual_flip().negate_space()
        big = radius * 2 + 8
        f = indicator_sheaf(refine_arrangement([d_poly], big, n=dim), d_poly)
        g = indicator_sheaf(refine_arrangement([cone_int], big, n=dim), cone_int)
        try:
            out = hom_star(f, g, out_radius=radius)
        except PropernessError as exc:
            failures.append({"trial": trial, "reason": str(exc)})
            continue
        ts = out.strat
        if not ts.is_adapted(neg_dual):
            failures.append({"trial": trial, "reason": "dual body not adapted"})
            continue
        expected = indicator_sheaf(ts, neg_dual)
        if not sheaves_summary_equal(out, expected):
            failures.append(
                {"trial": trial, "d": str(d_poly), "reason": "stalk mismatch"}
            )
    return CheckResult(
        "polytope-duality",
        "pass" if not failures else "fail",
        params={"count": count, "radius": radius, "seed": seed},
        failures=failures,
    )


def _stalk_table_at_points(f: PosetSheaf, points) -> dict:
    out = {}
    for p in points:
        cell = f.strat.cell_of_point(p)
        coh = f.stalk(cell).cohomology() if cell in f.stalks else {}
        out[tuple(p)] = coh
    return out


def convolution_stalks_at(
    a: PosetSheaf, b: PosetSheaf, points, fiber_radius
) -> dict:
    """Pointwise convolution stalk cohomology (no target arrangement)."""
    out = {}
    for p in points:
        data = _fiber_data(a, b, tuple(Fraction(x) for x in p), fiber_radius)
        if data is None:
            out[tuple(p)] = {}
        else:
            out[tuple(p)] = data.assembled.complex.cohomology()
    return out


def verify_monoidal(
    sf: StackyFan, divisor_pairs, radius: int = 3
) -> CheckResult:
    """Mirror of a tensor product against the convolution of mirrors, stalkwise."""
    if not sf.fan_hat.is_smooth():
        return CheckResult(
            "monoidal",
            "error",
            failures=[{"reason": "upstairs fan must be smooth for the monoidal check"}],
        )
    failures = []
    big = 2 * radius + 3
    for d1, d2 in divisor_pairs:
        k1 = kappa_line_bundle(sf, d1, big)
        k2 = kappa_line_bundle(sf, d2, big)
        k12 = kappa_line_bundle(sf, d1.add(d2), radius)
        # sample at every cell of the expected answer plus a lattice grid
        points = [c.witness for c in k12.strat.cells]
        got = convolution_stalks_at(k1, k2, points, fiber_radius=big - radius)
        expected = _stalk_table_at_points(k12, points)
        for p in sorted(expected):
            if got.get(p, {}) != expected[p]:
                failures.append(
                    {
                        "divisors": [list(d1.coefficients), list(d2.coefficients)],
                        "point": [str(Fraction(x)) for x in p],
                        "got": got.get(p, {}),
                        "expected": expected[p],
                    }
                )
    return CheckResult(
        "monoidal",
        "pass" if not failures else "fail",
        params={"radius": radius, "pairs": len(list(divisor_pairs))},
        failures=failures,
    )


def verify_refinement(sf: StackyFan, sigma: Cone, radius: int = 3) -> CheckResult:
    """Convolving with the subdivided unit mirror changes nothing, stalkwise."""
    try:
        sf2 = sf.star_subdivide(sigma)
    except ValueError as exc:
        return CheckResult(
            "refinement", "error", failures=[{"reason": str(exc)}]
        )
    big = 2 * radius + 3
    k_orig = kappa_structure_sheaf(sf, big)
    k_sub = kappa_structure_sheaf(sf2, big)
    failures = []
    gens, _ = generator_pairs(sf)
    samples = [g for g in gens if g.sigma.dim() > 0][:4]
    for g in samples:
        e = kappa_generator(g, big)
        grid = [tuple(Fraction(v, 2) for v in p) for p in _box(sf.n_rank, 2 * radius)]
        pts = [p for p in grid if all(abs(x) < radius for x in p)]
        got1 = convolution_stalks_at(e, k_orig, pts, fiber_radius=big - radius)
        got2 = convolution_stalks_at(e, k_sub, pts, fiber_radius=big - radius)
        for p in pts:
            if got1[tuple(p)] != got2[tuple(p)]:
                failures.append(
                    {
                        "generator": _pair_key(g, g),
                        "point": [str(x) for x in p],
                        "original": got1[tuple(p)],
                        "subdivided": got2[tuple(p)],
                    }
                )
    return CheckResult(
        "refinement",
        "pass" if not failures else "fail",
        params={"radius": radius, "samples": len(samples)},
        failures=failures,
    )


def verify_skeleton_ss(sf: StackyFan, radius: int = 3) -> CheckResult:
    """Microsupport of every generator mirror lies inside the conic skeleton."""
    skeleton = build_skeleton(sf)
    gens, _ = generator_pairs(sf)
    failures = []
    for g in gens:
        sheaf = kappa_generator(g, radius)
        ss = microsupport(sheaf)
        strat = sheaf.strat
        for entry in ss.cells:
            cell = strat.cells[entry.cell]
            if not _entry_in_skeleton(sf, skeleton, cell, entry.sector, radius):
                failures.append(
                    {
                        "generator": _pair_key(g, g),
                        "witness": [str(x) for x in cell.witness],
                        "sector_rays": [list(r) for r in entry.sector.rays],
                    }
                )
    return CheckResult(
        "skeleton-ss",
        "pass" if not failures else "fail",
        params={"radius": radius, "generators": len(gens)},
        failures=failures,
    )


def _entry_in_skeleton(sf, skeleton, cell, sector, radius) -> bool:
    n = sf.n_rank
    for sk in skeleton.cells:
        neg_cone = Cone.from_rays(n, [list(r) for r in sk.neg_cone_rays]) if sk.neg_cone_rays else Cone.zero(n)
        if not neg_cone.contains_cone(sector):
            continue
        # witness must lie on chi + m + span(perp) for some lattice translate m
        for m in _box(n, radius + 2):
            base = [Fraction(c) + mm for c, mm in zip(sk.chi, m)]
            diff = [Fraction(w) - b for w, b in zip(cell.witness, base)]
            if _in_span(diff, sk.perp_basis) and all(
                _in_span([Fraction(x) for x in d], sk.perp_basis)
                for d in cell.dirbasis
            ):
                return True
    return False


def _in_span(vec, basis):
    if all(x == 0 for x in vec):
        return True
    if not basis:
        return False
    cols = [[Fraction(basis[j][i]) for j in range(len(basis))] for i in range(len(vec))]
    return solve_rational(cols, list(vec)) is not None


def verify_ss_estimate(sf: StackyFan, radius: int = 3) -> CheckResult:
    """Microsupport sectors of generator convolutions refine both factors' cones."""
    gens, _ = generator_pairs(sf)
    failures = []
    cases = 0
    full = [g for g in gens if g.sigma.dim() == sf.n_rank]
    for g1 in full[:2]:
        for g2 in full[:2]:
            big = 2 * radius + 3
            e1 = kappa_generator(g1, big)
            e2 = kappa_generator(g2, big)
            conv = convolve(e1, e2, out_radius=radius, properness="conic")
            ss = microsupport(conv)
            gamma = g1.sigma.negate().intersection(g2.sigma.negate())
            cases += 1
            for entry in ss.cells:
                if not gamma.contains_cone(entry.sector):
                    failures.append(
                        {
                            "pair": [_pair_key(g1, g1), _pair_key(g2, g2)],
                            "sector": [list(r) for r in entry.sector.rays],
                        }
                    )
    return CheckResult(
        "ss-estimate",
        "pass" if not failures else "fail",
        params={"radius": radius, "cases": cases},
        failures=failures,
    )


def verify_stacky_arithmetic(sf: StackyFan) -> CheckResult:
    """Chart stabilizer order equals the coset group order for every cone."""
    failures = []
    for sigma in sf.fan.cones:
        h = sf.h_beta(sigma)
        m = sf.m_sigma(sigma)
        if h.order != m.group.order:
            failures.append(
                {
                    "sigma": str(list(sigma.rays)),
                    "h_order": h.order,
                    "coset_order": m.group.order,
                }
            )
    return CheckResult(
        "stacky-arithmetic",
        "pass" if not failures else "fail",
        failures=failures,
    )


def _h0_polytope_oracle(sf: StackyFan, divisor: DivisorData) -> int:
    """Independent section count: lattice points of the divisor polytope."""
    from .semigroups import lattice_points

    maxc = sf.fan_hat.maximal_cones()
    poly = LCPolyhedron.whole_space(sf.n_rank)
    for c in maxc:
        poly = poly.intersection(divisor.section_polyhedron(c))
    if poly.is_empty():
        return 0
    return len(lattice_points(poly))


def verify_line_bundle_cross(sf: StackyFan, d_range=range(-4, 5), window: int = 6) -> CheckResult:
    """Chart cohomology of twists against costalk sums of their mirrors."""
    failures = []
    tables = {}
    rays = sf.fan_hat.cones_of_dim(1)
    for d in d_range:
        coeffs = tuple(d if i == 0 else 0 for i in range(len(rays)))
        divisor = DivisorData(sf, coeffs)
        coh = line_bundle_cohomology(sf, divisor, window=window)
        totals: Dict[int, int] = {}
        for v in coh.values():
            for k, dim in v.items():
                totals[k] = totals.get(k, 0) + dim
        radius = window + 2
        mirror = kappa_line_bundle(sf, divisor, radius)
        dual = verdier_dual(mirror)
        mirror_totals: Dict[int, int] = {}
        n = sf.n_rank
        for m in _box(n, window):
            # hom out of a point sheaf is the costalk; its dims are those of
            # the Verdier-dual stalk in opposite degrees
            pt = tuple(Fraction(x) for x in m)
            cell = dual.strat.cell_of_point(pt)
            coh_dual = dual.stalk(cell).cohomology() if cell in dual.stalks else {}
            for k, dim in coh_dual.items():
                mirror_totals[-k] = mirror_totals.get(-k, 0) + dim
        if mirror_totals != totals:
            failures.append(
                {"d": d, "chart": totals, "mirror": mirror_totals}
            )
        expected_h0 = _h0_polytope_oracle(sf, divisor)
        if totals.get(0, 0) != expected_h0:
            failures.append(
                {"d": d, "h0": totals.get(0, 0), "expected": expected_h0}
            )
        tables[str(d)] = {str(k): v for k, v in sorted(totals.items())}
    return CheckResult(
        "line-bundle-cross",
        "pass" if not failures else "fail",
        params={"window": window, "d_range": [min(d_range), max(d_range)]},
        tables=tables,
        failures=failures,
    )


# -- Cech poset -------------------------------------------------------------------


@dataclass
class CechPoset:
    """Nonempty subsets of the maximal cones with their intersection cones."""

    sf: StackyFan
    elements: list  # (subset indices, intersection Cone)

    def to_dict(self) -> dict:
        return {
            "size": len(self.elements),
            "elements": [
                {
                    "subset": list(sub),
                    "intersection_rays": [list(r) for r in cone.rays],
                }
                for sub, cone in self.elements
            ],
        }


def verify_stability(sf: StackyFan, window: int = 2) -> CheckResult:
    """Window doubling and stratification refinement change no dimension."""
    failures = []
    gens, pairs = generator_pairs(sf)
    sample = pairs[: min(len(pairs), 6)]
    for a, b in sample:
        base_out = window + 2
        table1 = _hom_table(a, b, window, base_out)
        table2 = _hom_table(a, b, window, 2 * base_out)
        if table1 != table2:
            failures.append(
                {"pair": _pair_key(a, b), "reason": "window doubling changed dims"}
            )
    # refinement invariance on a sample rhom
    extra = [
        Hyperplane.make(
            tuple(1 if i == j else 0 for i in range(sf.n_rank)), Fraction(1, 2)
        )
        for j in range(sf.n_rank)
    ]
    for a, b in sample[:3]:
        poly_a = theta_polyhedron(sf, a.sigma, a.chi)
        poly_b = theta_polyhedron(sf, b.sigma, b.chi)
        radius = window + 2
        coarse = refine_arrangement([poly_a, poly_b], radius, n=sf.n_rank)
        fine = refine_arrangement(
            [poly_a, poly_b], radius, n=sf.n_rank, extra_hyperplanes=extra
        )
        fa, fb = (
            indicator_sheaf(coarse, poly_a, shift=sf.n_rank),
            indicator_sheaf(coarse, poly_b, shift=sf.n_rank),
        )
        ga, gb = transport(fa, fine), transport(fb, fine)
        if rhom(fa, fb) != rhom(ga, gb):
            failures.append(
                {"pair": _pair_key(a, b), "reason": "refinement changed rhom dims"}
            )
    # unit stalks at doubled radius for complete fans
    if sf.fan.is_complete():
        r1 = verify_unit(sf, radius=3)
        r2 = verify_unit(sf, radius=6)
        if r1.status != r2.status:
            failures.append({"reason": "unit check not stable under window doubling"})
    return CheckResult(
        "stability",
        "pass" if not failures else "fail",
        params={"window": window, "pairs": len(sample)},
        failures=failures,
    )


def _hom_table(a: GenObject, b: GenObject, window: int, out_radius: int):
    f = kappa_generator(a, out_radius + window)
    g = kappa_generator(b, out_radius)
    return torus_hom(f, g, box_radius=window, out_radius=out_radius)


SUITE_CHECK_NAMES = (
    "stacky-arithmetic",
    "hom-match",
    "unit",
    "polytope-duality",
    "vanishing",
    "monoidal",
    "refinement",
    "skeleton-ss",
    "ss-estimate",
    "line-bundle-cross",
    "stability",
)


def run_suite(
    sf: StackyFan,
    names: Optional[Sequence[str]] = None,
    window: int = 3,
    jobs: int = 1,
    suite_name: str = "",
) -> VerificationReport:
    """Run the selected checks; unknown names raise, empty selection passes."""
    selected = list(SUITE_CHECK_NAMES) if names is None else list(names)
    for n in selected:
        if n not in SUITE_CHECK_NAMES:
            raise ValueError("unknown check %r" % n)
    tasks = {}
    rays = sf.fan_hat.cones_of_dim(1)

    def divisor(coeffs):
        return DivisorData(sf, tuple(coeffs))

    if "stacky-arithmetic" in selected:
        tasks["stacky-arithmetic"] = lambda: verify_stacky_arithmetic(sf)
    if "hom-match" in selected:
        tasks["hom-match"] = lambda: verify_hom_match(sf, window=window)
    if "unit" in selected:
        tasks["unit"] = lambda: (
            verify_unit(sf, radius=4)
            if sf.fan.is_complete()
            else CheckResult("unit", "pass", params={"skipped": "fan not complete"})
        )
    if "polytope-duality" in selected:
        tasks["polytope-duality"] = lambda: verify_polytope_duality(
            min(sf.n_rank, 2) or 1, count=10, radius=3
        )
    if "vanishing" in selected:
        tasks["vanishing"] = lambda: verify_vanishing(sf, radius=3)
    if "monoidal" in selected:
        if rays:
            e0 = tuple(1 if i == 0 else 0 for i in range(len(rays)))
            m0 = tuple(-1 if i == 0 else 0 for i in range(len(rays)))
            zero = (0,) * len(rays)
            pairs = [(divisor(e0), divisor(m0)), (divisor(zero), divisor(e0))]
            tasks["monoidal"] = lambda: verify_monoidal(sf, pairs, radius=2)
        else:
            tasks["monoidal"] = lambda: CheckResult(
                "monoidal", "pass", params={"skipped": "no rays"}
            )
    if "refinement" in selected:
        big_cones = [c for c in sf.fan.maximal_cones() if c.dim() >= 2]
        if big_cones:
            sigma = big_cones[0]
            tasks["refinement"] = lambda: verify_refinement(sf, sigma, radius=2)
        else:
            tasks["refinement"] = lambda: CheckResult(
                "refinement", "pass", params={"skipped": "no subdividable cone"}
            )
    if "skeleton-ss" in selected:
        tasks["skeleton-ss"] = lambda: verify_skeleton_ss(sf, radius=3)
    if "ss-estimate" in selected:
        tasks["ss-estimate"] = lambda: verify_ss_estimate(sf, radius=2)
    if "line-bundle-cross" in selected:
        if sf.fan.is_complete():
            tasks["line-bundle-cross"] = lambda: verify_line_bundle_cross(
                sf, d_range=range(-2, 3), window=4
            )
        else:
            tasks["line-bundle-cross"] = lambda: CheckResult(
                "line-bundle-cross", "pass", params={"skipped": "fan not complete"}
            )
    if "stability" in selected:
        tasks["stability"] = lambda: verify_stability(sf, window=2)
    report = VerificationReport(suite=suite_name)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {k: pool.submit(t) for k, t in tasks.items()}
            for k in futures:
                report.add(futures[k].result())
    else:
        for k in sorted(tasks):
            report.add(tasks[k]())
    return report


def build_cech_poset(sf: StackyFan) -> CechPoset:
    maxc = sorted(sf.fan.maximal_cones(), key=lambda c: c.key())
    elements = []
    for r in range(1, len(maxc) + 1):
        for sub in combinations(range(len(maxc)), r):
            inter = maxc[sub[0]]
            for i in sub[1:]:
                inter = inter.intersection(maxc[i])
            if inter not in sf.fan:
                raise ValueError("intersection of maximal cones escaped the fan")
            elements.append((sub, inter))
    return CechPoset(sf, elements)
