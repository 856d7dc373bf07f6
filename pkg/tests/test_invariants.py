"""Cross-cutting invariants tying the sheaf calculus to the lattice side."""

from fractions import Fraction

from torcc.cones import Cone
from torcc.fans import Fan, StackyFan, build_skeleton
from torcc.fixtures import load_stacky_fan
from torcc.polyhedron import LCPolyhedron
from torcc.sheaves import indicator_sheaf, transport
from torcc.sheafops import convolve, microsupport, rhom
from torcc.strata import refine_arrangement
from torcc.verify import (
    _entry_in_skeleton,
    convolution_stalks_at,
    kappa_generator,
    kappa_structure_sheaf,
    generator_pairs,
)


def poly(n, triples):
    return LCPolyhedron.from_strings(n, triples)


def test_cutoff_sectors():
    # SS(E * Q_{Int gamma}) sectors lie in -gamma-dual (1-d cut-off)
    e_poly = poly(1, [((1,), ">=", -1), ((1,), "<=", 0)])
    gamma_int = poly(1, [((1,), ">", 0)])
    s = refine_arrangement([e_poly], 9)
    e = indicator_sheaf(s, e_poly)
    g = indicator_sheaf(refine_arrangement([gamma_int], 9), gamma_int)
    conv = convolve(e, g, out_radius=3)
    ss = microsupport(conv)
    neg = Cone.from_rays(1, [(-1,)])
    for entry in ss.cells:
        assert neg.contains_cone(entry.sector), entry.sector


def a1_variety_chart():
    """Quadric-cone chart with the identity map: half-open regions whose
    strictness-flipped bodies can miss the lattice entirely."""
    fan_hat = Fan.from_cones(2, [Cone.from_rays(2, [(1, 0), (1, 2)])])
    return StackyFan([[1, 0], [0, 1]], fan_hat)


def test_da_vanishing_qualifying_region():
    sf = a1_variety_chart()
    assert sf.validate_condition().valid
    # edge primitives of sigma: v1 = (1,0), v2 = (1,2); the region below has
    # its strictness-flip [0,1) x [1,2) (in pairing coordinates) free of
    # lattice points: <m,v1> = 0 forces 2 m2 = 1 on the other wall.
    dd = poly(
        2,
        [((1, 0), ">=", 0), ((1, 0), "<", 1), ((1, 2), ">=", 1), ((1, 2), "<", 2)],
    )
    from torcc.semigroups import lattice_points

    assert lattice_points(dd, box=((-3, -3), (3, 3))) == []
    neg_dd = dd.negate_space()
    radius = 6
    for sigma in sf.fan.cones:
        data = sf.m_sigma(sigma)
        chi = data.rep_of(data.group.zero())
        gen_poly = LCPolyhedron.from_cone(sigma.dual(), interior=True, shift=chi)
        common = refine_arrangement([gen_poly, neg_dd], radius, n=2)
        f = indicator_sheaf(common, neg_dd)
        e = indicator_sheaf(common, gen_poly, shift=2)
        assert rhom(f, e) == {}, sigma


def test_da_nonqualifying_region_detects():
    # the same shape shifted so the flip contains a lattice point: hom is nonzero
    sf = a1_variety_chart()
    dd = poly(
        2,
        [((1, 0), ">=", 0), ((1, 0), "<", 1), ((1, 2), ">=", 0), ((1, 2), "<", 1)],
    )
    from torcc.semigroups import lattice_points

    assert lattice_points(dd, box=((-3, -3), (3, 3))) == [(Fraction(0), Fraction(0))]
    neg_dd = dd.negate_space()
    sigma = [c for c in sf.fan.cones if c.dim() == 2][0]
    gen_poly = LCPolyhedron.from_cone(sigma.dual(), interior=True)
    common = refine_arrangement([gen_poly, neg_dd], 6, n=2)
    f = indicator_sheaf(common, neg_dd)
    e = indicator_sheaf(common, gen_poly, shift=2)
    assert rhom(f, e) != {}


def test_unit_law_on_generators_p1():
    # convolving a generator mirror with the unit resolution mirror is the identity
    sf = load_stacky_fan("p1")
    gens, _ = generator_pairs(sf)
    radius = 3
    big = 2 * radius + 3
    k_unit = kappa_structure_sheaf(sf, big)
    for g in gens:
        e = kappa_generator(g, big)
        pts = [tuple([Fraction(v, 2)]) for v in range(-2 * radius + 1, 2 * radius)]
        got = convolution_stalks_at(e, k_unit, pts, fiber_radius=big - radius)
        for p in pts:
            cell = e.strat.cell_of_point(p)
            expected = e.stalk(cell).cohomology() if cell in e.stalks else {}
            assert got[tuple(p)] == expected, (g, p)


def test_unit_law_on_generators_p2_sample():
    sf = load_stacky_fan("p2")
    gens, _ = generator_pairs(sf)
    full = [g for g in gens if g.sigma.dim() == 2][:1]
    radius = 2
    big = 2 * radius + 3
    k_unit = kappa_structure_sheaf(sf, big)
    for g in full:
        e = kappa_generator(g, big)
        pts = [
            (Fraction(x, 2), Fraction(y, 2))
            for x in range(-3, 4)
            for y in range(-3, 4)
        ]
        got = convolution_stalks_at(e, k_unit, pts, fiber_radius=big - radius)
        for p in pts:
            cell = e.strat.cell_of_point(p)
            expected = e.stalk(cell).cohomology() if cell in e.stalks else {}
            assert got[tuple(p)] == expected, (g, p)


def test_skeleton_negative_control():
    # a closed interval escapes the affine-line skeleton at its interior endpoint
    sf = load_stacky_fan("a1")
    skeleton = build_skeleton(sf)
    box = poly(1, [((1,), ">=", 0), ((1,), "<=", 1)])
    s = refine_arrangement([box], 3)
    sheaf = indicator_sheaf(s, box)
    ss = microsupport(sheaf)
    escapes = []
    for entry in ss.cells:
        cell = s.cells[entry.cell]
        if not _entry_in_skeleton(sf, skeleton, cell, entry.sector, 3):
            escapes.append((cell.witness, entry.sector.rays))
    assert escapes, "closed interval should escape the skeleton"
    # the escape is the positive covector at the origin
    assert ((Fraction(0),), ((1,),)) in [
        (w, r) for w, r in escapes
    ]


def test_skeleton_positive_control_contains_generators():
    sf = load_stacky_fan("a1")
    skeleton = build_skeleton(sf)
    gens, _ = generator_pairs(sf)
    for g in gens:
        sheaf = kappa_generator(g, 3)
        ss = microsupport(sheaf)
        for entry in ss.cells:
            cell = sheaf.strat.cells[entry.cell]
            assert _entry_in_skeleton(sf, skeleton, cell, entry.sector, 3)


def test_unit_law_over_suite_generators():
    # convolve(unit skyscraper, kappa-generator) reproduces stalks and gen ranks
    from torcc.sheaves import sheaves_summary_equal

    for name in ("c2z2", "p1x2"):
        sf = load_stacky_fan(name)
        gens, _ = generator_pairs(sf)
        n = sf.n_rank
        zero_pt = poly(
            n, [(tuple(1 if i == j else 0 for i in range(n)), "=", 0) for j in range(n)]
        )
        for g in gens:
            if g.sigma.dim() == 0:
                continue
            e = kappa_generator(g, 7)
            unit = indicator_sheaf(refine_arrangement([zero_pt], 7, n=n), zero_pt)
            conv = convolve(e, unit, out_radius=3, properness="compact")
            conv.validate()
            expected_poly = LCPolyhedron.from_cone(
                g.sigma.dual(), interior=True, shift=g.chi
            )
            assert conv.strat.is_adapted(expected_poly)
            expected = indicator_sheaf(conv.strat, expected_poly, shift=n)
            assert sheaves_summary_equal(conv, expected), (name, g)


def test_skeleton_counts_p112():
    sf = load_stacky_fan("p112")
    sk = build_skeleton(sf)
    # zero cone + three rays + three maximal cones, one of which carries
    # a two-element coset group
    assert len(sk.cells) == 1 + 3 + 4
    doubled = [c for c in sk.cells if c.coset and c.coset != (0,)]
    assert len(doubled) == 1
    assert any(x.denominator == 2 for x in doubled[0].chi)
