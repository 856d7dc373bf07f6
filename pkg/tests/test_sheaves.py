from fractions import Fraction

import pytest

from torcc.chains import ChainMap, Complex
from torcc.polyhedron import LCPolyhedron
from torcc.sheaves import (
    constant_sheaf,
    flatten_terms,
    indicator_sheaf,
    sheaves_summary_equal,
    transport,
    verdier_dual,
    verdier_dual_indicator,
    zero_sheaf,
)
from torcc.strata import refine_arrangement


def open_ray(n=1):
    return LCPolyhedron.from_strings(n, [((1,) + (0,) * (n - 1), ">", 0)])


def closed_ray(n=1):
    return LCPolyhedron.from_strings(n, [((1,) + (0,) * (n - 1), ">=", 0)])


def test_indicator_sheaf_stalks():
    p = open_ray()
    s = refine_arrangement([p], 3)
    f = indicator_sheaf(s, p)
    f.validate()
    zero_cell = s.cell_of_point((0,))
    plus = s.cell_of_point((1,))
    minus = s.cell_of_point((-1,))
    assert f.stalk(zero_cell).dims == {}
    assert f.stalk(plus).dims == {0: 1}
    assert f.stalk(minus).dims == {}
    g = indicator_sheaf(s, closed_ray())
    g.validate()
    assert g.stalk(zero_cell).dims == {0: 1}
    assert g.gen(zero_cell, plus).comps[0] == [[1]]


def test_constant_sheaf_and_shift():
    s = refine_arrangement([open_ray()], 3)
    c = constant_sheaf(s, shift=1)
    c.validate()
    for cell in s.cells:
        assert c.stalk(cell.index).cohomology() == {-1: 1}
    assert not c.is_zero()
    assert zero_sheaf(s).is_zero()


def test_indicator_requires_adapted():
    s = refine_arrangement([open_ray()], 3)
    with pytest.raises(ValueError):
        indicator_sheaf(s, LCPolyhedron.from_strings(1, [((1,), ">", Fraction(1, 2))]))


def test_gen_any_composition():
    box = LCPolyhedron.from_strings(
        2, [((1, 0), ">=", 0), ((0, 1), ">=", 0)]
    )
    s = refine_arrangement([box], 3)
    f = indicator_sheaf(s, box)
    f.validate()
    origin = s.cell_of_point((0, 0))
    interior = s.cell_of_point((1, 1))
    m = f.gen_any(origin, interior)
    assert m.comps[0] == [[1]]


def test_transport_refinement():
    p = open_ray()
    coarse = refine_arrangement([p], 3)
    from torcc.strata import Hyperplane

    fine = refine_arrangement([p], 3, extra_hyperplanes=[Hyperplane.make((1,), 1)])
    f = indicator_sheaf(coarse, p)
    g = transport(f, fine)
    g.validate()
    assert g.stalk(fine.cell_of_point((2,))).dims == {0: 1}
    assert g.stalk(fine.cell_of_point((1,))).dims == {0: 1}
    h = indicator_sheaf(fine, p)
    assert sheaves_summary_equal(g, h)


def test_verdier_dual_open_ray():
    p = open_ray()
    s = refine_arrangement([p], 3)
    f = indicator_sheaf(s, p)
    d = verdier_dual(f)
    d.validate()
    # D(Q_(0,inf)) = Q_[0,inf)[1]
    expected = indicator_sheaf(s, closed_ray()).shift(1)
    assert sheaves_summary_equal(d, expected)
    # and the fast path agrees
    fast = verdier_dual_indicator(s, p, shift=0)
    assert sheaves_summary_equal(d, fast)


def test_verdier_dual_involution_summaries():
    cases = [
        open_ray(),
        closed_ray(),
        LCPolyhedron.from_strings(1, [((1,), ">", 0), ((1,), "<=", 1)]),
        LCPolyhedron.from_strings(1, [((1,), "=", 0)]),
    ]
    s = refine_arrangement(cases, 3)
    for p in cases:
        f = indicator_sheaf(s, p)
        dd = verdier_dual(verdier_dual(f))
        assert sheaves_summary_equal(dd, f), p


def test_verdier_dual_2d():
    quad_int = LCPolyhedron.from_strings(2, [((1, 0), ">", 0), ((0, 1), ">", 0)])
    quad = quad_int.closure()
    s = refine_arrangement([quad_int], 3)
    f = indicator_sheaf(s, quad_int)
    d = verdier_dual(f)
    d.validate()
    expected = indicator_sheaf(s, quad).shift(2)
    assert sheaves_summary_equal(d, expected)
    fast = verdier_dual_indicator(s, quad_int)
    assert sheaves_summary_equal(d, fast)
    # skyscraper at the origin dualizes to itself
    origin = LCPolyhedron.from_strings(2, [((1, 0), "=", 0), ((0, 1), "=", 0)])
    g = indicator_sheaf(s, origin)
    dg = verdier_dual(g)
    assert sheaves_summary_equal(dg, g)


def test_verdier_dual_halfopen_interval():
    p = LCPolyhedron.from_strings(1, [((1,), ">", 0), ((1,), "<=", 1)])
    s = refine_arrangement([p], 3)
    f = indicator_sheaf(s, p)
    d = verdier_dual(f)
    flipped = LCPolyhedron.from_strings(1, [((1,), ">=", 0), ((1,), "<", 1)])
    expected = indicator_sheaf(s, flipped).shift(1)
    assert sheaves_summary_equal(d, expected)


def test_flatten_two_term_complex():
    # restriction Q_{whole} -> Q_{x>=0}; the total complex is Q on x<0 in degree 0
    p = closed_ray()
    s = refine_arrangement([p], 3)
    f = indicator_sheaf(s, p)
    g = constant_sheaf(s)
    flat = flatten_terms(s, [(0, g), (1, f)], {(0, 1): 1})
    flat.validate()
    minus = s.cell_of_point((-1,))
    zero = s.cell_of_point((0,))
    plus = s.cell_of_point((1,))
    assert flat.stalk(minus).cohomology() == {0: 1}
    assert flat.stalk(zero).cohomology() == {}
    assert flat.stalk(plus).cohomology() == {}


def test_flatten_shifted_positions():
    p = closed_ray()
    s = refine_arrangement([p], 3)
    f = indicator_sheaf(s, p)
    flat = flatten_terms(s, [(2, f)], {})
    plus = s.cell_of_point((1,))
    assert flat.stalk(plus).cohomology() == {2: 1}


def test_summary_gen_ranks():
    p = closed_ray()
    s = refine_arrangement([p], 3)
    f = indicator_sheaf(s, p)
    summ = f.summary()
    zero = s.cell_of_point((0,))
    plus = s.cell_of_point((1,))
    assert summ["gen_ranks"].get((zero, plus)) == {0: 1}
