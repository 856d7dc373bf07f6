from fractions import Fraction

import pytest

from torcc.cones import Cone
from torcc.polyhedron import LCPolyhedron, LinCondition, box_polyhedron


def test_condition_normalization():
    c = LinCondition.make((Fraction(1, 2), Fraction(-1, 3)), ">=", Fraction(1, 6))
    assert c.coeffs == (3, -2) and c.rhs == 1
    # <= flips to >=
    c = LinCondition.make((2,), "<=", 4)
    assert c.rel == ">=" and c.coeffs == (-1,) and c.rhs == -2
    with pytest.raises(ValueError):
        LinCondition.make((1,), "~", 0)


def test_membership_strictness():
    p = LCPolyhedron.from_strings(1, [((1,), ">", 0), ((1,), "<=", 1)])
    assert p.contains((1,)) and p.contains((Fraction(1, 2),))
    assert not p.contains((0,)) and not p.contains((2,))
    q = p.closure()
    assert q.contains((0,))
    r = p.dual_flip()
    assert r.contains((0,)) and not r.contains((1,))


def test_empty_detection_and_propagation():
    p = LCPolyhedron.from_strings(1, [((1,), ">", 0), ((1,), "<", 0)])
    assert p.is_empty()
    e = LCPolyhedron.empty(2)
    assert e.is_empty()
    assert e.translate((1, 1)).is_empty()
    assert e.intersection(LCPolyhedron.whole_space(2)).is_empty()
    assert not LCPolyhedron.whole_space(2).is_empty()


def test_translate_and_negate():
    p = LCPolyhedron.from_strings(2, [((1, 0), ">=", 0), ((0, 1), ">", 1)])
    t = p.translate((2, 2))
    assert t.contains((2, Fraction(7, 2)))
    assert not t.contains((1, 4))
    n = p.negate_space()
    assert n.contains((-1, -2))
    assert not n.contains((1, 2))


def test_recession_and_bounded():
    box = box_polyhedron(2, (0, 0), (1, 1))
    assert box.is_bounded()
    assert box.recession_cone().dim() == 0
    strip = LCPolyhedron.from_strings(2, [((0, 1), ">=", 0), ((0, 1), "<=", 1)])
    rec = strip.recession_cone()
    assert rec.dim() == 1 and not rec.is_strictly_convex()
    quad = LCPolyhedron.from_cone(Cone.from_rays(2, [(1, 0), (0, 1)]))
    assert quad.recession_cone() == Cone.from_rays(2, [(1, 0), (0, 1)])


def test_closure_vertices():
    tri = LCPolyhedron.from_strings(
        2, [((1, 0), ">", 0), ((0, 1), ">=", 0), ((-1, -1), ">", -2)]
    )
    verts = tri.closure_vertices()
    assert set(verts) == {
        (Fraction(0), Fraction(0)),
        (Fraction(2), Fraction(0)),
        (Fraction(0), Fraction(2)),
    }


def test_from_cone_interior():
    c = Cone.from_rays(2, [(1, 0), (1, 2)])
    closed = LCPolyhedron.from_cone(c)
    inner = LCPolyhedron.from_cone(c, interior=True)
    assert closed.contains((1, 0)) and not inner.contains((1, 0))
    assert inner.contains((1, 1))
    ray = Cone.from_rays(2, [(1, 0)])
    rel = LCPolyhedron.from_cone(ray, interior=True)
    assert rel.contains((1, 0)) and not rel.contains((0, 0))
    assert not rel.contains((1, 1))
    zero = LCPolyhedron.from_cone(Cone.zero(2), interior=True)
    assert zero.contains((0, 0)) and not zero.contains((1, 0))


def test_witness():
    p = LCPolyhedron.from_strings(2, [((1, 0), ">", 0), ((0, 1), "=", 2)])
    w = p.witness()
    assert w is not None and p.contains(w)
    assert LCPolyhedron.empty(2).witness() is None
