import random
from fractions import Fraction

from torcc.cones import Cone
from torcc.intlinalg import dot


def sample_points(n, radius=3, denom=2):
    pts = []
    vals = [Fraction(k, denom) for k in range(-radius * denom, radius * denom + 1)]

    def rec(prefix):
        if len(prefix) == n:
            pts.append(tuple(prefix))
            return
        for v in vals:
            rec(prefix + [v])

    rec([])
    return pts


def in_cone_by_vrep(cone, x):
    """Membership via nonnegative-combination feasibility (independent of hrep)."""
    from torcc import fm

    gens = cone.generators
    if not gens:
        return all(v == 0 for v in x)
    k = len(gens)
    rows = []
    for i in range(cone.n):
        coeffs = [0] * k
        for j, g in enumerate(gens):
            coeffs[j] = g[i]
        rows.extend(fm.make_eq(coeffs, x[i]))
    for j in range(k):
        coeffs = [0] * k
        coeffs[j] = -1
        rows.append(fm.normalize_row(coeffs, False, 0))
    return fm.feasible(rows, k)


def test_hrep_vrep_cross_validation_2d():
    cones = [
        Cone.from_rays(2, [(1, 0)]),
        Cone.from_rays(2, [(1, 0), (0, 1)]),
        Cone.from_rays(2, [(1, 0), (1, 2)]),
        Cone.from_rays(2, [(1, 1), (0, 1)]),
        Cone.from_rays(2, [(1, 0), (-1, 2)]),
        Cone.zero(2),
        Cone.full(2),
        Cone.from_rays(2, [(1, 0), (-1, 0), (0, 1)]),  # upper half plane
    ]
    pts = sample_points(2, radius=2)
    for c in cones:
        for p in pts:
            assert c.contains(p) == in_cone_by_vrep(c, p), (c, p)


def test_dual_small_cones():
    # single ray (1,0) in Z^2 -> half plane m1 >= 0
    c = Cone.from_rays(2, [(1, 0)])
    d = c.dual()
    assert not d.is_strictly_convex()
    for p in sample_points(2, radius=2):
        assert d.contains(p) == (p[0] >= 0)
    # first quadrant is self dual
    q = Cone.from_rays(2, [(1, 0), (0, 1)])
    assert q.dual() == q
    # Cone((1,0),(1,2)) -> Cone((0,1),(2,-1))
    c = Cone.from_rays(2, [(1, 0), (1, 2)])
    d = c.dual()
    assert set(d.rays) == {(0, 1), (2, -1)}


def test_dual_involution():
    rng = random.Random(2)
    for _ in range(25):
        n = rng.choice([1, 2, 3])
        k = rng.randint(0, 3)
        gens = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(k)]
        c = Cone.from_rays(n, gens)
        dd = c.dual().dual()
        assert dd == c, (gens, c, dd)


def test_faces_quadrant():
    q = Cone.from_rays(2, [(1, 0), (0, 1)])
    faces = q.faces()
    dims = sorted(f.dim() for f in faces)
    assert dims == [0, 1, 1, 2]
    for f in faces:
        assert f.is_face_of(q)
    r = Cone.from_rays(2, [(1, 0)])
    assert r.is_face_of(q)
    bad = Cone.from_rays(2, [(1, 1)])
    assert not bad.is_face_of(q)


def test_faces_halfplane():
    h = Cone.from_inequalities(2, [(0, 1)])  # upper half plane
    faces = h.faces()
    dims = sorted(f.dim() for f in faces)
    assert dims == [1, 2]  # x-axis line and the half plane itself


def test_intersection_and_face_poset():
    q1 = Cone.from_rays(2, [(1, 0), (0, 1)])
    q2 = Cone.from_rays(2, [(0, 1), (-1, 0)])
    i = q1.intersection(q2)
    assert i.rays == ((0, 1),)
    assert i.is_face_of(q1) and i.is_face_of(q2)


def test_smooth_simplicial():
    assert Cone.from_rays(2, [(1, 0), (0, 1)]).is_smooth()
    a1 = Cone.from_rays(2, [(1, 0), (1, 2)])
    assert a1.is_simplicial() and not a1.is_smooth()
    assert Cone.zero(2).is_smooth()
    assert Cone.from_rays(3, [(1, 0, 0), (0, 1, 0)]).is_smooth()
    nonsimp = Cone.from_rays(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
    assert not nonsimp.is_simplicial()


def test_interior_and_span():
    q = Cone.from_rays(2, [(1, 0), (0, 1)])
    assert q.contains_interior((1, 1))
    assert not q.contains_interior((1, 0))
    r = Cone.from_rays(2, [(1, 0)])
    assert r.contains_interior((2, 0))
    assert not r.contains_interior((0, 0)) or r.dim() == 0
    z = Cone.zero(2)
    assert z.contains_interior((0, 0))
    assert not z.contains_interior((1, 0))


def test_span_perp():
    r = Cone.from_rays(2, [(1, 0)])
    perp = r.span_perp_basis()
    assert len(perp) == 1 and perp[0] in [(0, 1), (0, -1)]
    assert Cone.zero(2).span_perp_basis() == [(1, 0), (0, 1)]
    q = Cone.from_rays(2, [(1, 0), (0, 1)])
    assert q.span_perp_basis() == []


def test_negate():
    c = Cone.from_rays(2, [(1, 0), (1, 2)])
    m = c.negate()
    assert set(m.rays) == {(-1, 0), (-1, -2)}
    for p in sample_points(2, radius=2):
        assert m.contains(p) == c.contains(tuple(-x for x in p))


def test_relative_interior_point():
    c = Cone.from_rays(2, [(1, 0), (1, 2)])
    p = c.relative_interior_point()
    assert c.contains_interior(p)
    assert Cone.zero(2).relative_interior_point() == (0, 0)
