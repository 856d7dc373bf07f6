from fractions import Fraction

import pytest

from torcc.cones import Cone
from torcc.fans import (
    Fan,
    StackyFan,
    build_skeleton,
    star_subdivision,
)
from torcc.fixtures import SUITE_NAMES, load_stacky_fan, load_suite
from torcc.intlinalg import dot, mat_vec


def quadrant():
    return Cone.from_rays(2, [(1, 0), (0, 1)])


def p2_fan():
    return Fan.from_cones(
        2,
        [
            Cone.from_rays(2, [(1, 0), (0, 1)]),
            Cone.from_rays(2, [(0, 1), (-1, -1)]),
            Cone.from_rays(2, [(-1, -1), (1, 0)]),
        ],
    )


def test_fan_closure_and_counts():
    f = p2_fan()
    assert len(f.cones_of_dim(0)) == 1
    assert len(f.cones_of_dim(1)) == 3
    assert len(f.cones_of_dim(2)) == 3
    assert len(f.maximal_cones()) == 3


def test_fan_validation_rejects_overlap():
    with pytest.raises(ValueError):
        Fan.from_cones(
            2,
            [
                Cone.from_rays(2, [(1, 0), (0, 1)]),
                Cone.from_rays(2, [(1, 1), (-1, 1)]),
            ],
        )


def test_predicates():
    f = p2_fan()
    assert f.is_smooth() and f.is_simplicial() and f.is_complete()
    a1cone = Fan.from_cones(2, [Cone.from_rays(2, [(1, 0), (1, 2)])])
    assert a1cone.is_simplicial() and not a1cone.is_smooth()
    assert not a1cone.is_complete()
    line = Fan.from_cones(1, [Cone.from_rays(1, [(1,)])])
    assert line.is_smooth() and not line.is_complete()
    p1 = Fan.from_cones(1, [Cone.from_rays(1, [(1,)]), Cone.from_rays(1, [(-1,)])])
    assert p1.is_complete()


def test_star_subdivision_quadrant():
    f = Fan.from_cones(2, [quadrant()])
    out = star_subdivision(f, quadrant())
    maxc = out.maximal_cones()
    assert len(maxc) == 2
    rays = set()
    for c in maxc:
        rays.update(c.rays)
    assert (1, 1) in rays
    # support is preserved on a sample grid
    for x in range(-3, 4):
        for y in range(-3, 4):
            p = (Fraction(x, 2), Fraction(y, 2))
            assert f.support_contains(p) == out.support_contains(p)


def test_star_subdivision_a1_cone_smooths():
    c = Cone.from_rays(2, [(1, 0), (1, 2)])
    f = Fan.from_cones(2, [c])
    out = star_subdivision(f, c)
    assert all(m.is_smooth() for m in out.maximal_cones())
    rays = set()
    for m in out.maximal_cones():
        rays.update(m.rays)
    assert (1, 1) in rays  # primitive of (2, 2)


def test_star_subdivision_errors():
    f = Fan.from_cones(2, [quadrant()])
    ray = Cone.from_rays(2, [(1, 0)])
    with pytest.raises(ValueError):
        star_subdivision(f, ray)  # 1-dimensional
    with pytest.raises(ValueError):
        star_subdivision(f, Cone.from_rays(2, [(1, 1)]))  # not in fan


def test_suite_fixtures_all_valid():
    for name in SUITE_NAMES:
        sf = load_stacky_fan(name)
        report = sf.validate_condition()
        assert report.valid, (name, report.issues)


def test_condition1_identity_p2():
    sf = load_stacky_fan("p2")
    assert sf.validate_condition().valid
    assert sf.fan.is_complete()


def test_condition1_rejects_dimension_drop():
    # beta = [[1, 0]] : Z^2 -> Z with a 2-cone upstairs collapses dimension
    sf = StackyFan([[1, 0]], Fan.from_cones(2, [quadrant()]))
    report = sf.validate_condition()
    assert not report.valid
    assert report.first_issue().clause in (
        "dimension-preserved",
        "injective-on-span",
    )


def test_m_sigma_p1_doubled():
    sf = load_stacky_fan("p1x2")
    sigma = Cone.from_rays(1, [(1,)])
    data = sf.m_sigma(sigma)
    assert data.group.invariant_factors == (2,)
    reps = sorted(data.representatives())
    assert reps == [(Fraction(0),), (Fraction(1, 2),)]
    # lattice is (1/2) Z
    assert sorted(data.lattice_basis) in ([(Fraction(1, 2),)], [(Fraction(-1, 2),)])
    # coset arithmetic round-trips
    for coset in data.group.elements():
        rep = data.rep_of(coset)
        assert data.coset_of(rep) == coset


def test_m_sigma_identity_trivial():
    sf = load_stacky_fan("p2")
    for sigma in sf.fan.cones:
        data = sf.m_sigma(sigma)
        assert data.group.order == 1


def test_m_sigma_c2z2():
    sf = load_stacky_fan("c2z2")
    sigma = [c for c in sf.fan.cones if c.dim() == 2][0]
    data = sf.m_sigma(sigma)
    assert data.group.invariant_factors == (2,)
    rep = data.rep_of((1,))
    assert all(0 <= x < 1 for x in rep)
    # the representative maps into the dual lattice condition A chi in Z^2
    img = [sum(Fraction(a) * x for a, x in zip(row, rep)) for row in data.matrix]
    assert all(v.denominator == 1 for v in img)


def test_h_beta_matches_coset_group_everywhere():
    for name, sf in load_suite().items():
        for sigma in sf.fan.cones:
            h = sf.h_beta(sigma)
            m = sf.m_sigma(sigma)
            assert h.order == m.group.order, (name, sigma)


def test_h_beta_expected_groups():
    sf = load_stacky_fan("c2z2")
    sigma = [c for c in sf.fan.cones if c.dim() == 2][0]
    assert sf.h_beta(sigma).invariant_factors == (2,)
    sf = load_stacky_fan("p112")
    orb = Cone.from_rays(2, [(1, 0), (-1, -2)])
    assert sf.h_beta(orb).invariant_factors == (2,)
    # all other maximal cones of P(1,1,2) are smooth charts
    others = [
        c
        for c in sf.fan.cones
        if c.dim() == 2 and c.key() != orb.key()
    ]
    for c in others:
        assert sf.h_beta(c).order == 1


def test_skeleton_p1():
    sf = load_stacky_fan("p1")
    sk = build_skeleton(sf)
    # zero section + two rays
    assert len(sk.cells) == 3
    zero_cells = [c for c in sk.cells if not c.sigma_rays]
    assert len(zero_cells) == 1
    assert zero_cells[0].perp_basis == ((1,),)
    ray_cells = [c for c in sk.cells if c.sigma_rays]
    negs = sorted(c.neg_cone_rays for c in ray_cells)
    assert negs == [((-1,),), ((1,),)]


def test_skeleton_p1_doubled_has_coset_cells():
    sf = load_stacky_fan("p1x2")
    sk = build_skeleton(sf)
    assert len(sk.cells) == 5  # zero section + 2 cosets per ray
    halves = [c for c in sk.cells if c.chi == (Fraction(1, 2),)]
    assert len(halves) == 2


def test_skeleton_a1():
    sf = load_stacky_fan("a1")
    sk = build_skeleton(sf)
    assert len(sk.cells) == 2
    ray_cells = [c for c in sk.cells if c.sigma_rays]
    assert ray_cells[0].neg_cone_rays == ((-1,),)


def test_skeleton_p2_cells():
    sf = load_stacky_fan("p2")
    sk = build_skeleton(sf)
    # 1 zero section + 3 rays + 3 maximal cones, trivial cosets
    assert len(sk.cells) == 7


def test_stacky_star_subdivide():
    sf = load_stacky_fan("c2z2")
    sigma = [c for c in sf.fan.cones if c.dim() == 2][0]
    out = sf.star_subdivide(sigma)
    assert out.validate_condition().valid
    assert len(out.fan.maximal_cones()) == 2


def test_image_cone_map():
    sf = load_stacky_fan("p112")
    for c in sf.fan_hat.cones:
        img = sf.base_cone(c)
        for g in c.generators:
            assert img.contains(mat_vec(sf.beta, g))
        assert sf.hat_cone(img).key() == c.key()
