import random
from fractions import Fraction

import pytest

from torcc.chains import (
    ChainMap,
    Complex,
    cone,
    direct_sum,
    exact_rank,
    matmul,
    nullspace,
    tensor,
)


def dense_rank_oracle(a):
    """Plain Gaussian elimination over Fraction."""
    rows = [[Fraction(x) for x in r] for r in a]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def test_exact_rank_random():
    rng = random.Random(11)
    for _ in range(60):
        m = rng.randint(1, 6)
        n = rng.randint(1, 6)
        a = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        assert exact_rank(a) == dense_rank_oracle(a)


def test_nullspace():
    ns = nullspace([[1, 2, 3]], 3)
    assert len(ns) == 2
    for v in ns:
        assert v[0] + 2 * v[1] + 3 * v[2] == 0
    assert len(nullspace([], 2)) == 2


def interval_complex():
    # 0 -> Q^2 -> Q -> 0 : cells of a closed interval (2 points, 1 edge)
    return Complex({0: 2, 1: 1}, {0: [[1, -1]]})


def test_cohomology_interval():
    c = interval_complex()
    c.validate()
    assert c.cohomology() == {0: 1}


def test_cohomology_acyclic_and_shift():
    c = Complex({0: 1, 1: 1}, {0: [[1]]})
    assert c.is_acyclic()
    s = c.shift(3)
    s.validate()
    assert s.is_acyclic()
    p = Complex.point(0)
    assert p.shift(2).cohomology() == {-2: 1}
    assert p.shift(-1).cohomology() == {1: 1}


def test_dual():
    c = interval_complex()
    d = c.dual()
    d.validate()
    assert d.cohomology() == {0: 1}
    c2 = Complex({0: 1, 1: 2}, {0: [[1], [0]]})
    c2.validate()
    dd = c2.dual()
    dd.validate()
    assert dd.cohomology() == {-1: 1}
    assert c2.cohomology() == {1: 1}


def test_direct_sum():
    a = Complex.point(0)
    b = interval_complex()
    s, offs = direct_sum([a, b])
    s.validate()
    assert s.cohomology() == {0: 2}
    assert offs[0] == {0: 0}
    assert offs[1][0] == 1


def test_tensor_kunneth():
    rng = random.Random(5)
    # interval ox interval ~ point
    t = tensor(interval_complex(), interval_complex())
    t.validate()
    assert t.cohomology() == {0: 1}
    # circle-like complex: Q -> Q^2 zero map has H^0=1, H^1=... build S^1 cells:
    circle = Complex({0: 2, 1: 2}, {0: [[1, -1], [1, -1]]})
    circle.validate()
    assert circle.cohomology() == {0: 1, 1: 1}
    tt = tensor(circle, circle)
    tt.validate()
    # torus Kunneth: 1, 2, 1
    assert tt.cohomology() == {0: 1, 1: 2, 2: 1}
    # random smoke: d^2 = 0 preserved by tensor
    for _ in range(10):
        dims = {0: rng.randint(1, 2), 1: rng.randint(1, 2)}
        m = [[rng.randint(-2, 2) for _ in range(dims[0])] for _ in range(dims[1])]
        c = Complex(dims, {0: m})
        t2 = tensor(c, interval_complex())
        t2.validate()


def test_chain_map_and_cone():
    a = Complex.point(0)
    b = interval_complex()
    f = ChainMap(a, b, {0: [[1], [1]]})
    f.validate()
    c = cone(f)
    c.validate()
    # cone of a quasi-isomorphism point -> interval is acyclic
    assert c.is_acyclic()
    ranks = f.induced_cohomology_ranks()
    assert ranks == {0: 1}
    g = ChainMap.zero(a, b)
    assert cone(g).cohomology() == {-1: 1, 0: 1}
    assert g.induced_cohomology_ranks() == {}


def test_identity_and_compose():
    b = interval_complex()
    i = ChainMap.identity(b)
    i.validate()
    assert i.induced_cohomology_ranks() == {0: 1}
    ii = i.compose(i)
    assert ii.induced_cohomology_ranks() == {0: 1}


def test_tensor_of_maps():
    b = interval_complex()
    i = ChainMap.identity(b)
    t = i.tensor(i)
    t.validate()
    assert t.induced_cohomology_ranks() == {0: 1}


def test_validate_raises():
    with pytest.raises(ValueError):
        Complex({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]}).validate()
    a = Complex({0: 1, 1: 1}, {0: [[1]]})
    with pytest.raises(ValueError):
        ChainMap(a, Complex.point(0), {0: [[1]], 1: [[1]]}).validate()


def test_matmul_guard():
    assert matmul([[1, 2]], [[1], [1]]) == [[3]]
    with pytest.raises(ValueError):
        matmul([[1, 2]], [[1]])
