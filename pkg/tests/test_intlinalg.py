import random
from fractions import Fraction

import pytest

from torcc.intlinalg import (
    FiniteAbelianGroup,
    IntMatrix,
    cokernel,
    identity,
    kernel_basis,
    mat_mul,
    mat_vec,
    nullspace_rational,
    preimage_lattice,
    primitive,
    rank_rational,
    saturate,
    smith_normal_form,
    solve_rational,
)


def det_int(a):
    """Cofactor-expansion determinant, used as an independent oracle."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        total += (-1) ** j * a[0][j] * det_int(minor)
    return total


def snf_elementary_oracle(a):
    """Diagonal of the Smith form by naive gcd row/column reduction.

    Independent of the production routine: no transform tracking, just
    repeated elementary operations until diagonal, then divisibility fix.
    """
    d = [list(r) for r in a]
    m, n = len(d), len(d[0]) if d else 0
    t = 0
    while t < min(m, n):
        # move a minimal nonzero entry to (t,t)
        entries = [
            (abs(d[i][j]), i, j)
            for i in range(t, m)
            for j in range(t, n)
            if d[i][j] != 0
        ]
        if not entries:
            break
        _, i, j = min(entries)
        d[t], d[i] = d[i], d[t]
        for row in d:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    d[i] = [x - q * y for x, y in zip(d[i], d[t])]
                    if d[i][t] != 0:
                        d[t], d[i] = d[i], d[t]
                        done = False
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    for row in d:
                        row[j] -= q * row[t]
                    if d[t][j] != 0:
                        for row in d:
                            row[t], row[j] = row[j], row[t]
                        done = False
        bad = [
            (i, j)
            for i in range(t + 1, m)
            for j in range(t + 1, n)
            if d[i][j] % d[t][t] != 0
        ]
        if bad:
            i, _ = bad[0]
            d[t] = [x + y for x, y in zip(d[t], d[i])]
            continue
        t += 1
    diag = [abs(d[i][i]) for i in range(min(m, n))]
    return [x for x in diag if x != 0]


CASES = [
    [[1, 0], [1, 2]],
    [[2, 3]],
    [[1, 0], [0, 1]],
    [[2]],
    [[0, 0], [0, 0]],
    [[2, 4, 4], [-6, 6, 12], [10, 4, 16]],
    [[1, 2, 3], [4, 5, 6]],
]


@pytest.mark.parametrize("a", CASES)
def test_snf_identity_uav(a):
    snf = smith_normal_form(a)
    u = [list(r) for r in snf.U]
    v = [list(r) for r in snf.V]
    d = [list(r) for r in snf.D]
    assert mat_mul(mat_mul(u, a), v) == d
    assert abs(det_int(u)) == 1
    assert abs(det_int(v)) == 1
    # divisibility chain
    f = snf.invariant_factors
    for x, y in zip(f, f[1:]):
        assert y % x == 0


@pytest.mark.parametrize("a", CASES)
def test_snf_matches_elementary_oracle(a):
    assert list(smith_normal_form(a).invariant_factors) == snf_elementary_oracle(a)


def test_snf_small_matrices():
    assert smith_normal_form([[1, 0], [1, 2]]).invariant_factors == (1, 2)
    assert smith_normal_form(identity(2)).invariant_factors == (1, 1)
    # gcd(2,3) = 1 by Euclid
    snf = smith_normal_form([[2, 3]])
    assert snf.invariant_factors == (1,)
    assert [list(r) for r in snf.D] == [[1, 0]]


def test_snf_random_matrices():
    rng = random.Random(7)
    for _ in range(40):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        snf = smith_normal_form(a)
        u = [list(r) for r in snf.U]
        v = [list(r) for r in snf.V]
        assert mat_mul(mat_mul(u, a), v) == [list(r) for r in snf.D]
        assert abs(det_int(u)) == 1
        assert abs(det_int(v)) == 1
        assert list(snf.invariant_factors) == snf_elementary_oracle(a)


def brute_force_kernel_points(a, radius=5):
    """All integer points with A x = 0 in the box [-radius, radius]^n."""
    n = len(a[0])
    pts = []

    def rec(prefix):
        if len(prefix) == n:
            if all(sum(r[i] * prefix[i] for i in range(n)) == 0 for r in a):
                pts.append(tuple(prefix))
            return
        for x in range(-radius, radius + 1):
            rec(prefix + [x])

    rec([])
    return pts


def in_span_int(basis, pt):
    """Is pt an integer combination of basis vectors?"""
    if not basis:
        return all(x == 0 for x in pt)
    cols = [list(b) for b in basis]
    sol = solve_rational([
        [cols[j][i] for j in range(len(basis))] for i in range(len(pt))
    ], list(pt))
    return sol is not None and all(x.denominator == 1 for x in sol)


def test_kernel_basis_small_matrices():
    b = kernel_basis([[2, 3]])
    assert len(b) == 1
    assert b[0] in [(3, -2), (-3, 2)]
    assert kernel_basis(identity(2)) == []
    assert len(kernel_basis([[0, 0]])) == 2


def test_kernel_saturation_box():
    for a in ([[2, 3]], [[2, 4, 4], [-6, 6, 12]], [[1, 2, 3], [4, 5, 6]]):
        basis = kernel_basis(a)
        for v in basis:
            assert all(x == 0 for x in mat_vec(a, v))
        for pt in brute_force_kernel_points(a, radius=5):
            assert in_span_int(basis, pt)


def test_cokernel_small_matrices():
    g, free = cokernel([[1, 0], [1, 2]])
    assert g.invariant_factors == (2,) and free == 0
    g, free = cokernel([[2]])
    assert g.invariant_factors == (2,) and free == 0
    g, free = cokernel(identity(3))
    assert g.invariant_factors == () and free == 0
    g, free = cokernel([[0, 0]])
    assert g.order == 1 and free == 1


def test_cokernel_order_equals_det():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 3)
        while True:
            a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
            d = det_int(a)
            if d != 0:
                break
        g, free = cokernel(a)
        assert free == 0
        assert g.order == abs(d)


def test_preimage_lattice_small_matrices():
    basis = preimage_lattice([[2]])
    assert basis == [(Fraction(1, 2),)]
    basis = preimage_lattice(identity(2))
    lat = sorted(basis)
    assert in_span_frac(lat, (1, 0)) and in_span_frac(lat, (0, 1))
    assert lattice_index(lat) == 1
    basis = preimage_lattice([[1, 1], [0, 2]])
    # index-2 superlattice of Z^2
    assert lattice_index(basis) == Fraction(1, 2)
    for v in [(1, 0), (0, 1)]:
        assert in_span_frac(basis, v)


def lattice_index(basis):
    """|det| of the basis matrix: covolume relative to Z^n."""
    n = len(basis)
    mat = [[Fraction(basis[j][i]) for j in range(n)] for i in range(n)]
    # fraction determinant via expansion
    def det(a):
        if len(a) == 1:
            return a[0][0]
        tot = Fraction(0)
        for j in range(len(a)):
            minor = [row[:j] + row[j + 1 :] for row in a[1:]]
            tot += (-1) ** j * a[0][j] * det(minor)
        return tot

    return abs(det(mat))


def in_span_frac(basis, pt):
    cols = [list(map(Fraction, b)) for b in basis]
    sol = solve_rational(
        [[cols[j][i] for j in range(len(basis))] for i in range(len(pt))], list(pt)
    )
    return sol is not None and all(x.denominator == 1 for x in sol)


def test_preimage_lattice_membership_characterisation():
    a = [[1, 1], [0, 2]]
    basis = preimage_lattice(a)
    # brute force: x = (p/2, q/2) with A x integral iff x in lattice
    for p in range(-4, 5):
        for q in range(-4, 5):
            x = (Fraction(p, 2), Fraction(q, 2))
            img = [sum(Fraction(a[i][j]) * x[j] for j in range(2)) for i in range(2)]
            integral = all(y.denominator == 1 for y in img)
            assert integral == in_span_frac(basis, x)


def test_preimage_lattice_rejects_kernel():
    with pytest.raises(ValueError):
        preimage_lattice([[1, 0]])


def test_saturate():
    basis = saturate([[2, 0], [0, 2]], 2)
    assert lattice_index(basis) == 1
    basis = saturate([[2, 4]], 2)
    assert len(basis) == 1 and tuple(basis[0]) in [(1, 2), (-1, -2)]
    assert saturate([], 2) == []


def test_primitive_and_misc():
    assert primitive((Fraction(1, 2), Fraction(1, 2))) == (1, 1)
    assert primitive((4, -6)) == (2, -3)
    assert primitive((0, 0)) == (0, 0)
    assert rank_rational([[1, 2], [2, 4]]) == 1
    ns = nullspace_rational([[1, 2]])
    assert len(ns) == 1


def test_finite_abelian_group():
    g = FiniteAbelianGroup((2, 4))
    assert g.order == 8
    assert len(g.elements()) == 8
    assert g.add((1, 3), (1, 2)) == (0, 1)
    assert g.neg((1, 1)) == (1, 3)
    with pytest.raises(ValueError):
        FiniteAbelianGroup((1,))
    with pytest.raises(ValueError):
        g.add((2, 0), (0, 0))
    assert repr(FiniteAbelianGroup(())) == "FiniteAbelianGroup(trivial)"


def test_int_matrix_wrapper():
    m = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert m.rows == 2 and m.cols == 2
    assert smith_normal_form(m).invariant_factors == (1, 2)


def test_preimage_lattice_explicit_sublattice():
    # {x : x in 2Z} as the preimage of the even sublattice under the identity
    basis = preimage_lattice([[1]], sublattice=[(2,)])
    assert basis == [(Fraction(2),)]
    # doubled target lattice against a doubling map: back to Z
    basis = preimage_lattice([[2]], sublattice=[(2,)])
    assert basis == [(Fraction(1),)]
    # rank-2 mixed case: A x in Z(2,0) + Z(0,3)
    basis = preimage_lattice([[1, 0], [0, 1]], sublattice=[(2, 0), (0, 3)])
    assert lattice_index(basis) == 6
