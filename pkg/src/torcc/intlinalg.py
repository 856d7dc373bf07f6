"""Exact integer and rational linear algebra.

Everything here works over arbitrary-precision ``int`` and
``fractions.Fraction``; no floating point is used anywhere.  Matrices are
plain lists of lists (row major).  The module provides the Smith normal
form with unimodular transforms, saturated kernels, cokernels of lattice
maps, preimage lattices, and a small finite-abelian-group type used for
chart stabilizers and character cosets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple
Mat = list  # list of rows


def make_matrix(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    out = [list(map(int, r)) for r in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, u: Sequence) -> tuple:
    return tuple(c * x for x in u)


def content(v: Sequence[int]) -> int:
    """gcd of the entries, 0 for the zero vector."""
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector, preserving direction."""
    from fractions import Fraction as F

    fr = [F(x) for x in v]
    if all(x == 0 for x in fr):
        return tuple(0 for _ in v)
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = content(ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; thin wrapper used at module boundaries."""

    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = make_matrix(rows)
        return cls(tuple(tuple(r) for r in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V = D with U, V unimodular and D diagonal with d_i | d_{i+1}."""

    U: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    invariant_factors: tuple[int, ...]  # nonzero diagonal entries, in order


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a, src, dst, c):
    a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]


def _add_col(a, src, dst, c):
    for row in a:
        row[dst] += c * row[src]


def _negate_row(a, i):
    a[i] = [-x for x in a[i]]


def _negate_col(a, i):
    for row in a:
        row[i] = -row[i]


def smith_normal_form(a: Sequence[Sequence[int]] | IntMatrix) -> SmithDecomposition:
    """Smith normal form over the integers.

    Returns ``SmithDecomposition(U, D, V)`` with ``U @ A @ V == D``, the
    diagonal entries nonnegative and each dividing the next.  U and V are
    unimodular (determinant +-1).
    """
    if isinstance(a, IntMatrix):
        a = a.tolist()
    d = make_matrix(a)
    m = len(d)
    n = len(d[0]) if d else 0
    u = identity(m)
    v = identity(n)

    def pivot_search(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0:
                    if best is None or abs(d[i][j]) < abs(d[best[0]][best[1]]):
                        best = (i, j)
        return best

    t = 0
    while True:
        piv = pivot_search(t)
        if piv is None:
            break
        i, j = piv
        if i != t:
            _swap_rows(d, t, i)
            _swap_rows(u, t, i)
        if j != t:
            _swap_cols(d, t, j)
            _swap_cols(v, t, j)
        # Clear row and column t, iterating until both are clean.
        while True:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    _add_row(d, t, i, -q)
                    _add_row(u, t, i, -q)
                    if d[i][t] != 0:
                        _swap_rows(d, t, i)
                        _swap_rows(u, t, i)
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    _add_col(d, t, j, -q)
                    _add_col(v, t, j, -q)
                    if d[t][j] != 0:
                        _swap_cols(d, t, j)
                        _swap_cols(v, t, j)
                        dirty = True
            if not dirty:
                break
        # Divisibility: d[t][t] must divide every remaining entry.
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t] != 0:
                    _add_row(d, i, t, 1)
                    _add_row(u, i, t, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if d[t][t] < 0:
                _negate_row(d, t)
                _negate_row(u, t)
            t += 1
            if t >= min(m, n):
                break

    factors = tuple(d[i][i] for i in range(min(m, n)) if d[i][i] != 0)
    return SmithDecomposition(
        U=tuple(tuple(r) for r in u),
        D=tuple(tuple(r) for r in d),
        V=tuple(tuple(r) for r in v),
        invariant_factors=factors,
    )


def kernel_basis(a: Sequence[Sequence[int]] | IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel {x in Z^n : A x = 0}."""
    if isinstance(a, IntMatrix):
        a = a.tolist()
    a = make_matrix(a)
    if not a:
        return []
    n = len(a[0])
    snf = smith_normal_form(a)
    r = len(snf.invariant_factors)
    v = [list(row) for row in snf.V]
    basis = []
    for j in range(r, n):
        col = tuple(v[i][j] for i in range(n))
        basis.append(col)
    return basis


def cokernel(a: Sequence[Sequence[int]] | IntMatrix) -> tuple["FiniteAbelianGroup", int]:
    """Cokernel of A : Z^n -> Z^m as (torsion group, free rank)."""
    if isinstance(a, IntMatrix):
        a = a.tolist()
    a = make_matrix(a)
    m = len(a)
    snf = smith_normal_form(a)
    factors = [f for f in snf.invariant_factors if f > 1]
    free_rank = m - len(snf.invariant_factors)
    return FiniteAbelianGroup(tuple(factors)), free_rank


def rank_rational(a: Sequence[Sequence]) -> int:
    """Rank over Q via fraction-free elimination."""
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
        inv = rows[r][c]
        for i in range(r + 1, m):
            if rows[i][c] != 0:
                f = rows[i][c] / inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def nullspace_rational(a: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of the rational null space of A (rows = equations)."""
    if not a:
        return []
    m = len(a)
    n = len(a[0])
    rows = [[Fraction(x) for x in r] for r in a]
    # reduced row echelon form
    pivots = []
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
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(tuple(vec))
    return basis


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One rational solution of A x = b, or None if inconsistent."""
    if not a:
        return [] if all(Fraction(x) == 0 for x in b) else None
    m = len(a)
    n = len(a[0])
    rows = [[Fraction(x) for x in r] + [Fraction(b[i])] for i, r in enumerate(a)]
    pivots = []
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
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if rows[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return x


def saturate(vectors: Sequence[Sequence[int]], ambient: int) -> list[tuple[int, ...]]:
    """Basis of span_Q(vectors) intersected with Z^ambient."""
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    if not vecs:
        return []
    # The saturation is the kernel of any integer matrix whose kernel is the span:
    # take equations cutting out the span.
    eqs = nullspace_rational(vecs)  # functionals vanishing on the span? no:
    # nullspace_rational treats rows as equations; we need functionals phi with
    # phi(v)=0 for all v, i.e. nullspace of the matrix with rows v.
    eq_int = [primitive(e) for e in eqs]
    if not eq_int:
        return [tuple(r) for r in identity(ambient)]
    return kernel_basis(make_matrix(eq_int))


def preimage_lattice(
    a: Sequence[Sequence[int]] | IntMatrix,
    sublattice: Sequence[Sequence] | None = None,
) -> list[tuple[Fraction, ...]]:
    """Basis of the lattice {x in Q^n : A x in L} for a sublattice L of Q^m.

    ``sublattice`` is given by basis vectors (defaults to Z^m).  The result is
    exact rational vectors.  Raises ``ValueError`` when the preimage is not
    discrete (A has a nontrivial rational kernel) or when A(Q^n) is not
    contained in span(L) forcing a rank drop.
    """
    if isinstance(a, IntMatrix):
        a = a.tolist()
    a = make_matrix(a)
    m = len(a)
    n = len(a[0]) if a else 0
    if rank_rational(a) < n:
        raise ValueError("preimage is not a lattice: map has nontrivial kernel")
    if sublattice is None:
        sub = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    else:
        sub = [[Fraction(x) for x in row] for row in sublattice]
    # Express condition A x = B t with t integral.  Clear denominators:
    # columns of B are the sublattice basis.
    bcols = transpose(sub)
    # common denominator of B
    den = 1
    for row in sub:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    bint = [[int(x * den) for x in row] for row in bcols]  # m x r integer
    r = len(sub)
    # Solve in terms of SNF of Bint: U Bint V = D.
    snf_b = smith_normal_form(bint)
    u = [list(row) for row in snf_b.U]
    ddiag = snf_b.invariant_factors
    rb = len(ddiag)
    if rb < r:
        raise ValueError("sublattice basis is degenerate")
    # condition: U A x has entries (den * l_i) with l in L' where
    # (U B) = D V^{-1}: lattice U*L = (1/den) * D * Z^r on first rb coords, 0 beyond.
    ua = mat_mul(u, a)  # m x n over int
    # rows beyond rb must vanish identically on the preimage -> equations
    eq_rows = [ua[i] for i in range(rb, m)]
    if eq_rows and rank_rational(eq_rows) > 0:
        # solutions confined to a proper subspace -> not full rank lattice
        if rank_rational(eq_rows) >= 1 and n - rank_rational(eq_rows) < n:
            raise ValueError("preimage is not a full-rank lattice in the ambient span")
    # first rb rows: (ua_i . x) must lie in (d_i/den) Z
    scaled = []
    for i in range(rb):
        # condition: den * (ua_i . x) / d_i integer
        row = [Fraction(den * e, ddiag[i]) for e in ua[i]]
        scaled.append(row)
    # common denominator to make integer matrix
    den2 = 1
    for row in scaled:
        for x in row:
            den2 = den2 * x.denominator // gcd(den2, x.denominator)
    c = [[int(x * den2) for x in row] for row in scaled]  # condition: C x in den2*Z^rb
    snf_c = smith_normal_form(c)
    dc = snf_c.invariant_factors
    if len(dc) < n:
        raise ValueError("preimage is not a full-rank lattice in the ambient span")
    v = [list(row) for row in snf_c.V]
    basis = []
    for j in range(n):
        col = [Fraction(v[i][j] * den2, dc[j]) for i in range(n)]
        basis.append(tuple(col))
    return basis


class FiniteAbelianGroup:
    """Product of cyclic groups Z/d_1 x ... x Z/d_k with d_i >= 2, d_i | d_{i+1}."""

    def __init__(self, invariant_factors: Iterable[int]):
        factors = tuple(int(f) for f in invariant_factors)
        if any(f < 2 for f in factors):
            raise ValueError("invariant factors must be >= 2")
        self.invariant_factors = factors

    @property
    def order(self) -> int:
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    def elements(self) -> list[tuple[int, ...]]:
        elems = [()]
        for f in self.invariant_factors:
            elems = [e + (i,) for e in elems for i in range(f)]
        return elems

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        self._check(x)
        self._check(y)
        return tuple((a + b) % f for a, b, f in zip(x, y, self.invariant_factors))

    def neg(self, x: Sequence[int]) -> tuple[int, ...]:
        self._check(x)
        return tuple((-a) % f for a, f in zip(x, self.invariant_factors))

    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.invariant_factors)

    def _check(self, x: Sequence[int]) -> None:
        if len(x) != len(self.invariant_factors):
            raise ValueError("element length mismatch")
        for a, f in zip(x, self.invariant_factors):
            if not 0 <= a < f:
                raise ValueError("residue out of range")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteAbelianGroup)
            and self.invariant_factors == other.invariant_factors
        )

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    def __repr__(self) -> str:
        if not self.invariant_factors:
            return "FiniteAbelianGroup(trivial)"
        return "FiniteAbelianGroup(%s)" % " x ".join(
            "Z/%d" % f for f in self.invariant_factors
        )
