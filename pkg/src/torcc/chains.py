"""Bounded complexes of finite-dimensional Q-vector spaces, exactly.

A :class:`Complex` stores per-degree dimensions and the differentials
``d^k : C^k -> C^{k+1}`` as dense matrices of ``Fraction``/``int``.  All
ranks are computed by exact elimination; cohomology is reported as a
degree -> dimension mapping.  Conventions:

* tensor: ``d(a ox b) = da ox b + (-1)^{|a|} a ox db``
* shift: ``A[s]^k = A^{k+s}`` with ``d_{A[s]} = (-1)^s d_A``
* dual: ``(A^v)^k = (A^{-k})^v`` with ``d(phi) = (-1)^{k+1} phi . d_A``
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Sequence

Matrix = list  # list of rows, entries int | Fraction


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    if not a or not b:
        return []
    cols = len(b[0])
    out = []
    for row in a:
        acc = [0] * cols
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a: Matrix) -> Matrix:
    return [[c * x for x in r] for r in a]


def mat_is_zero(a: Matrix) -> bool:
    return all(all(x == 0 for x in r) for r in a)


def exact_rank(a: Matrix) -> int:
    """Rank over Q.  Greedy unit pivots first (cheap on incidence matrices)."""
    rows = [
        {j: v for j, v in enumerate(r) if v}
        for r in a
    ]
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        piv_i = None
        # prefer a +-1 pivot to avoid fraction growth
        for i, r in enumerate(rows):
            for j, v in r.items():
                if v == 1 or v == -1:
                    piv_i, piv_j = i, j
                    break
            if piv_i is not None:
                break
        if piv_i is None:
            piv_i = 0
            piv_j = next(iter(rows[0]))
        piv_row = rows.pop(piv_i)
        piv_val = piv_row[piv_j]
        rank += 1
        new_rows = []
        for r in rows:
            if piv_j in r:
                if piv_val == 1:
                    f = r[piv_j]
                elif piv_val == -1:
                    f = -r[piv_j]
                else:
                    f = Fraction(r[piv_j], piv_val)
                rr = dict(r)
                for j, v in piv_row.items():
                    nv = rr.get(j, 0) - f * v
                    if nv:
                        rr[j] = nv
                    else:
                        rr.pop(j, None)
                if rr:
                    new_rows.append(rr)
            else:
                new_rows.append(r)
        rows = new_rows
    return rank


def nullspace(a: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} (columns are variables)."""
    if not a:
        return [[Fraction(1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    rows = [[Fraction(x) for x in r] for r in a]
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
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
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


class Complex:
    """Cochain complex with ``d^k : C^k -> C^{k+1}``."""

    def __init__(self, dims: Mapping[int, int], diff: Mapping[int, Matrix] | None = None):
        self.dims: Dict[int, int] = {k: int(v) for k, v in dims.items() if v}
        self.diff: Dict[int, Matrix] = {}
        if diff:
            for k, m in diff.items():
                if m and not mat_is_zero(m):
                    self.diff[k] = [list(r) for r in m]

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def d(self, k: int) -> Matrix:
        m = self.diff.get(k)
        if m is None:
            return zero_matrix(self.dim(k + 1), self.dim(k))
        return m

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def validate(self) -> None:
        for k, m in self.diff.items():
            if len(m) != self.dim(k + 1) or (m and len(m[0]) != self.dim(k)):
                raise ValueError("differential shape mismatch at degree %d" % k)
        for k in list(self.diff):
            if self.dim(k + 2) and self.dim(k):
                if not mat_is_zero(matmul(self.d(k + 1), self.d(k))):
                    raise ValueError("d^2 != 0 at degree %d" % k)

    def cohomology(self) -> Dict[int, int]:
        """Exact cohomology dimensions per degree (zero entries omitted)."""
        if not self.dims:
            return {}
        ranks: Dict[int, int] = {}
        for k in self.dims:
            if self.dim(k + 1):
                ranks[k] = exact_rank(self.d(k))
        out = {}
        for k in self.dims:
            h = self.dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0)
            if h:
                out[k] = h
        return out

    def is_acyclic(self) -> bool:
        return not self.cohomology()

    def shift(self, s: int) -> "Complex":
        dims = {k - s: v for k, v in self.dims.items()}
        sign = -1 if s % 2 else 1
        diff = {k - s: mat_scale(sign, m) for k, m in self.diff.items()}
        return Complex(dims, diff)

    def dual(self) -> "Complex":
        dims = {-k: v for k, v in self.dims.items()}
        diff = {}
        for k, m in self.diff.items():
            # (A^v)^{-k-1} -> (A^v)^{-k} is (+-)(d^k)^T; sign choice is immaterial
            # for d^2 = 0 but fixed for determinism.
            sign = -1 if k % 2 else 1
            mt = [list(col) for col in zip(*m)] if m and m[0] else []
            diff[-k - 1] = mat_scale(sign, mt)
        return Complex(dims, diff)

    @staticmethod
    def zero() -> "Complex":
        return Complex({})

    @staticmethod
    def point(degree: int = 0, dim: int = 1) -> "Complex":
        return Complex({degree: dim})

    def __repr__(self) -> str:
        if not self.dims:
            return "Complex(0)"
        return "Complex(%s)" % ", ".join(
            "%d:%d" % (k, self.dims[k]) for k in self.degrees()
        )


def direct_sum(parts: Sequence[Complex]) -> tuple[Complex, list[dict[int, int]]]:
    """Direct sum; also returns per-part degree offsets into the sum."""
    dims: Dict[int, int] = {}
    offsets: list[dict[int, int]] = []
    for p in parts:
        off = {}
        for k, v in p.dims.items():
            off[k] = dims.get(k, 0)
            dims[k] = dims.get(k, 0) + v
        offsets.append(off)
    total = Complex(dims)
    diff: Dict[int, Matrix] = {}
    for k in list(dims):
        if total.dim(k + 1):
            diff[k] = zero_matrix(total.dim(k + 1), total.dim(k))
    for p, off in zip(parts, offsets):
        for k, m in p.diff.items():
            if not total.dim(k + 1) or not total.dim(k):
                continue
            ro = off.get(k + 1, 0)
            co = off.get(k, 0)
            tgt = diff.setdefault(k, zero_matrix(total.dim(k + 1), total.dim(k)))
            for i, row in enumerate(m):
                for j, v in enumerate(row):
                    if v:
                        tgt[ro + i][co + j] = v
    return Complex(dims, diff), offsets


def tensor(a: Complex, b: Complex) -> Complex:
    """Tensor product with Koszul signs.

    Basis of degree n: blocks (p, q) with p+q=n ordered by p ascending,
    within a block the index is i*dim_b(q)+j.
    """
    dims: Dict[int, int] = {}
    layout: Dict[int, list[tuple[int, int, int]]] = {}  # n -> [(p, q, offset)]
    for p, dp in a.dims.items():
        for q, dq in b.dims.items():
            n = p + q
            off = dims.get(n, 0)
            layout.setdefault(n, []).append((p, q, off))
            dims[n] = off + dp * dq
    for n in layout:
        layout[n].sort()
    # recompute offsets in sorted order
    for n, blocks in layout.items():
        off = 0
        newblocks = []
        for p, q, _ in blocks:
            newblocks.append((p, q, off))
            off += a.dim(p) * b.dim(q)
        layout[n] = newblocks
        dims[n] = off
    out = Complex(dims)
    diff: Dict[int, Matrix] = {}

    def block_offset(n, p, q):
        for pp, qq, off in layout.get(n, []):
            if pp == p and qq == q:
                return off
        return None

    for n, blocks in layout.items():
        if not out.dim(n + 1):
            continue
        m = zero_matrix(out.dim(n + 1), out.dim(n))
        nz = False
        for p, q, off in blocks:
            dp, dq = a.dim(p), b.dim(q)
            # d_a ox id : (p, q) -> (p+1, q)
            if a.dim(p + 1):
                da = a.d(p)
                t_off = block_offset(n + 1, p + 1, q)
                if t_off is not None:
                    for i2 in range(a.dim(p + 1)):
                        for i in range(dp):
                            v = da[i2][i]
                            if v:
                                nz = True
                                for j in range(dq):
                                    m[t_off + i2 * dq + j][off + i * dq + j] += v
            # (-1)^p id ox d_b : (p, q) -> (p, q+1)
            if b.dim(q + 1):
                db = b.d(q)
                t_off = block_offset(n + 1, p, q + 1)
                if t_off is not None:
                    sign = -1 if p % 2 else 1
                    dq1 = b.dim(q + 1)
                    for j2 in range(dq1):
                        for j in range(dq):
                            v = db[j2][j]
                            if v:
                                nz = True
                                for i in range(dp):
                                    m[t_off + i * dq1 + j2][off + i * dq + j] += sign * v
        if nz:
            diff[n] = m
    return Complex(dims, diff)


class ChainMap:
    """Degreewise map f : A -> B commuting with differentials."""

    def __init__(self, src: Complex, dst: Complex, comps: Mapping[int, Matrix]):
        self.src = src
        self.dst = dst
        self.comps: Dict[int, Matrix] = {
            k: [list(r) for r in m] for k, m in comps.items() if m and not mat_is_zero(m)
        }

    def comp(self, k: int) -> Matrix:
        m = self.comps.get(k)
        if m is None:
            return zero_matrix(self.dst.dim(k), self.src.dim(k))
        return m

    def validate(self) -> None:
        for k in set(self.src.dims) | set(self.dst.dims):
            m = self.comps.get(k)
            if m is not None:
                if len(m) != self.dst.dim(k) or (m and len(m[0]) != self.src.dim(k)):
                    raise ValueError("chain map shape mismatch at degree %d" % k)
        for k in set(self.src.dims):
            if not self.src.dim(k):
                continue
            left = matmul(self.dst.d(k), self.comp(k)) if self.dst.dim(k + 1) else []
            right = (
                matmul(self.comp(k + 1), self.src.d(k)) if self.dst.dim(k + 1) else []
            )
            if left and right:
                if not mat_is_zero(mat_add(left, mat_scale(-1, right))):
                    raise ValueError("not a chain map at degree %d" % k)
            elif left and not mat_is_zero(left):
                raise ValueError("not a chain map at degree %d" % k)
            elif right and not mat_is_zero(right):
                raise ValueError("not a chain map at degree %d" % k)

    def induced_cohomology_ranks(self) -> Dict[int, int]:
        """Rank of H^k(f) for each degree (zero ranks omitted)."""
        out = {}
        for k in sorted(set(self.src.dims) | set(self.dst.dims)):
            if not self.src.dim(k) or not self.dst.dim(k):
                continue
            # cycles in A^k
            za = nullspace(self.src.d(k) if self.src.dim(k + 1) else [], self.src.dim(k))
            if not za:
                continue
            fz = [
                [sum(Fraction(self.comp(k)[i][j]) * z[j] for j in range(self.src.dim(k)))
                 for z in za]
                for i in range(self.dst.dim(k))
            ]  # dst.dim(k) x len(za)
            bb = self.dst.d(k - 1) if self.dst.dim(k - 1) else []
            bb_cols = (
                [[bb[i][j] for j in range(self.dst.dim(k - 1))] for i in range(self.dst.dim(k))]
                if bb
                else [[] for _ in range(self.dst.dim(k))]
            )
            combined = [fz[i] + bb_cols[i] for i in range(self.dst.dim(k))]
            rk = exact_rank(combined) - (exact_rank(bb_cols) if bb else 0)
            if rk:
                out[k] = rk
        return out

    @staticmethod
    def zero(src: Complex, dst: Complex) -> "ChainMap":
        return ChainMap(src, dst, {})

    @staticmethod
    def identity(c: Complex) -> "ChainMap":
        comps = {
            k: [[1 if i == j else 0 for j in range(v)] for i in range(v)]
            for k, v in c.dims.items()
        }
        return ChainMap(c, c, comps)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self . other (other first)."""
        comps = {}
        for k in set(self.comps) | set(other.comps):
            if self.dst.dim(k) and other.src.dim(k) and self.src.dim(k):
                comps[k] = matmul(self.comp(k), other.comp(k))
        return ChainMap(other.src, self.dst, comps)

    def shift(self, s: int) -> "ChainMap":
        return ChainMap(
            self.src.shift(s),
            self.dst.shift(s),
            {k - s: m for k, m in self.comps.items()},
        )

    def tensor(self, other: "ChainMap") -> "ChainMap":
        """Degree-0 maps only: (f ox g)(a ox b) = f(a) ox g(b)."""
        src = tensor(self.src, other.src)
        dst = tensor(self.dst, other.dst)

        def layout(c: Complex, x: Complex, n):
            # replicate tensor() layout
            blocks = []
            off = 0
            pairs = sorted(
                (p, q) for p in c.dims for q in x.dims if p + q == n
            )
            for p, q in pairs:
                blocks.append((p, q, off))
                off += c.dim(p) * x.dim(q)
            return blocks

        comps = {}
        for n in src.dims:
            if not dst.dim(n):
                continue
            m = zero_matrix(dst.dim(n), src.dim(n))
            nz = False
            sblocks = layout(self.src, other.src, n)
            dblocks = {(p, q): off for p, q, off in layout(self.dst, other.dst, n)}
            for p, q, soff in sblocks:
                if (p, q) not in dblocks:
                    continue
                doff = dblocks[(p, q)]
                f = self.comp(p)
                g = other.comp(q)
                dpd, dqd = self.dst.dim(p), other.dst.dim(q)
                dps, dqs = self.src.dim(p), other.src.dim(q)
                for i2 in range(dpd):
                    for j2 in range(dqd):
                        for i in range(dps):
                            if f[i2][i]:
                                for j in range(dqs):
                                    if g[j2][j]:
                                        nz = True
                                        m[doff + i2 * dqd + j2][soff + i * dqs + j] += (
                                            f[i2][i] * g[j2][j]
                                        )
            if nz:
                comps[n] = m
        return ChainMap(src, dst, comps)


def cone(f: ChainMap) -> Complex:
    """Mapping cone: C^k = A^{k+1} (+) B^k, d = [[-dA, 0], [f, dB]]."""
    a, b = f.src, f.dst
    dims: Dict[int, int] = {}
    for k, v in a.dims.items():
        dims[k - 1] = dims.get(k - 1, 0) + v
    for k, v in b.dims.items():
        dims[k] = dims.get(k, 0) + v
    out = Complex(dims)
    diff: Dict[int, Matrix] = {}
    for k in dims:
        if not out.dim(k + 1):
            continue
        m = zero_matrix(out.dim(k + 1), out.dim(k))
        # source layout at degree k: [A^{k+1} | B^k]; target: [A^{k+2} | B^{k+1}]
        a_src, b_src = a.dim(k + 1), b.dim(k)
        a_tgt = a.dim(k + 2)
        da = a.d(k + 1)
        for i in range(a_tgt):
            for j in range(a_src):
                if da[i][j]:
                    m[i][j] = -da[i][j]
        fk = f.comp(k + 1)
        for i in range(b.dim(k + 1)):
            for j in range(a_src):
                if fk[i][j]:
                    m[a_tgt + i][j] = fk[i][j]
        db = b.d(k)
        for i in range(b.dim(k + 1)):
            for j in range(b_src):
                if db[i][j]:
                    m[a_tgt + i][a_src + j] = db[i][j]
        if not mat_is_zero(m):
            diff[k] = m
    return Complex(dims, diff)
