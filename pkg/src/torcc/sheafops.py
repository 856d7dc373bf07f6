"""Exact operations on poset sheaves: RHom, convolution, adjoint hom, microsupport.

RHom is computed by the cobar complex over chains of the stratum poset;
convolution pushes the external tensor product along addition using
fiberwise cellular compactly-supported complexes; the adjoint hom is
reduced to convolution through Verdier duality; microsupport tests
microstalks along covector sectors of the local arrangement fan.  All
outputs are chain-level exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from .chains import ChainMap, Complex, cone as chain_cone, tensor as chain_tensor
from .cones import Cone
from .polyhedron import LCPolyhedron
from .sheaves import (
    Assembled,
    PosetSheaf,
    build_filtered_complex,
    build_filtered_map,
    reflect,
    transport,
    translate,
    verdier_dual,
    _refined_strat,
)
from .strata import Hyperplane, Stratification


class PropernessError(ValueError):
    """Fiber support escapes the window; the pushforward would be wrong."""


class StabilityError(ValueError):
    """A window/box boundary contribution is nonzero; enlarge and retry."""


# -- hom complexes -------------------------------------------------------------


def hom_complex(a: Complex, b: Complex) -> Complex:
    """Hom(A, B) with d(phi) = d_B phi - (-1)^m phi d_A.

    Degree-m basis: blocks over p ascending, index i * dim B^{p+m} + j.
    """
    dims: Dict[int, int] = {}
    layout: Dict[int, list] = {}
    for m in _hom_degrees(a, b):
        off = 0
        blocks = []
        for p in sorted(a.dims):
            if b.dim(p + m):
                blocks.append((p, off))
                off += a.dim(p) * b.dim(p + m)
        if off:
            layout[m] = blocks
            dims[m] = off
    cx = Complex(dims)
    diff: Dict[int, list] = {}
    for m, blocks in layout.items():
        if not cx.dim(m + 1):
            continue
        mat = [[0] * cx.dim(m) for _ in range(cx.dim(m + 1))]
        tgt_blocks = dict((p, off) for p, off in layout.get(m + 1, []))
        nz = False
        for p, off in blocks:
            da_cols = a.dim(p)
            db_cols = b.dim(p + m)
            # d_B . phi : block p -> block p at degree m+1
            if p in tgt_blocks and b.dim(p + m + 1):
                toff = tgt_blocks[p]
                db = b.d(p + m)
                for i in range(da_cols):
                    for j2 in range(b.dim(p + m + 1)):
                        for j in range(db_cols):
                            v = db[j2][j]
                            if v:
                                nz = True
                                mat[toff + i * b.dim(p + m + 1) + j2][
                                    off + i * db_cols + j
                                ] += v
            # -(-1)^m phi . d_A : block p -> block p-1 at degree m+1
            if (p - 1) in tgt_blocks and a.dim(p - 1):
                toff = tgt_blocks[p - 1]
                dam = a.d(p - 1)
                sign = -1 if m % 2 == 0 else 1
                for i in range(da_cols):
                    for i2 in range(a.dim(p - 1)):
                        v = dam[i][i2]
                        if v:
                            nz = True
                            for j in range(db_cols):
                                mat[toff + i2 * db_cols + j][
                                    off + i * db_cols + j
                                ] += sign * v
        if nz:
            diff[m] = mat
    return Complex(dims, diff)


def _hom_degrees(a: Complex, b: Complex):
    out = set()
    for p in a.dims:
        for q in b.dims:
            out.add(q - p)
    return sorted(out)


def _hom_layout(a: Complex, b: Complex, m: int):
    off = 0
    blocks = []
    for p in sorted(a.dims):
        if b.dim(p + m):
            blocks.append((p, off))
            off += a.dim(p) * b.dim(p + m)
    return blocks


def hom_postcompose(a: Complex, b: Complex, b2: Complex, g: ChainMap) -> ChainMap:
    """Hom(A, B) -> Hom(A, B2), phi -> g . phi."""
    src = hom_complex(a, b)
    dst = hom_complex(a, b2)
    comps: Dict[int, list] = {}
    for m in src.dims:
        if not dst.dim(m):
            continue
        mat = [[0] * src.dim(m) for _ in range(dst.dim(m))]
        nz = False
        sblocks = _hom_layout(a, b, m)
        dblocks = dict((p, off) for p, off in _hom_layout(a, b2, m))
        for p, soff in sblocks:
            if p not in dblocks:
                continue
            doff = dblocks[p]
            gk = g.comp(p + m)
            for i in range(a.dim(p)):
                for j2 in range(b2.dim(p + m)):
                    for j in range(b.dim(p + m)):
                        v = gk[j2][j]
                        if v:
                            nz = True
                            mat[doff + i * b2.dim(p + m) + j2][
                                soff + i * b.dim(p + m) + j
                            ] += v
        if nz:
            comps[m] = mat
    return ChainMap(src, dst, comps)


def hom_precompose(a2: Complex, a: Complex, b: Complex, f: ChainMap) -> ChainMap:
    """Hom(A, B) -> Hom(A2, B), phi -> phi . f, for f : A2 -> A."""
    src = hom_complex(a, b)
    dst = hom_complex(a2, b)
    comps: Dict[int, list] = {}
    for m in src.dims:
        if not dst.dim(m):
            continue
        mat = [[0] * src.dim(m) for _ in range(dst.dim(m))]
        nz = False
        sblocks = _hom_layout(a, b, m)
        dblocks = dict((p, off) for p, off in _hom_layout(a2, b, m))
        for p, soff in sblocks:
            if p not in dblocks:
                continue
            doff = dblocks[p]
            fk = f.comp(p)
            for i2 in range(a2.dim(p)):
                for i in range(a.dim(p)):
                    v = fk[i][i2]
                    if v:
                        nz = True
                        for j in range(b.dim(p + m)):
                            mat[doff + i2 * b.dim(p + m) + j][
                                soff + i * b.dim(p + m) + j
                            ] += v
        if nz:
            comps[m] = mat
    return ChainMap(src, dst, comps)


# -- RHom via the cobar complex -------------------------------------------------


def _chains_in(strat: Stratification, start_cells, all_cells=None):
    """Strict chains s_0 < ... < s_k beginning in start_cells."""
    chains = []
    universe = range(len(strat.cells)) if all_cells is None else all_cells

    def extend(chain):
        chains.append(tuple(chain))
        last = chain[-1]
        for j in universe:
            if j != last and strat.leq(last, j):
                extend(chain + [j])

    for s in start_cells:
        extend([s])
    return chains


def rhom_assembled(f: PosetSheaf, g: PosetSheaf) -> Assembled:
    if f.strat is not g.strat:
        raise ValueError("rhom needs both sheaves on one stratification")
    strat = f.strat
    fsupp = sorted(f.stalks)
    gsupp = set(g.stalks)
    entries = []
    chain_list = []
    for ch in _chains_in(strat, fsupp):
        if ch[-1] in gsupp:
            hc = hom_complex(f.stalk(ch[0]), g.stalk(ch[-1]))
            if hc.dims:
                entries.append((ch, hc, len(ch) - 1))
                chain_list.append(ch)
    chain_set = set(chain_list)
    arrows = {}
    for tgt in chain_list:
        k1 = len(tgt) - 1
        if k1 == 0:
            continue
        for i in range(k1 + 1):
            face = tgt[:i] + tgt[i + 1 :]
            if face not in chain_set:
                continue
            sign = (-1) ** i
            a_f, b_f = f.stalk(face[0]), g.stalk(face[-1])
            a_t, b_t = f.stalk(tgt[0]), g.stalk(tgt[-1])
            if i == 0:
                cmap = hom_precompose(
                    a_t, a_f, b_f, f.gen_any(tgt[0], tgt[1])
                )
            elif i == k1:
                cmap = hom_postcompose(
                    a_f, b_f, b_t, g.gen_any(tgt[-2], tgt[-1])
                )
            else:
                cmap = ChainMap.identity(hom_complex(a_f, b_f))
            arrows[(face, tgt)] = (sign, cmap)
    return build_filtered_complex(entries, arrows)


def rhom(f: PosetSheaf, g: PosetSheaf) -> Dict[int, int]:
    """Cohomology dimensions of RHom(f, g) over the window."""
    fast = _rhom_fast_path(f, g)
    if fast is not None:
        return fast
    return rhom_assembled(f, g).complex.cohomology()


def _rhom_fast_path(f: PosetSheaf, g: PosetSheaf) -> Optional[Dict[int, int]]:
    """Indicator-vs-indicator shortcuts: disjoint stars, or open subset."""
    fi = getattr(f, "indicator_info", None)
    gi = getattr(g, "indicator_info", None)
    if fi is None or gi is None:
        return None
    fsupp = set(f.stalks)
    gsupp = set(g.stalks)
    if not fsupp or not gsupp:
        return {}
    strat = f.strat
    meets = False
    for i in range(len(strat.cells)):
        up = strat.upset(i)
        if any(j in fsupp for j in up) and any(j in gsupp for j in up):
            meets = True
            break
    if not meets:
        return {}
    poly_f, deg_f = fi
    poly_g, deg_g = gi
    if all(c.rel == ">" for c in poly_f.conditions):
        if fsupp <= gsupp:
            # sections of a rank-one sheaf over a convex open set
            return {deg_g - deg_f: 1}
    return None


def global_sections(f: PosetSheaf) -> Dict[int, int]:
    from .sheaves import constant_sheaf

    return rhom(constant_sheaf(f.strat), f)


def sections_over_cells(f: PosetSheaf, cells: Sequence[int]) -> Assembled:
    """Derived sections over an up-closed union of cells (cobar over the subset)."""
    cellset = sorted(set(cells))
    entries = []
    chain_list = []
    for ch in _chains_in(f.strat, cellset, all_cells=cellset):
        cx = f.stalk(ch[-1])
        if cx.dims:
            entries.append((ch, cx, len(ch) - 1))
            chain_list.append(ch)
    chain_set = set(chain_list)
    arrows = {}
    for tgt in chain_list:
        k1 = len(tgt) - 1
        if k1 == 0:
            continue
        for i in range(k1 + 1):
            face = tgt[:i] + tgt[i + 1 :]
            if face not in chain_set:
                continue
            sign = (-1) ** i
            if i == k1:
                cmap = f.gen_any(tgt[-2], tgt[-1])
            else:
                cmap = ChainMap.identity(f.stalk(face[-1]))
            arrows[(face, tgt)] = (sign, cmap)
    return build_filtered_complex(entries, arrows)


# -- convolution ----------------------------------------------------------------


@dataclass
class _FiberCell:
    fiber_index: int
    a_cell: int
    b_cell: int
    a_signs: tuple
    b_signs: tuple
    fdim: int


@dataclass
class _FiberData:
    strat: Stratification
    cells: list
    assembled: Assembled


def _signs_at(strat: Stratification, x) -> tuple:
    out = []
    for h in strat.hyperplanes:
        v = h.eval_at(x)
        out.append(0 if v == 0 else (1 if v > 0 else -1))
    return tuple(out)


def _support_margin(sheaf: PosetSheaf) -> Fraction:
    """Distance from the support to the window boundary (0 when touching)."""
    from . import fm

    strat = sheaf.strat
    best = None
    for i in sheaf.stalks:
        cell = strat.cells[i]
        rows = []
        for h, s in zip(strat.hyperplanes, cell.signs):
            if s == 0:
                rows.extend(fm.make_eq(h.coeffs, h.rhs))
            elif s > 0:
                rows.append(fm.make_ge(h.coeffs, h.rhs, strict=True))
            else:
                rows.append(fm.make_le(h.coeffs, h.rhs, strict=True))
        for j in range(strat.n):
            shadow = fm.project(
                rows + strat._window_rows(), strat.n, [j]
            )
            hi = None
            lo = None
            for coeffs, strict, rhs in shadow:
                c = coeffs[0]
                if c > 0:
                    b = Fraction(rhs, c)
                    hi = b if hi is None else min(hi, b)
                elif c < 0:
                    b = Fraction(rhs, c)
                    lo = b if lo is None else max(lo, b)
            span = max(abs(hi), abs(lo))
            margin = strat.radius - span
            best = margin if best is None else min(best, margin)
    return strat.radius if best is None else best


def convolve(
    f: PosetSheaf,
    g: PosetSheaf,
    out_radius,
    properness: str = "compact",
) -> PosetSheaf:
    """Additive convolution f * g on the window of the given radius.

    ``properness`` names the witness: "compact" requires one factor's
    support to stay strictly inside its window (checked, and that factor is
    placed along the fibers); "conic" trusts recession-direction stability
    (window cuts behave as infinity), as appropriate for cone-supported
    inputs; callers assert window-doubling stability separately.
    """
    if properness not in ("compact", "conic"):
        raise ValueError("unknown properness witness %r" % properness)
    n = f.strat.n
    out_radius = Fraction(out_radius)
    a, b = f, g
    if properness == "compact":
        if _support_margin(g) > 0:
            a, b = f, g
        elif _support_margin(f) > 0:
            a, b = g, f
        else:
            raise PropernessError(
                "neither factor is compactly supported within its window"
            )
    if properness == "compact":
        extent = b.strat.radius - _support_margin(b)
        fiber_radius = min(b.strat.radius, extent + 1)
    else:
        fiber_radius = min(b.strat.radius, a.strat.radius - out_radius)
    if fiber_radius <= 0:
        raise ValueError("windows leave no room for the fibers")
    if a.strat.radius < out_radius + fiber_radius:
        raise ValueError(
            "outer factor window too small: need radius >= %s"
            % (out_radius + fiber_radius)
        )
    out_strat = _convolution_target_strat(a, b, out_radius)
    fibers: Dict[int, _FiberData] = {}
    stalks: Dict[int, Complex] = {}
    for s in range(len(out_strat.cells)):
        data = _fiber_data(a, b, out_strat.cells[s].witness, fiber_radius)
        if data is not None and data.assembled.complex.dims:
            fibers[s] = data
            stalks[s] = data.assembled.complex
    gens: Dict[tuple, ChainMap] = {}
    for s in fibers:
        for t in out_strat.covers()[s]:
            if t not in fibers:
                continue
            blocks = {}
            fs, ft = fibers[s], fibers[t]
            for fc in fs.cells:
                for fc2 in ft.cells:
                    if fc2.fdim != fc.fdim:
                        continue
                    if not _signs_compatible(fc.a_signs, fc2.a_signs):
                        continue
                    if not _signs_compatible(fc.b_signs, fc2.b_signs):
                        continue
                    cmap = a.gen_any(fc.a_cell, fc2.a_cell).tensor(
                        b.gen_any(fc.b_cell, fc2.b_cell)
                    )
                    blocks[(_entry_id(fc), _entry_id(fc2))] = (1, cmap)
            gens[(s, t)] = build_filtered_map(fs.assembled, ft.assembled, blocks)
    return PosetSheaf(out_strat, stalks, gens)


def _entry_id(fc: _FiberCell):
    return (fc.fiber_index, fc.a_signs, fc.b_signs)


def _signs_compatible(src: tuple, dst: tuple) -> bool:
    return all(x == y or x == 0 for x, y in zip(src, dst))


def _convolution_target_strat(a: PosetSheaf, b: PosetSheaf, out_radius) -> Stratification:
    normals = {h.coeffs for h in a.strat.hyperplanes} | {
        h.coeffs for h in b.strat.hyperplanes
    }
    hyps = set()
    for nrm in normals:
        for c1 in _critical_values(a.strat, nrm):
            for c2 in _critical_values(b.strat, nrm):
                hyps.add(Hyperplane.make(nrm, c1 + c2))
    return _refined_strat(a.strat.n, out_radius, sorted(hyps))


def _critical_values(strat: Stratification, nrm: tuple) -> set:
    """Critical constants of a linear functional on an arrangement.

    Matching-normal hyperplane constants plus values at the 0-cells; 0 is
    always included so sums against a featureless factor stay anchored.
    """
    vals = {Fraction(0)}
    for h in strat.hyperplanes:
        if h.coeffs == nrm:
            vals.add(Fraction(h.rhs))
    for c in strat.cells:
        if c.dim == 0:
            vals.add(
                sum(Fraction(x) * Fraction(y) for x, y in zip(nrm, c.witness))
            )
    return vals


def _fiber_data(
    a: PosetSheaf, b: PosetSheaf, t0, fiber_radius
) -> Optional[_FiberData]:
    """Cellular fiber over t0: y-arrangement of b-hyperplanes and pulled a-hyperplanes."""
    n = a.strat.n
    hyps = list(b.strat.hyperplanes)
    for h in a.strat.hyperplanes:
        # a-condition at (t0 - y): h.coeffs . (t0 - y) = rhs
        shift = sum(Fraction(c) * Fraction(x) for c, x in zip(h.coeffs, t0))
        hyps.append(Hyperplane.make(tuple(-c for c in h.coeffs), Fraction(h.rhs) - shift))
    fstrat = _refined_strat(n, fiber_radius, hyps)
    cells: list[_FiberCell] = []
    entries = []
    arrows = {}
    support_idx = {}
    for c in fstrat.cells:
        pa = tuple(Fraction(x) - Fraction(y) for x, y in zip(t0, c.witness))
        a_cell = a.strat.cell_of_point(pa)
        b_cell = b.strat.cell_of_point(c.witness)
        sa = a.stalk(a_cell)
        sb = b.stalk(b_cell)
        if not sa.dims or not sb.dims:
            continue
        fc = _FiberCell(
            fiber_index=c.index,
            a_cell=a_cell,
            b_cell=b_cell,
            a_signs=_signs_at(a.strat, pa),
            b_signs=_signs_at(b.strat, c.witness),
            fdim=c.dim,
        )
        cells.append(fc)
        support_idx[c.index] = fc
        entries.append((_entry_id(fc), chain_tensor(sa, sb), c.dim))
    if not entries:
        return None
    for idx, fc in support_idx.items():
        for j in fstrat.covers()[idx]:
            if j not in support_idx:
                continue
            fc2 = support_idx[j]
            cmap = a.gen_any(fc.a_cell, fc2.a_cell).tensor(
                b.gen_any(fc.b_cell, fc2.b_cell)
            )
            arrows[(_entry_id(fc), _entry_id(fc2))] = (
                fstrat.incidence(idx, j),
                cmap,
            )
    assembled = build_filtered_complex(entries, arrows)
    return _FiberData(fstrat, cells, assembled)


def skyscraper(strat: Stratification, point) -> PosetSheaf:
    from .sheaves import indicator_sheaf
    from .polyhedron import LinCondition

    conds = []
    for i in range(strat.n):
        e = [0] * strat.n
        e[i] = 1
        conds.append(LinCondition.make(e, "=", point[i]))
    return indicator_sheaf(strat, LCPolyhedron(strat.n, conds))


# -- adjoint hom ----------------------------------------------------------------


def hom_star(f: PosetSheaf, g: PosetSheaf, out_radius) -> PosetSheaf:
    """Right adjoint of convolution, via Verdier duality.

    Hom*(f, g) = D(D(g) * (-1)^* f); f must be compactly supported within
    its window (its reflection rides along the fibers).
    """
    if _support_margin(f) <= 0:
        raise PropernessError("adjoint hom requires a compactly supported first factor")
    dg = verdier_dual(g)
    rf = reflect(f)
    conv = convolve(dg, rf, out_radius, properness="compact")
    return verdier_dual(conv)


# -- microsupport ----------------------------------------------------------------


@dataclass
class SSCell:
    cell: int
    sector_signs: tuple
    sector: Cone
    microstalk: Dict[int, int]


@dataclass
class SSData:
    sheaf: PosetSheaf
    zero_section: list
    cells: list

    def covector_entries(self) -> list:
        return [(c.cell, c.sector) for c in self.cells]

    def closed_entries(self) -> list:
        """Face closure: each entry propagates to boundary strata of its cell."""
        strat = self.sheaf.strat
        seen = {}
        for c in self.cells:
            for s in range(len(strat.cells)):
                if strat.leq(s, c.cell):
                    seen.setdefault((s, c.sector.key()), (s, c.sector))
        return sorted(seen.values(), key=lambda e: (e[0], e[1].key()))


def microsupport(f: PosetSheaf) -> SSData:
    """Microstalk-supported (stratum, covector sector) pairs.

    Convention: the covector xi is detected by sections over the xi-negative
    side, so the indicator of an open half line has nonzero sector -1 at the
    boundary point (matching the -cone factor of conic skeletons).
    """
    strat = f.strat
    n = strat.n
    zero_section = [i for i in sorted(f.stalks) if f.stalk(i).cohomology()]
    out = []
    relevant = set()
    for i in range(len(strat.cells)):
        if any(j in f.stalks for j in strat.upset(i)):
            relevant.add(i)
    for s in sorted(relevant):
        star = strat.upset(s)
        tangents = {}
        for tau in star:
            tangents[tau] = _tangent_cone(strat, s, tau)
        gens = set()
        for c in tangents.values():
            for gvec in c.generators:
                gens.add(gvec)
        central = sorted(
            {Hyperplane.make(gvec, 0) for gvec in gens if any(x != 0 for x in gvec)}
        )
        sector_strat = _refined_strat(n, 1, central)
        for sec in sector_strat.cells:
            xi = sec.witness
            if all(x == 0 for x in xi):
                continue  # the zero covector is the zero-section report
            sub = [
                tau
                for tau in star
                if any(_dot(xi, gvec) < 0 for gvec in tangents[tau].generators)
            ]
            stalk = f.stalk(s)
            if not sub and not stalk.dims:
                continue
            micro = _microstalk(f, s, sub)
            if micro:
                out.append(
                    SSCell(
                        cell=s,
                        sector_signs=sec.signs,
                        sector=_sector_cone(sector_strat, sec),
                        microstalk=micro,
                    )
                )
    return SSData(f, zero_section, out)


def _dot(x, y):
    return sum(Fraction(a) * Fraction(b) for a, b in zip(x, y))


def _tangent_cone(strat: Stratification, s: int, tau: int) -> Cone:
    """Directions from the cell s into the cell tau."""
    rows = []
    ss = strat.cells[s].signs
    ts = strat.cells[tau].signs
    for h, s_sign, t_sign in zip(strat.hyperplanes, ss, ts):
        if s_sign != 0:
            continue
        if t_sign == 0:
            rows.append(h.coeffs)
            rows.append(tuple(-c for c in h.coeffs))
        elif t_sign > 0:
            rows.append(h.coeffs)
        else:
            rows.append(tuple(-c for c in h.coeffs))
    return Cone.from_inequalities(strat.n, rows)


def _sector_cone(sector_strat: Stratification, sec) -> Cone:
    rows = []
    for h, sign in zip(sector_strat.hyperplanes, sec.signs):
        if sign == 0:
            rows.append(h.coeffs)
            rows.append(tuple(-c for c in h.coeffs))
        elif sign > 0:
            rows.append(h.coeffs)
        else:
            rows.append(tuple(-c for c in h.coeffs))
    return Cone.from_inequalities(sector_strat.n, rows)


def _microstalk(f: PosetSheaf, s: int, sub_cells) -> Dict[int, int]:
    """Cone(stalk -> sections over the xi-negative star side), shifted by -1.

    The sub-poset keeps zero-stalk cells: their chains still carry sections
    of the cells above them.
    """
    stalk = f.stalk(s)
    sub = list(sub_cells)
    if not any(c in f.stalks for c in sub):
        # cone(stalk -> 0)[-1] is the stalk itself
        return stalk.cohomology()
    assembled = sections_over_cells(f, sub)
    target = assembled.complex
    comps: Dict[int, list] = {}
    for tau in sub:
        gmap = f.gen_any(s, tau)
        cx = f.stalk(tau)
        for k in stalk.dims:
            if not cx.dim(k):
                continue
            key = ((tau,), k)
            if key not in assembled.offsets:
                continue
            off = assembled.offsets[key]
            m = gmap.comp(k)
            tgt = comps.setdefault(
                k, [[0] * stalk.dim(k) for _ in range(target.dim(k))]
            )
            for r in range(cx.dim(k)):
                for c in range(stalk.dim(k)):
                    if m[r][c]:
                        tgt[off + r][c] += m[r][c]
    aug = ChainMap(stalk, target, comps)
    return chain_cone(aug).shift(-1).cohomology()


# -- torus homs -------------------------------------------------------------------


def torus_hom(
    f: PosetSheaf,
    g: PosetSheaf,
    box_radius: int,
    out_radius,
    require_boundary_vanishing: bool = False,
) -> Dict[tuple, Dict[int, int]]:
    """Per-translation hom table: m -> cohomology dims of RHom(f(-m), g).

    ``f`` must live on a window of radius >= out_radius + box_radius so
    every translate stays evaluable; ``g`` is cropped to out_radius.
    """
    n = f.strat.n
    out_radius = Fraction(out_radius)
    from .sheaves import crop

    g0 = crop(g, out_radius) if g.strat.radius != out_radius else g
    table: Dict[tuple, Dict[int, int]] = {}
    for m in _integer_box(n, box_radius):
        fm_sheaf = translate(f, m, out_radius)
        hyps = list(fm_sheaf.strat.hyperplanes) + list(g0.strat.hyperplanes)
        common = _refined_strat(n, out_radius, hyps)
        dims = rhom(transport(fm_sheaf, common), transport(g0, common))
        if dims:
            table[tuple(int(x) for x in m)] = dims
            if require_boundary_vanishing and max(abs(int(x)) for x in m) == box_radius:
                raise StabilityError(
                    "nonzero hom at translation-box boundary m=%s" % (m,)
                )
    return table


def _integer_box(n: int, radius: int):
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(-radius, radius + 1):
            yield from rec(prefix + [v])

    yield from rec([])
