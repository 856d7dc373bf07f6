"""Fourier-Motzkin elimination over Q with strict/non-strict tracking.

A linear condition is a triple ``(coeffs, strict, rhs)`` encoding
``coeffs . x < rhs`` when ``strict`` else ``coeffs . x <= rhs``.
Equalities are encoded as two opposite non-strict rows.  All arithmetic is
exact; rows are renormalised to primitive integer form after every
combination step to limit coefficient growth.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Row = tuple[tuple, bool, object]  # (coeffs, strict, rhs)


def normalize_row(coeffs: Sequence, strict: bool, rhs) -> Row:
    co = [Fraction(c) for c in coeffs]
    r = Fraction(rhs)
    den = 1
    for c in co + [r]:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in co]
    ri = int(r * den)
    g = 0
    for v in ints + [ri]:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
        ri //= g
    return (tuple(ints), bool(strict), ri)


def make_le(coeffs, rhs, strict=False) -> Row:
    return normalize_row(coeffs, strict, rhs)


def make_ge(coeffs, rhs, strict=False) -> Row:
    return normalize_row([-c for c in coeffs], strict, -Fraction(rhs))


def make_eq(coeffs, rhs) -> list[Row]:
    return [make_le(coeffs, rhs), make_ge(coeffs, rhs)]


def _combine(pos: Row, neg: Row, j: int) -> Row:
    """Eliminate variable j from pos (coeff_j > 0) and neg (coeff_j < 0)."""
    cp, sp, rp = pos
    cn, sn, rn = neg
    a = cp[j]
    b = -cn[j]
    coeffs = [b * x + a * y for x, y in zip(cp, cn)]
    rhs = b * rp + a * rn
    return normalize_row(coeffs, sp or sn, rhs)


def eliminate(rows: Iterable[Row], j: int) -> list[Row]:
    pos, neg, zero = [], [], []
    for row in rows:
        c = row[0][j]
        if c > 0:
            pos.append(row)
        elif c < 0:
            neg.append(row)
        else:
            zero.append(row)
    out = list(zero)
    seen = set(out)
    for p in pos:
        for q in neg:
            r = _combine(p, q, j)
            if all(c == 0 for c in r[0]):
                # ground truth row: keep only if informative (contradiction)
                if r[2] < 0 or (r[1] and r[2] == 0):
                    return [r]  # infeasible marker
                continue
            if r not in seen:
                seen.add(r)
                out.append(r)
    return out


def _ground_contradiction(rows: Iterable[Row]) -> bool:
    for coeffs, strict, rhs in rows:
        if all(c == 0 for c in coeffs):
            if rhs < 0 or (strict and rhs == 0):
                return True
    return False


def feasible(rows: Sequence[Row], nvars: int) -> bool:
    rows = [normalize_row(*r) for r in rows]
    if _ground_contradiction(rows):
        return False
    for j in range(nvars):
        rows = eliminate(rows, j)
        if _ground_contradiction(rows):
            return False
    return True


def witness(rows: Sequence[Row], nvars: int) -> tuple[Fraction, ...] | None:
    """A rational point satisfying all rows, or None."""
    rows = [normalize_row(*r) for r in rows]
    if _ground_contradiction(rows):
        return None
    stages = [rows]
    for j in range(nvars - 1, -1, -1):
        nxt = eliminate(stages[-1], j)
        if _ground_contradiction(nxt):
            return None
        stages.append(nxt)
    # stages[k] has variables 0..nvars-1-k alive; back-substitute from x_0 up.
    point: list[Fraction] = []
    for j in range(nvars):
        sys_j = stages[nvars - 1 - j]  # variables 0..j alive
        lo, lo_strict = None, False
        hi, hi_strict = None, False
        for coeffs, strict, rhs in sys_j:
            cj = coeffs[j]
            if cj == 0:
                continue
            # coeffs[0..j-1] already fixed
            rest = sum(Fraction(c) * point[i] for i, c in enumerate(coeffs[:j]))
            bound = (Fraction(rhs) - rest) / cj
            if cj > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
            else:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
        if lo is None and hi is None:
            point.append(Fraction(0))
        elif lo is None:
            point.append(hi - 1)
        elif hi is None:
            point.append(lo + 1)
        else:
            if lo > hi or (lo == hi and (lo_strict or hi_strict)):
                return None
            if lo == hi:
                point.append(lo)
            else:
                point.append((lo + hi) / 2)
    # Fourier-Motzkin projection is exact, so the point must satisfy everything.
    for coeffs, strict, rhs in rows:
        val = sum(Fraction(c) * point[i] for i, c in enumerate(coeffs))
        if val > rhs or (strict and val == rhs):
            raise AssertionError("back-substitution produced an infeasible point")
    return tuple(point)


def project(rows: Sequence[Row], nvars: int, keep: Sequence[int]) -> list[Row]:
    """Eliminate all variables not in ``keep``; reindex output to keep-order."""
    rows = [normalize_row(*r) for r in rows]
    drop = [j for j in range(nvars) if j not in keep]
    for j in drop:
        rows = eliminate(rows, j)
    out = []
    seen = set()
    for coeffs, strict, rhs in rows:
        nc = tuple(coeffs[j] for j in keep)
        r = normalize_row(nc, strict, rhs)
        if any(c != 0 for c in r[0]) and r not in seen:
            seen.add(r)
            out.append(r)
    return out


def implied(rows: Sequence[Row], row: Row, nvars: int) -> bool:
    """Does ``rows`` imply ``row``?  Exact, via infeasibility of the negation."""
    coeffs, strict, rhs = normalize_row(*row)
    # negation of (a.x < rhs) is (a.x >= rhs); of (a.x <= rhs) is (a.x > rhs)
    neg = normalize_row([-c for c in coeffs], not strict, -Fraction(rhs))
    return not feasible(list(rows) + [neg], nvars)


def prune(rows: Sequence[Row], nvars: int) -> list[Row]:
    """Remove duplicate and redundant rows (exact)."""
    uniq = []
    seen = set()
    for r in rows:
        rn = normalize_row(*r)
        if rn not in seen:
            seen.add(rn)
            uniq.append(rn)
    out = list(uniq)
    i = 0
    while i < len(out):
        rest = out[:i] + out[i + 1:]
        if rest and implied(rest, out[i], nvars):
            out = rest
        else:
            i += 1
    return out
