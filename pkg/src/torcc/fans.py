"""Fans, stacky fans, per-cone character lattices, and the conic skeleton.

A stacky fan is a lattice map ``beta : L -> N`` with finite cokernel plus a
fan in L_R whose cones map isomorphically (as a poset) onto a fan in N_R.
For every base cone the module computes the fractional character lattice,
its coset group modulo the dual lattice M, and the finite chart stabilizer,
all by Smith normal form.  The skeleton collects, per cone and coset, the
translated conormal data used on the constructible side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cones import Cone
from .intlinalg import (
    FiniteAbelianGroup,
    kernel_basis,
    mat_mul,
    mat_vec,
    primitive,
    rank_rational,
    saturate,
    smith_normal_form,
    solve_rational,
    transpose,
)


class Fan:
    """Finite fan: strictly convex rational cones closed under faces."""

    def __init__(self, n: int, cones: Sequence[Cone]):
        self.n = n
        self._by_key = {}
        for c in cones:
            if c.n != n:
                raise ValueError("ambient rank mismatch")
            self._by_key.setdefault(c.key(), c)
        self.cones = sorted(self._by_key.values(), key=lambda c: (c.dim(), c.key()))

    @classmethod
    def from_cones(cls, n: int, generators: Sequence[Cone]) -> "Fan":
        all_cones = {}
        for c in generators:
            for f in c.faces():
                all_cones.setdefault(f.key(), f)
        fan = cls(n, list(all_cones.values()))
        fan.validate()
        return fan

    def validate(self) -> None:
        for c in self.cones:
            if not c.is_strictly_convex():
                raise ValueError("fan cones must be strictly convex: %r" % (c,))
            for f in c.faces():
                if f.key() not in self._by_key:
                    raise ValueError("fan not closed under faces at %r" % (c,))
        for i, c in enumerate(self.cones):
            for d in self.cones[i + 1 :]:
                inter = c.intersection(d)
                if not (inter.is_face_of(c) and inter.is_face_of(d)):
                    raise ValueError(
                        "intersection of %r and %r is not a common face" % (c, d)
                    )

    def __contains__(self, cone: Cone) -> bool:
        return cone.key() in self._by_key

    def cones_of_dim(self, d: int) -> list[Cone]:
        return [c for c in self.cones if c.dim() == d]

    def maximal_cones(self) -> list[Cone]:
        if getattr(self, "_maximal", None) is None:
            out = []
            for c in self.cones:
                if not any(
                    c.key() != d.key() and c.is_face_of(d) for d in self.cones
                ):
                    out.append(c)
            self._maximal = out
        return self._maximal

    def dim(self) -> int:
        return max((c.dim() for c in self.cones), default=0)

    def support_contains(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self.cones)

    def is_smooth(self) -> bool:
        return all(c.is_smooth() for c in self.cones)

    def is_simplicial(self) -> bool:
        return all(c.is_simplicial() for c in self.cones)

    def is_complete(self) -> bool:
        """Support covers N_R: facet-sharing criterion plus exact ray shooting."""
        if self.n == 0:
            return True
        maxc = self.maximal_cones()
        if not maxc or any(c.dim() != self.n for c in maxc):
            return False
        # every facet of a maximal cone must be a facet of exactly one other
        facet_count: dict = {}
        for c in maxc:
            for f in c.facets():
                facet_count[f.key()] = facet_count.get(f.key(), 0) + 1
        if any(v != 2 for v in facet_count.values()):
            return False
        bound = 3 * max(
            (abs(x) for c in maxc for g in c.rays for x in g), default=1
        )
        for direction in _primitive_directions(self.n, bound):
            if not self.support_contains(direction):
                return False
        return True

    def __repr__(self) -> str:
        return "Fan(n=%d, %d cones)" % (self.n, len(self.cones))


def _primitive_directions(n: int, bound: int):
    from math import gcd

    def rec(prefix):
        if len(prefix) == n:
            g = 0
            for v in prefix:
                g = gcd(g, abs(v))
            if g == 1:
                yield tuple(prefix)
            return
        for v in range(-bound, bound + 1):
            yield from rec(prefix + [v])

    yield from rec([])


def star_subdivision(fan: Fan, sigma: Cone) -> Fan:
    """Insert the ray through the sum of primitive generators of ``sigma``.

    ``sigma`` must be a maximal cone of dimension >= 2; the result refines
    the input fan and has the same support.
    """
    if sigma not in fan:
        raise ValueError("cone is not in the fan")
    if sigma.dim() < 2:
        raise ValueError("star subdivision needs a cone of dimension >= 2")
    maxc = fan.maximal_cones()
    if sigma.key() not in {c.key() for c in maxc}:
        raise ValueError("cone to subdivide must be maximal")
    total = [0] * fan.n
    for g in sigma.rays:
        total = [a + b for a, b in zip(total, g)]
    rho = primitive(total)
    new_cones = []
    for f in sigma.facets():
        new_cones.append(Cone.from_rays(fan.n, list(f.rays) + [rho]))
    keep = [c for c in maxc if c.key() != sigma.key()]
    out = Fan.from_cones(fan.n, keep + new_cones)
    return out


@dataclass(frozen=True)
class MSigmaData:
    """Fractional character lattice of a cone and its coset group modulo M."""

    sigma_key: tuple
    matrix: tuple                      # rows of the quotient-composed dual map
    lattice_basis: tuple               # full-rank companion lattice in Q^n
    group: FiniteAbelianGroup          # coset group M_{sigma,beta} / M
    _snf_v: tuple = field(repr=False, default=())
    _snf_diag: tuple = field(repr=False, default=())
    _positions: tuple = field(repr=False, default=())

    def coset_of(self, chi: Sequence) -> tuple[int, ...]:
        """Coset of a fractional character (must lie in the lattice + perp)."""
        n = len(self.lattice_basis[0]) if self.lattice_basis else len(chi)
        v = [list(r) for r in self._snf_v]
        vin = _invert_unimodular(v)
        y = [sum(Fraction(vin[i][j]) * Fraction(chi[j]) for j in range(n))
             for i in range(n)]
        out = []
        for pos in self._positions:
            d = self._snf_diag[pos]
            val = y[pos] * d
            if val.denominator != 1:
                raise ValueError("vector is not in the fractional lattice")
            out.append(int(val) % d)
        return tuple(out)

    def rep_of(self, coset: Sequence[int]) -> tuple[Fraction, ...]:
        """Canonical representative in the half-open cell [0,1)^n."""
        self.group._check(tuple(coset))
        n = len(self._snf_v)
        y = [Fraction(0)] * n
        for a, pos in zip(coset, self._positions):
            y[pos] = Fraction(a, self._snf_diag[pos])
        v = [list(r) for r in self._snf_v]
        chi = [sum(Fraction(v[i][j]) * y[j] for j in range(n)) for i in range(n)]
        return tuple(x - (x.numerator // x.denominator) for x in chi)

    def representatives(self) -> list[tuple[Fraction, ...]]:
        return [self.rep_of(e) for e in self.group.elements()]


def _invert_unimodular(v):
    n = len(v)
    cols = []
    for j in range(n):
        e = [Fraction(1 if i == j else 0) for i in range(n)]
        sol = solve_rational(v, e)
        cols.append(sol)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass
class ValidationIssue:
    clause: str
    detail: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue]

    @property
    def valid(self) -> bool:
        return not self.issues

    def first_issue(self) -> Optional[ValidationIssue]:
        return self.issues[0] if self.issues else None

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "issues": [
                {"clause": i.clause, "detail": i.detail} for i in self.issues
            ],
        }


class StackyFan:
    """Pair of fans linked by a finite-cokernel lattice map.

    ``beta`` is an ``n x l`` integer matrix mapping L = Z^l to N = Z^n; the
    fan upstairs lives in L_R and its image fan downstairs is derived,
    never supplied.  Construction does not validate; call
    :meth:`validate_condition` (the CLI does).
    """

    def __init__(self, beta: Sequence[Sequence[int]], fan_hat: Fan):
        self.beta = [list(map(int, row)) for row in beta]
        self.n_rank = len(self.beta)
        self.l_rank = len(self.beta[0]) if self.beta else 0
        self.fan_hat = fan_hat
        self._hat_to_base: dict = {}
        self._base_to_hat: dict = {}
        base_cones = []
        for c in fan_hat.cones:
            img = self.image_cone(c)
            self._hat_to_base[c.key()] = img
            self._base_to_hat.setdefault(img.key(), c)
            base_cones.append(img)
        self.fan = Fan(self.n_rank, base_cones)
        self._msigma_cache: dict = {}

    @classmethod
    def from_json_dict(cls, data: dict) -> "StackyFan":
        for key in ("n_rank", "l_rank", "beta", "rays_hat", "cones_hat"):
            if key not in data:
                raise ValueError("missing field %r in stacky fan input" % key)
        n, l = int(data["n_rank"]), int(data["l_rank"])
        beta = data["beta"]
        if len(beta) != n or any(len(r) != l for r in beta):
            raise ValueError("beta must be an n_rank x l_rank matrix")
        rays = [tuple(map(int, r)) for r in data["rays_hat"]]
        if any(len(r) != l for r in rays):
            raise ValueError("rays_hat entries must have length l_rank")
        cones = []
        for idxs in data["cones_hat"]:
            try:
                gens = [rays[i] for i in idxs]
            except (IndexError, TypeError) as exc:
                raise ValueError("cones_hat refers to a missing ray") from exc
            cones.append(Cone.from_rays(l, gens))
        if not cones:
            cones = [Cone.zero(l)]
        fan_hat = Fan.from_cones(l, cones)
        return cls(beta, fan_hat)

    def image_cone(self, sigma_hat: Cone) -> Cone:
        return Cone.from_rays(
            self.n_rank, [mat_vec(self.beta, g) for g in sigma_hat.generators]
        )

    def hat_cone(self, sigma: Cone) -> Cone:
        try:
            return self._base_to_hat[sigma.key()]
        except KeyError:
            raise ValueError("cone is not in the base fan") from None

    def base_cone(self, sigma_hat: Cone) -> Cone:
        return self._hat_to_base[sigma_hat.key()]

    # -- Condition 1 -----------------------------------------------------

    def validate_condition(self) -> ValidationReport:
        issues: list[ValidationIssue] = []
        if rank_rational(self.beta) < self.n_rank:
            issues.append(
                ValidationIssue(
                    "finite-cokernel",
                    "beta has rank %d < %d, cokernel is infinite"
                    % (rank_rational(self.beta), self.n_rank),
                )
            )
            return ValidationReport(issues)
        for c in self.fan_hat.cones:
            img = self._hat_to_base[c.key()]
            if img.dim() != c.dim():
                issues.append(
                    ValidationIssue(
                        "dimension-preserved",
                        "cone with rays %s maps to dimension %d"
                        % (list(c.rays), img.dim()),
                    )
                )
                return ValidationReport(issues)
        # injectivity of beta on span(sigma_hat) (equivalent to the above, but
        # checked independently on the lattice level)
        for c in self.fan_hat.cones:
            span = list(c.rays)
            if span:
                imgs = [mat_vec(self.beta, g) for g in span]
                if rank_rational(imgs) < rank_rational(span):
                    issues.append(
                        ValidationIssue(
                            "injective-on-span",
                            "beta drops rank on span of %s" % (list(c.rays),),
                        )
                    )
                    return ValidationReport(issues)
        # images must form a fan
        try:
            self.fan.validate()
        except ValueError as exc:
            issues.append(ValidationIssue("image-fan", str(exc)))
            return ValidationReport(issues)
        # bijectivity of the cone map
        images = {}
        for c in self.fan_hat.cones:
            key = self._hat_to_base[c.key()].key()
            if key in images and images[key] != c.key():
                issues.append(
                    ValidationIssue(
                        "poset-bijection",
                        "cones %s and %s have the same image"
                        % (list(images[key]), list(c.key())),
                    )
                )
                return ValidationReport(issues)
            images[key] = c.key()
        if len(images) != len(self.fan.cones):
            issues.append(
                ValidationIssue("poset-bijection", "image fan has extra cones")
            )
            return ValidationReport(issues)
        # order preserved both ways
        for c in self.fan_hat.cones:
            for d in self.fan_hat.cones:
                down = self._hat_to_base[c.key()].is_face_of(
                    self._hat_to_base[d.key()]
                )
                up = c.is_face_of(d)
                if up != down:
                    issues.append(
                        ValidationIssue(
                            "poset-isomorphism",
                            "face relation of %s <= %s not preserved"
                            % (list(c.rays), list(d.rays)),
                        )
                    )
                    return ValidationReport(issues)
        return ValidationReport(issues)

    # -- character lattices ----------------------------------------------

    def m_sigma(self, sigma: Cone) -> MSigmaData:
        """Fractional character lattice and coset group for a base cone."""
        key = sigma.key()
        if key in self._msigma_cache:
            return self._msigma_cache[key]
        sigma_hat = self.hat_cone(sigma)
        n, l = self.n_rank, self.l_rank
        # quotient projection Q : L^dual -> Z^k with kernel span(sigma_hat)^perp
        perp = kernel_basis([list(g) for g in sigma_hat.generators]) if (
            sigma_hat.generators
        ) else [tuple(r) for r in _std_rows(l)]
        if perp:
            snf = smith_normal_form(transpose([list(p) for p in perp]))
            u = [list(r) for r in snf.U]
            r = len(snf.invariant_factors)
            q = u[r:]
        else:
            q = _std_rows(l)
        a = mat_mul(q, transpose(self.beta))
        k = len(a)
        if k == 0:
            # zero cone: trivial lattice data
            data = MSigmaData(
                sigma_key=key,
                matrix=(),
                lattice_basis=tuple(
                    tuple(Fraction(1 if i == j else 0) for i in range(n))
                    for j in range(n)
                ),
                group=FiniteAbelianGroup(()),
                _snf_v=tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n)),
                _snf_diag=tuple(),
                _positions=tuple(),
            )
            self._msigma_cache[key] = data
            return data
        snf_a = smith_normal_form(a)
        diag = list(snf_a.invariant_factors)
        if len(diag) != k:
            raise ValueError("character-lattice map unexpectedly drops rank")
        v = [list(r) for r in snf_a.V]
        basis = []
        full_diag = diag + [0] * (n - k)
        for j in range(n):
            d = diag[j] if j < k else 1
            col = tuple(Fraction(v[i][j], d) for i in range(n))
            basis.append(col)
        positions = tuple(i for i, d in enumerate(diag) if d > 1)
        group = FiniteAbelianGroup(tuple(diag[i] for i in positions))
        data = MSigmaData(
            sigma_key=key,
            matrix=tuple(tuple(r) for r in a),
            lattice_basis=tuple(basis),
            group=group,
            _snf_v=tuple(tuple(r) for r in v),
            _snf_diag=tuple(full_diag),
            _positions=positions,
        )
        self._msigma_cache[key] = data
        return data

    def h_beta(self, sigma: Cone) -> FiniteAbelianGroup:
        """Finite stabilizer of the chart at ``sigma``.

        Computed as the cokernel of beta restricted to the saturated span
        lattices; its character group matches the coset group of
        :meth:`m_sigma`, which callers cross-check.
        """
        sigma_hat = self.hat_cone(sigma)
        if not sigma_hat.generators:
            return FiniteAbelianGroup(())
        s_hat = saturate([list(g) for g in sigma_hat.generators], self.l_rank)
        s_base = saturate(
            [mat_vec(self.beta, g) for g in sigma_hat.generators], self.n_rank
        )
        # matrix of beta'' in the chosen bases
        cols = []
        base_cols = [[Fraction(s_base[j][i]) for j in range(len(s_base))]
                     for i in range(self.n_rank)]
        for g in s_hat:
            img = mat_vec(self.beta, g)
            sol = solve_rational(base_cols, img)
            if sol is None or any(x.denominator != 1 for x in sol):
                raise ValueError("beta does not respect saturated spans")
            cols.append([int(x) for x in sol])
        mat = transpose(cols)
        snf = smith_normal_form(mat)
        return FiniteAbelianGroup(tuple(f for f in snf.invariant_factors if f > 1))

    def star_subdivide(self, sigma: Cone) -> "StackyFan":
        """Stacky star subdivision along the hat-lift of a base cone."""
        sigma_hat = self.hat_cone(sigma)
        new_hat = star_subdivision(self.fan_hat, sigma_hat)
        return StackyFan(self.beta, new_hat)

    def __repr__(self) -> str:
        return "StackyFan(l=%d, n=%d, %d cones)" % (
            self.l_rank,
            self.n_rank,
            len(self.fan_hat.cones),
        )


def _std_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class SkeletonCell:
    """One conic cell: coset representative, conormal-base subspace, cone factor."""

    sigma_rays: tuple
    coset: tuple
    chi: tuple                 # canonical representative in [0,1)^n
    perp_basis: tuple          # integer basis of sigma^perp in M_R
    neg_cone_rays: tuple       # rays of -sigma in N_R

    def to_dict(self) -> dict:
        return {
            "sigma_rays": [list(r) for r in self.sigma_rays],
            "coset": list(self.coset),
            "chi": [_frac_str(x) for x in self.chi],
            "perp_basis": [list(v) for v in self.perp_basis],
            "neg_cone_rays": [list(r) for r in self.neg_cone_rays],
        }


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


@dataclass
class Skeleton:
    n: int
    cells: list[SkeletonCell]

    def to_dict(self) -> dict:
        return {"n": self.n, "cells": [c.to_dict() for c in self.cells]}


def build_skeleton(sf: StackyFan) -> Skeleton:
    """One cell per (cone, coset): translated conormal subspace times -cone."""
    cells = []
    for sigma in sf.fan.cones:
        data = sf.m_sigma(sigma)
        perp = sigma.span_perp_basis()
        neg = sigma.negate()
        for coset in data.group.elements():
            chi = data.rep_of(coset)
            cells.append(
                SkeletonCell(
                    sigma_rays=sigma.rays,
                    coset=tuple(coset),
                    chi=chi,
                    perp_basis=tuple(tuple(v) for v in perp),
                    neg_cone_rays=neg.rays,
                )
            )
    cells.sort(key=lambda c: (len(c.sigma_rays), c.sigma_rays, c.coset))
    return Skeleton(sf.n_rank, cells)
