"""Deterministic matplotlib figure export for skeleton and report data.

All renders pin the SVG hash salt, drop date metadata, and use fixed
viewports so identical inputs produce identical bytes.
"""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrow

from .fans import Skeleton

_SVG_SETTINGS = {"svg.hashsalt": "torcc", "svg.fonttype": "none"}


def _apply_settings():
    for k, v in _SVG_SETTINGS.items():
        matplotlib.rcParams[k] = v


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_skeleton_svg(skeleton: Skeleton, path: str) -> None:
    """Draw the base arrangement on a fundamental cell with conormal glyphs.

    Supported for rank 1 and 2 only.
    """
    if skeleton.n > 2:
        raise ValueError("skeleton figures are limited to rank <= 2")
    _apply_settings()
    if skeleton.n == 1:
        _render_rank1(skeleton, path)
    else:
        _render_rank2(skeleton, path)


def _render_rank1(skeleton: Skeleton, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 1.6), dpi=100)
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.6, 0.6)
    ax.axhline(0, color="0.3", lw=1.2)
    ax.set_yticks([])
    ax.set_xticks([0, 1])
    for cell in skeleton.cells:
        if not cell.sigma_rays:
            continue
        x = float(Fraction(*_parse_frac(cell.chi[0])))
        ax.plot([x], [0], marker="o", color="black", ms=5)
        for ray in cell.neg_cone_rays:
            dy = 0.35 if ray[0] > 0 else -0.35
            ax.add_patch(
                FancyArrow(x, 0, 0, dy, width=0.002, head_width=0.02, color="tab:red")
            )
    ax.set_title("conic cells over the fundamental interval", fontsize=9)
    _save(fig, path)


def _parse_frac(x) -> tuple:
    f = Fraction(x) if not isinstance(x, str) else Fraction(x)
    return (f.numerator, f.denominator)


def _unit_square_segments(point, direction):
    """Segments of the translated line {point + t dir} inside [0,1]^2, all wraps."""
    segs = []
    px, py = Fraction(point[0]), Fraction(point[1])
    dx, dy = Fraction(direction[0]), Fraction(direction[1])
    for ox in range(-2, 3):
        for oy in range(-2, 3):
            bx, by = px + ox, py + oy
            t_lo, t_hi = None, None
            ok = True
            for b, d in ((bx, dx), (by, dy)):
                if d == 0:
                    if not (0 <= b <= 1):
                        ok = False
                        break
                    continue
                lo, hi = (0 - b) / d, (1 - b) / d
                if lo > hi:
                    lo, hi = hi, lo
                t_lo = lo if t_lo is None else max(t_lo, lo)
                t_hi = hi if t_hi is None else min(t_hi, hi)
            if not ok or t_lo is None or t_lo >= t_hi:
                continue
            segs.append(
                (
                    (float(bx + t_lo * dx), float(by + t_lo * dy)),
                    (float(bx + t_hi * dx), float(by + t_hi * dy)),
                )
            )
    return sorted(set(segs))


def _render_rank2(skeleton: Skeleton, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 6), dpi=100)
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.05, 1.05)
    ax.set_aspect("equal")
    ax.add_patch(
        plt.Rectangle((0, 0), 1, 1, fill=True, color="0.95", zorder=0)
    )
    ax.set_xticks([0, 1])
    ax.set_yticks([0, 1])
    glyph_scale = 0.08
    for cell in skeleton.cells:
        chi = tuple(Fraction(x) for x in cell.chi)
        dim = len(cell.sigma_rays)
        if dim == 0:
            continue
        if cell.perp_basis:
            direction = cell.perp_basis[0]
            for (x0, y0), (x1, y1) in _unit_square_segments(chi, direction):
                ax.plot([x0, x1], [y0, y1], color="0.4", lw=1.0, zorder=1)
            mid = (
                float(chi[0]) % 1.0,
                float(chi[1]) % 1.0,
            )
        else:
            mid = (float(chi[0]) % 1.0, float(chi[1]) % 1.0)
            ax.plot([mid[0]], [mid[1]], marker="o", ms=5, color="black", zorder=3)
        for ray in cell.neg_cone_rays:
            norm = max(abs(ray[0]), abs(ray[1]), 1)
            ax.add_patch(
                FancyArrow(
                    mid[0],
                    mid[1],
                    glyph_scale * ray[0] / norm,
                    glyph_scale * ray[1] / norm,
                    width=0.001,
                    head_width=0.02,
                    color="tab:red",
                    zorder=4,
                )
            )
    ax.set_title("conic cells over the fundamental square", fontsize=9)
    _save(fig, path)


def render_report_figure(report_dict: dict, path: str) -> None:
    """One bar per check, green for pass, red otherwise."""
    _apply_settings()
    checks = sorted(report_dict.get("checks", {}))
    status = [report_dict["checks"][c]["status"] for c in checks]
    fig, ax = plt.subplots(figsize=(6, max(1.5, 0.4 * len(checks) + 0.8)), dpi=100)
    ys = list(range(len(checks)))
    colors = ["tab:green" if s == "pass" else "tab:red" for s in status]
    ax.barh(ys, [1] * len(checks), color=colors)
    ax.set_yticks(ys)
    ax.set_yticklabels(checks, fontsize=8)
    ax.set_xticks([])
    ax.set_xlim(0, 1.3)
    for y, s in zip(ys, status):
        ax.text(1.05, y, s, va="center", fontsize=8)
    ax.set_title("verification checks", fontsize=10)
    fig.tight_layout()
    _save(fig, path)
