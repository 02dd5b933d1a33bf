"""Static SVG rendering of phase curves, no plotting dependency.

Fixed 800x600 viewport: success rate on y (0..1), sparsity k on x, one
polyline per (algorithm, r) curve, optional dashed vertical lines at the
deterministic bounds.
"""

from __future__ import annotations

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 40, 60

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(curves, show_bounds: bool = False, title: str = "Recovery rate vs sparsity") -> str:
    """Render phase curves to a self-contained SVG document string."""
    if not curves:
        raise ValueError("need at least one curve")

    ks = [p.k for c in curves for p in c.points]
    if show_bounds:  # keep every bound line inside the plot
        ks += [p.bound_k for c in curves for p in c.points]
    k_min, k_max = min(ks), max(ks)
    if k_min == k_max:
        k_min, k_max = k_min - 1, k_max + 1
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(k):
        return MARGIN_L + (k - k_min) / (k_max - k_min) * plot_w

    def sy(rate):
        return MARGIN_T + (1.0 - rate) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{_esc(title)}</text>',
    ]

    # Gridlines and y labels at 0, 0.25, ..., 1.
    for i in range(5):
        rate = i / 4
        y = sy(rate)
        parts.append(
            f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" y2="{y:.1f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="12" '
            f'font-family="sans-serif">{rate:.2f}</text>'
        )
    # X ticks at integer k.
    step = max(1, (k_max - k_min) // 10)
    for k in range(k_min, k_max + 1, step):
        x = sx(k)
        parts.append(
            f'<line x1="{x:.1f}" y1="{sy(0):.1f}" x2="{x:.1f}" y2="{sy(0) + 5:.1f}" '
            f'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{sy(0) + 20:.1f}" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif">{k}</text>'
        )
    # Axes.
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{sy(1):.1f}" x2="{MARGIN_L}" y2="{sy(0):.1f}" '
        f'stroke="black" stroke-width="1.5"/>'
    )
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{sy(0):.1f}" x2="{WIDTH - MARGIN_R}" y2="{sy(0):.1f}" '
        f'stroke="black" stroke-width="1.5"/>'
    )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">sparsity k</text>'
    )
    parts.append(
        f'<text x="20" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 20 {MARGIN_T + plot_h / 2:.1f})">'
        f'success rate</text>'
    )

    if show_bounds:
        seen = set()
        for idx, c in enumerate(curves):
            color = PALETTE[idx % len(PALETTE)]
            for p in c.points:
                if p.bound_k in seen:
                    continue
                seen.add(p.bound_k)
                x = sx(p.bound_k)
                parts.append(
                    f'<line x1="{x:.1f}" y1="{sy(1):.1f}" x2="{x:.1f}" y2="{sy(0):.1f}" '
                    f'stroke="{color}" stroke-width="1.5" stroke-dasharray="6,4"/>'
                )

    for idx, c in enumerate(curves):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{sx(p.k):.1f},{sy(p.rate):.1f}" for p in sorted(c.points, key=lambda p: p.k))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        # Legend entry.
        ly = MARGIN_T + 18 * idx + 10
        lx = WIDTH - MARGIN_R + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 30}" y="{ly + 4}" font-size="12" font-family="sans-serif">'
            f'{_esc(c.algorithm)} r={c.r}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts)
