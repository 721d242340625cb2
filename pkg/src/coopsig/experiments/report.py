"""Report emission: CSV curves, a standalone SVG chart, and a JSON summary.

Byte-deterministic given identical inputs: rows are sorted, floats use
fixed formats, and the SVG is assembled without timestamps or random ids.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import IoError
from .evaluate import AccuracyCurve, SnrGain

CSV_HEADER = "scheme,n_nodes,snr_db,accuracy,n_test"

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
)

_W, _H = 880, 540
_ML, _MR, _MT, _MB = 70, 250, 40, 60


def _fmt(x: float) -> str:
    return f"{x:g}"


def curves_csv(curves: list[AccuracyCurve]) -> str:
    lines = [CSV_HEADER]
    for curve in sorted(curves, key=lambda c: (c.scheme, c.n_nodes)):
        for snr, acc, n in zip(curve.snr_db, curve.accuracy, curve.n_test):
            lines.append(f"{curve.scheme},{curve.n_nodes},{_fmt(snr)},{acc:.6f},{n}")
    return "\n".join(lines) + "\n"


def _x(snr, lo, hi):
    span = hi - lo or 1.0
    return _ML + (snr - lo) / span * (_W - _ML - _MR)


def _y(acc):
    return _MT + (1.0 - acc) * (_H - _MT - _MB)


def curves_svg(curves: list[AccuracyCurve], title: str) -> str:
    """A standalone SVG line chart: accuracy vs SNR, one series per curve."""
    curves = sorted(curves, key=lambda c: (c.scheme, c.n_nodes))
    lo = min(min(c.snr_db) for c in curves)
    hi = max(max(c.snr_db) for c in curves)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_ML}" y="24" font-size="16">{title}</text>',
    ]
    # gridlines and axis labels
    for i in range(11):
        acc = i / 10.0
        y = _y(acc)
        parts.append(
            f'<line x1="{_ML}" y1="{y:.2f}" x2="{_W - _MR}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{acc:.1f}</text>'
        )
    ticks = sorted({s for c in curves for s in c.snr_db})
    step = max(1, len(ticks) // 11)
    for snr in ticks[::step]:
        x = _x(snr, lo, hi)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_MT}" x2="{x:.2f}" y2="{_H - _MB}" '
            f'stroke="#eeeeee" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_H - _MB + 18}" font-size="11" '
            f'text-anchor="middle">{_fmt(snr)}</text>'
        )
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="#333333"/>'
    )
    parts.append(
        f'<text x="{(_ML + _W - _MR) / 2:.2f}" y="{_H - 16}" font-size="13" '
        f'text-anchor="middle">SNR (dB)</text>'
    )
    parts.append(
        f'<text x="20" y="{(_MT + _H - _MB) / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 20 {(_MT + _H - _MB) / 2:.2f})">accuracy</text>'
    )
    # series
    for k, curve in enumerate(curves):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(
            f"{_x(s, lo, hi):.2f},{_y(a):.2f}" for s, a in zip(curve.snr_db, curve.accuracy)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        ly = _MT + 16 + 18 * k
        lx = _W - _MR + 16
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 28}" y="{ly}" font-size="12">{curve.curve_id}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(
    curves: list[AccuracyCurve],
    gains: list[SnrGain],
    overhead,
    out_dir,
    suite: str,
    meta: dict | None = None,
) -> dict[str, Path]:
    """Write curves.csv, curves.svg, and summary.json into out_dir."""
    if not curves:
        raise ValueError("no curves to report")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {
            "csv": out_dir / "curves.csv",
            "svg": out_dir / "curves.svg",
            "json": out_dir / "summary.json",
        }
        paths["csv"].write_text(curves_csv(curves))
        paths["svg"].write_text(curves_svg(curves, title=f"{suite}: accuracy vs SNR"))
        summary = {
            "suite": suite,
            "meta": meta or {},
            "curves": [c.to_json() for c in sorted(curves, key=lambda c: (c.scheme, c.n_nodes))],
            "gains": [g.to_json() for g in gains],
            "overhead": overhead.to_json() if overhead is not None else None,
        }
        paths["json"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return paths
