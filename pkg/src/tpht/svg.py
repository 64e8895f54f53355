"""Tiny static SVG charts: histogram bars, scatter points and polylines."""

from xml.sax.saxutils import escape

W, H, PAD = 640, 420, 50


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi <= xlo:
            xlo, xhi = xlo - 0.5, xhi + 0.5
        if yhi <= ylo:
            ylo, yhi = ylo - 0.5, yhi + 0.5
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def x(self, v):
        return PAD + (v - self.xlo) / (self.xhi - self.xlo) * (W - 2 * PAD)

    def y(self, v):
        return H - PAD - (v - self.ylo) / (self.yhi - self.ylo) * (H - 2 * PAD)


def _axes(fr, title, xlabel, ylabel):
    out = [
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<text x="{W / 2}" y="{PAD / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{H / 2}" font-size="12" transform="rotate(-90 14 {H / 2})" '
        f'text-anchor="middle">{escape(ylabel)}</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv = fr.xlo + frac * (fr.xhi - fr.xlo)
        yv = fr.ylo + frac * (fr.yhi - fr.ylo)
        out.append(f'<text x="{fr.x(xv):.1f}" y="{H - PAD + 16}" text-anchor="middle" font-size="10">{xv:.4g}</text>')
        out.append(f'<text x="{PAD - 4}" y="{fr.y(yv):.1f}" text-anchor="end" font-size="10">{yv:.4g}</text>')
    return out


def _write(path, body):
    doc = f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">\n' + "\n".join(body) + "\n</svg>\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(doc)


def histogram(path, edges, counts, title="", xlabel="", ylabel="count"):
    edges = [float(e) for e in edges]
    counts = [float(c) for c in counts]
    fr = _Frame(edges[0], edges[-1], 0.0, max(counts) if counts else 1.0)
    body = _axes(fr, title, xlabel, ylabel)
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        x0, x1 = fr.x(lo), fr.x(hi)
        y = fr.y(c)
        body.append(
            f'<rect x="{x0:.2f}" y="{y:.2f}" width="{max(x1 - x0, 0.5):.2f}" '
            f'height="{fr.y(0) - y:.2f}" fill="steelblue" stroke="white" stroke-width="0.5"/>'
        )
    _write(path, body)


def scatter(path, xs, ys, title="", xlabel="", ylabel="", curve=None):
    """Points ``(xs, ys)``; ``curve`` is an optional ``(cx, cy)`` polyline drawn in red."""
    allx = list(map(float, xs)) + (list(map(float, curve[0])) if curve else [])
    ally = list(map(float, ys)) + (list(map(float, curve[1])) if curve else [])
    fr = _Frame(min(allx), max(allx), min(ally), max(ally))
    body = _axes(fr, title, xlabel, ylabel)
    if curve:
        pts = " ".join(f"{fr.x(float(a)):.2f},{fr.y(float(b)):.2f}" for a, b in zip(*curve))
        body.append(f'<polyline points="{pts}" fill="none" stroke="red" stroke-width="1"/>')
    for a, b in zip(xs, ys):
        body.append(f'<circle cx="{fr.x(float(a)):.2f}" cy="{fr.y(float(b)):.2f}" r="1.5" fill="black"/>')
    _write(path, body)


def nodes_chart(path, nodes, n, title=""):
    """One row per eigenvector with a tick at each node abscissa in ``[1, n]``."""
    rows = max(len(nodes), 1)
    fr = _Frame(1.0, float(max(n, 2)), 0.0, float(rows))
    body = _axes(fr, title, "t", "eigenvector")
    for k, row in enumerate(nodes):
        yc = fr.y(rows - k - 0.5)
        body.append(f'<line x1="{fr.x(1):.2f}" y1="{yc:.2f}" x2="{fr.x(max(n, 2)):.2f}" y2="{yc:.2f}" stroke="#ccc"/>')
        for t in row:
            body.append(
                f'<line x1="{fr.x(t):.2f}" y1="{yc - 8:.2f}" x2="{fr.x(t):.2f}" y2="{yc + 8:.2f}" stroke="blue" stroke-width="2"/>'
            )
    _write(path, body)
