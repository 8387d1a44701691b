"""Chart rendering for spectral sequences: deterministic ASCII and
standalone SVG 1.1.

Charts are drawn Adams-style, x = t - s and y = s (filtration grows
upward).  A spot of dimension 1 is a dot, higher dimensions print the
number.  Differentials are listed below the ASCII grid, one arrow per
line, and drawn as arrows in the SVG.
"""

from .errors import InputError


def _resolve_page(ss, page):
    if page in ("infinity", "inf", "oo"):
        return ss.infinity, None
    try:
        r = int(page)
    except (TypeError, ValueError):
        raise InputError(f"unknown page {page!r}")
    pg = ss.page(r)
    return pg, ss.differentials(r)


def _window(page, diff):
    spots = list(page.spots())
    if diff is not None:
        for src in diff.matrices:
            spots.append(src)
            spots.append(diff.target(src))
    if not spots:
        return (0, 0, 0, 0)
    xs = [t - s for (s, t) in spots]
    ys = [s for (s, t) in spots]
    return (min(min(xs), 0), max(max(xs), 0), min(min(ys), 0), max(ys))


def _arrows(page, diff):
    out = []
    if diff is None:
        return out
    for src in sorted(diff.matrices):
        if not diff.is_nonzero_at(src):
            continue
        tgt = diff.target(src)
        out.append(((src[1] - src[0], src[0]), (tgt[1] - tgt[0], tgt[0])))
    return out


def ascii_chart(ss, page="infinity"):
    """One text block: header, grid rows from high filtration down, axis,
    then one `d_r: (x, s) \\-> (x', s')` line per nonzero differential."""
    pg, diff = _resolve_page(ss, page)
    x0, x1, y0, y1 = _window(pg, diff)
    title = f"E_{pg.r}" if page not in ("infinity", "inf", "oo") else "E_inf"
    width = 4
    lines = [f"{title}  (x = t - s, filtration s upward)"]
    for s in range(y1, y0 - 1, -1):
        cells = []
        for x in range(x0, x1 + 1):
            d = pg.dim((s, x + s))
            cells.append("." if d == 0 else ("•" if d == 1 else str(d)))
        lines.append(f"s={s:>2} |" + "".join(c.rjust(width) for c in cells))
    lines.append("     +" + "-" * (width * (x1 - x0 + 1)))
    lines.append("      " + "".join(f"x={x}".rjust(width) for x in range(x0, x1 + 1)))
    arrows = _arrows(pg, diff)
    if arrows:
        lines.append(f"differentials d_{diff.r}:")
        for (xa, sa), (xb, sb) in arrows:
            lines.append(f"  d_{diff.r}: (x={xa}, s={sa}) \\-> (x={xb}, s={sb})")
    return "\n".join(lines) + "\n"


SVG_HEADER = ('<?xml version="1.0" encoding="UTF-8"?>\n'
              '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
              'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n')


def svg_chart(ss, page="infinity", cell=36, margin=42):
    """Standalone SVG 1.1 text for one page of a chart."""
    pg, diff = _resolve_page(ss, page)
    x0, x1, y0, y1 = _window(pg, diff)
    ncols = x1 - x0 + 1
    nrows = y1 - y0 + 1
    w = 2 * margin + ncols * cell
    h = 2 * margin + nrows * cell

    def cx(x):
        return margin + (x - x0) * cell + cell // 2

    def cy(s):
        return h - margin - (s - y0) * cell - cell // 2

    parts = [SVG_HEADER.format(w=w, h=h)]
    parts.append('<defs><marker id="tip" viewBox="0 0 10 10" refX="9" refY="5" '
                 'markerWidth="6" markerHeight="6" orient="auto">'
                 '<path d="M 0 0 L 10 5 L 0 10 z" fill="#c02020"/></marker></defs>\n')
    parts.append(f'<rect width="{w}" height="{h}" fill="white"/>\n')
    # axes
    parts.append(f'<line x1="{margin - 6}" y1="{h - margin}" x2="{w - margin // 2}" '
                 f'y2="{h - margin}" stroke="black" stroke-width="1"/>\n')
    parts.append(f'<line x1="{margin}" y1="{h - margin + 6}" x2="{margin}" '
                 f'y2="{margin // 2}" stroke="black" stroke-width="1"/>\n')
    for x in range(x0, x1 + 1):
        parts.append(f'<text x="{cx(x)}" y="{h - margin + 18}" font-size="11" '
                     f'text-anchor="middle" font-family="monospace">{x}</text>\n')
    for s in range(y0, y1 + 1):
        parts.append(f'<text x="{margin - 14}" y="{cy(s) + 4}" font-size="11" '
                     f'text-anchor="middle" font-family="monospace">{s}</text>\n')
    title = f"E_{pg.r}" if page not in ("infinity", "inf", "oo") else "E_inf"
    parts.append(f'<text x="{margin}" y="{margin // 2}" font-size="13" '
                 f'font-family="monospace">{title}</text>\n')
    for (s, t) in pg.spots():
        x = t - s
        d = pg.dim((s, t))
        parts.append(f'<circle cx="{cx(x)}" cy="{cy(s)}" r="4" fill="black"/>\n')
        if d > 1:
            parts.append(f'<text x="{cx(x) + 7}" y="{cy(s) - 5}" font-size="10" '
                         f'font-family="monospace">{d}</text>\n')
    for (a, b) in _arrows(pg, diff):
        (xa, sa), (xb, sb) = a, b
        parts.append(f'<line x1="{cx(xa)}" y1="{cy(sa)}" x2="{cx(xb)}" y2="{cy(sb)}" '
                     f'stroke="#c02020" stroke-width="1.5" marker-end="url(#tip)"/>\n')
    parts.append("</svg>\n")
    return "".join(parts)


def render_chart(ss, page="infinity", format="ascii"):
    """Render one page as "ascii" or "svg" text; rejects unknown pages."""
    if format == "ascii":
        return ascii_chart(ss, page)
    if format == "svg":
        return svg_chart(ss, page)
    raise InputError(f"unknown chart format {format!r}")


def chart_json(ss):
    """Deterministic JSON document for a whole spectral sequence."""
    def page_doc(pg, diff=None):
        doc = {
            "r": pg.r,
            "entries": [{"s": s, "t": t, "x": t - s, "dim": pg.dim((s, t))}
                        for (s, t) in pg.spots()],
        }
        if diff is not None:
            doc["differentials"] = [
                {"r": diff.r, "from": {"s": s, "t": t},
                 "to": {"s": s + diff.bidegree[0], "t": t + diff.bidegree[1]},
                 "matrix": [[x if isinstance(x, int) else str(x) for x in row]
                            for row in diff.matrices[(s, t)]]}
                for (s, t) in sorted(diff.matrices)
                if diff.is_nonzero_at((s, t))]
        return doc

    return {
        "prime": ss.p,
        "provenance": ss.provenance,
        "pages": [page_doc(pg, diff) for pg, diff in ss.pages],
        "infinity": page_doc(ss.infinity),
        "annotations": ss.annotations,
    }
