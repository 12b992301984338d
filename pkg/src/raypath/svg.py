"""SVG snapshots of maps, paths, and search traces.

Hand-rolled SVG 1.1: the scenes are polygons and line segments only, so a
template writer keeps the package free of a rendering dependency.  World
coordinates grow upward; SVG grows downward, so everything is y-flipped
through one transform helper.
"""
from __future__ import annotations

from .environment import ENCLOSURE_ID

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="%d" height="%d" viewBox="0 0 %d %d">\n'
)

_STYLE = {
    "enclosure": 'fill="white" stroke="#303030" stroke-width="%(thin)g"',
    "obstacle": 'fill="#b8b8b8" stroke="#303030" stroke-width="%(thin)g"',
    "scan": (
        'stroke="#4878b0" stroke-width="%(hair)g" '
        'stroke-dasharray="%(hair)g,%(dot)g"'
    ),
    "ray": (
        'stroke="#d07030" stroke-width="%(hair)g" '
        'stroke-dasharray="%(dash)g,%(gap)g"'
    ),
    "path": 'fill="none" stroke="#208040" stroke-width="%(wide)g"',
    "endpoint": 'fill="#208040" stroke="none"',
    "waypoint": 'fill="white" stroke="#208040" stroke-width="%(hair)g"',
}


def render_svg(env, result=None, scale=12, trace=False):
    """Render the environment, and a query result when one is given.

    With ``trace`` true and a result carrying a recorded trace, every ray
    cast is drawn dashed and every swept boundary step dotted, so a render
    shows exactly what one search looked at.
    """
    x0, y0, x1, y1 = env.bbox()
    pad = 1
    width = (x1 - x0 + 2 * pad) * scale
    height = (y1 - y0 + 2 * pad) * scale

    def pt(p):
        return ((p[0] - x0 + pad) * scale, (y1 - p[1] + pad) * scale)

    sizes = {
        "thin": scale * 0.12,
        "hair": scale * 0.08,
        "wide": scale * 0.18,
        "dash": scale * 0.5,
        "gap": scale * 0.3,
        "dot": scale * 0.25,
    }
    style = {k: v % sizes for k, v in _STYLE.items()}
    out = [_HEADER % (width, height, width, height)]
    out.append('<rect width="%d" height="%d" fill="#e8e8e8"/>\n' % (width, height))

    for pid in env.polygon_ids():
        kind = "enclosure" if pid == ENCLOSURE_ID else "obstacle"
        coords = " ".join("%g,%g" % pt(p) for p in env.boundary(pid))
        out.append('<polygon points="%s" %s/>\n' % (coords, style[kind]))

    if result is not None:
        if trace and result.stats.trace is not None:
            for kind, a, b in result.stats.trace:
                if kind != "scan":
                    continue
                out.append(_line(pt(a), pt(b), style["scan"]))
            for kind, a, b in result.stats.trace:
                if kind != "ray":
                    continue
                out.append(_line(pt(a), pt(b), style["ray"]))
        if result.waypoints:
            coords = " ".join("%g,%g" % pt(p) for p in result.waypoints)
            out.append('<polyline points="%s" %s/>\n' % (coords, style["path"]))
            for i, p in enumerate(result.waypoints):
                ends = i in (0, len(result.waypoints) - 1)
                out.append(
                    '<circle cx="%g" cy="%g" r="%g" %s/>\n'
                    % (
                        *pt(p),
                        sizes["wide"] * (2 if ends else 1.3),
                        style["endpoint" if ends else "waypoint"],
                    )
                )

    out.append("</svg>\n")
    return "".join(out)


def _line(a, b, style):
    return '<line x1="%g" y1="%g" x2="%g" y2="%g" %s/>\n' % (*a, *b, style)


def write_svg(path, env, result=None, scale=12, trace=False):
    text = render_svg(env, result, scale=scale, trace=trace)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
