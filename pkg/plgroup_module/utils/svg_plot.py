# plgroup_module/utils/svg_plot.py
"""
Static SVG graphs of PLMaps

Coordinates are integers: every breakpoint is scaled by the least common
denominator of all plotted breakpoints, so polyline vertices are exactly the
breakpoints (y flipped for screen space). The view box does the resizing.
"""

import logging
import math
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def _setting(key, default):
    from settings_manager import get_setting
    return get_setting(key, default)


def common_denominator(maps) -> int:
    lcd = 1
    for g in maps:
        for x, y in g.points:
            lcd = lcd * x.denominator // math.gcd(lcd, x.denominator)
            lcd = lcd * y.denominator // math.gcd(lcd, y.denominator)
    return lcd


def scaled_vertices(g, scale: int):
    """Breakpoints as integer (X, Y) with Y measured downward"""
    return [(int(x * scale), int(scale - y * scale)) for x, y in g.points]


def svgroot(width, height, scale, margin):
    pad = max(1, scale * margin // max(width, 1))
    box = f"{-pad} {-pad} {scale + 2 * pad} {scale + 2 * pad}"
    return ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      version="1.2",
                      baseProfile="tiny",
                      width=f"{width}px",
                      height=f"{height}px",
                      viewBox=box)


def svgpolyline(parent, vertices, **attrs):
    if not vertices:
        return None
    d = f"M{vertices[0][0]} {vertices[0][1]}" + "".join(f"L{x} {y}" for x, y in vertices[1:])
    return ET.SubElement(parent, "path", d=d, fill="none", **attrs)


def render_maps(maps: Sequence, names: Sequence[str] = (), width=None, height=None,
                margin=None) -> str:
    """
    Superimposed graphs of maps in the unit square, with the diagonal

    Returns:
        SVG document text
    """
    width = int(width or _setting("plot.width", 480))
    height = int(height or _setting("plot.height", 480))
    margin = int(_setting("plot.margin", 24) if margin is None else margin)
    scale = common_denominator(maps)

    root = svgroot(width, height, scale, margin)
    frame = ET.SubElement(root, "g", id="frame")
    ET.SubElement(frame, "rect", x="0", y="0", width=str(scale), height=str(scale),
                  fill="none", stroke="#888888")
    ET.SubElement(frame, "path", d=f"M0 {scale}L{scale} 0", fill="none", stroke="#cccccc")

    graphs = ET.SubElement(root, "g", id="graphs")
    for i, g in enumerate(maps):
        name = names[i] if i < len(names) else f"g{i}"
        path = svgpolyline(graphs, scaled_vertices(g, scale), stroke=PALETTE[i % len(PALETTE)])
        path.set("id", name)
        ET.SubElement(path, "title").text = name

    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def write_svg(path, maps, names=(), **kwargs):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_maps(maps, names, **kwargs), encoding="utf-8")
    logging.info(f"📁 SVG saved: {path}")
    return path
