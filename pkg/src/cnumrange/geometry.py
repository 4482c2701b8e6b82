"""Planar helpers on complex-number point sets."""

import numpy as np


def support_line_vertices(thetas, h):
    """Intersections of consecutive supporting lines ``Re(e^{i t} z) = h(t)``.

    Vertex ``i`` lies on the lines for ``thetas[i]`` and ``thetas[i + 1]``
    (cyclically); the result is the circumscribed polygon of the convex set.
    """
    t0 = np.asarray(thetas, dtype=float)
    t1 = np.roll(t0, -1)
    h0 = np.asarray(h, dtype=float)
    h1 = np.roll(h0, -1)
    # x cos t - y sin t = h for both lines
    det = np.sin(t1 - t0)
    x = (h0 * np.sin(t1) - h1 * np.sin(t0)) / det
    y = (h0 * np.cos(t1) - h1 * np.cos(t0)) / det
    return x + 1j * y


def edge_cross_products(vertices):
    """Cross products of consecutive edges of a closed polyline."""
    z = np.asarray(vertices)
    e = np.roll(z, -1) - z
    e_next = np.roll(e, -1)
    return e.real * e_next.imag - e.imag * e_next.real


def is_convex_polyline(vertices, slack):
    cross = edge_cross_products(vertices)
    return bool(np.all(cross <= slack) or np.all(cross >= -slack))


def shoelace_area(vertices):
    z = np.asarray(vertices)
    if z.size < 3:
        return 0.0
    zn = np.roll(z, -1)
    return 0.5 * abs(float(np.sum(z.real * zn.imag - zn.real * z.imag)))


def convex_hull(points):
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = np.unique(np.asarray(points, dtype=np.complex128))
    if pts.size <= 2:
        return pts
    order = np.lexsort((pts.imag, pts.real))
    pts = pts[order]

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2:
                a, b = chain[-2], chain[-1]
                cross = (b.real - a.real) * (p.imag - a.imag) - (b.imag - a.imag) * (p.real - a.real)
                if cross > 0:
                    break
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def diameter(points):
    """Largest pairwise distance (quadratic in the hull size)."""
    hull = convex_hull(points)
    if hull.size < 2:
        return 0.0
    return float(np.max(np.abs(hull[:, None] - hull[None, :])))
