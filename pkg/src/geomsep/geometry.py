"""Exact planar geometry kernel.

All coordinates are `fractions.Fraction`; every predicate is decided exactly.
Region boundaries are simple polygons without vertical edges, so each boundary
splits into x-monotone polyline pieces at the x-direction reversals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class GeometryError(Exception):
    pass


class VerticalEdge(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class Swallowed(GeometryError):
    pass


class Disconnected(GeometryError):
    pass


Point = tuple[Fraction, Fraction]


def scalar(value) -> Fraction:
    """Parse an exact scalar: int, Fraction, 'p/q' or a decimal string.

    Binary floats are rejected so no inexact value can sneak into the kernel.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def format_scalar(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def pt(x, y) -> Point:
    return (scalar(x), scalar(y))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Twice the signed area of triangle (o, a, b); > 0 for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def dot(a: Point, b: Point) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def dist2(a: Point, b: Point) -> Fraction:
    dx, dy = a[0] - b[0], a[1] - b[1]
    return dx * dx + dy * dy


def on_segment(a: Point, b: Point, p: Point) -> bool:
    """p lies on the closed segment ab (a, b, p need not be distinct)."""
    if cross(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segment_intersection(a: Point, b: Point, c: Point, d: Point):
    """Classify the intersection of closed segments ab and cd.

    Returns ('none', None), ('proper', point) for a transversal interior
    crossing, or ('degenerate', None) for any touching / collinear overlap.
    """
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        t = d1 / (d1 - d2)
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        return ('proper', (x, y))
    if d1 == 0 and on_segment(c, d, a):
        return ('degenerate', None)
    if d2 == 0 and on_segment(c, d, b):
        return ('degenerate', None)
    if d3 == 0 and on_segment(a, b, c):
        return ('degenerate', None)
    if d4 == 0 and on_segment(a, b, d):
        return ('degenerate', None)
    return ('none', None)


def segment_crossing_param(a: Point, b: Point, c: Point, d: Point):
    """(t, u, point) for a proper crossing of ab and cd, else None."""
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        t = d1 / (d1 - d2)
        u = d3 / (d3 - d4)
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        return (t, u, (x, y))
    return None


# ---------------------------------------------------------------------------
# polygons


def polygon_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed area; positive when counter-clockwise."""
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        total += a[0] * b[1] - b[0] * a[1]
    return total


def ensure_ccw(vertices: Sequence[Point]) -> tuple[Point, ...]:
    if polygon_area2(vertices) < 0:
        return tuple(reversed(vertices))
    return tuple(vertices)


def drop_collinear(vertices: Sequence[Point]) -> tuple[Point, ...]:
    """Remove vertices that sit on the line through their neighbours."""
    out = list(vertices)
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            a = out[i - 1]
            b = out[i]
            c = out[(i + 1) % len(out)]
            if cross(a, b, c) == 0:
                out.pop(i)
                changed = True
                break
    return tuple(out)


def polygon_is_simple(vertices: Sequence[Point]) -> bool:
    n = len(vertices)
    if n < 3:
        return False
    if len(set(vertices)) != n:
        return False
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, d = edges[j]
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            kind, _ = segment_intersection(a, b, c, d)
            if kind == 'proper':
                return False
            if kind == 'degenerate':
                if not adjacent:
                    return False
                # adjacent edges may only share their common endpoint
                shared = b if j == i + 1 else a
                free_i = a if shared == b else b
                free_j = d if j == i + 1 else c
                if on_segment(c, d, free_i) or on_segment(a, b, free_j):
                    return False
    return True


def point_in_polygon(p: Point, vertices: Sequence[Point]) -> str:
    """Exact crossing-number location: 'in', 'on' or 'out'."""
    n = len(vertices)
    inside = False
    px, py = p
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        if on_segment(a, b, p):
            return 'on'
        (ax, ay), (bx, by) = a, b
        if (ay > py) != (by > py):
            # x coordinate of the edge at height py, compared exactly
            t = (py - ay) / (by - ay)
            xcross = ax + t * (bx - ax)
            if xcross > px:
                inside = not inside
    return 'in' if inside else 'out'


def polygon_bbox(vertices: Sequence[Point]):
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    return (min(xs), min(ys), max(xs), max(ys))


def float_bbox(vertices: Sequence[Point], pad: float = 1e-9):
    xs = [float(v[0]) for v in vertices]
    ys = [float(v[1]) for v in vertices]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    eps = pad * span + 1e-12
    return (min(xs) - eps, min(ys) - eps, max(xs) + eps, max(ys) + eps)


def bbox_disjoint(b1, b2) -> bool:
    return b1[2] < b2[0] or b2[2] < b1[0] or b1[3] < b2[1] or b2[3] < b1[1]


# ---------------------------------------------------------------------------
# monotone decomposition


@dataclass(frozen=True)
class PolyCurve:
    """An x-monotone polyline piece of a region boundary.

    `points` always runs left to right (strictly increasing x). `rising`
    records whether the boundary cycle traverses the piece in that direction.
    """
    points: tuple[Point, ...]
    region_id: int = -1
    index: int = 0
    weight: Fraction = Fraction(1)
    rising: bool = True

    def __post_init__(self):
        for a, b in zip(self.points, self.points[1:]):
            if a[0] >= b[0]:
                raise VerticalEdge("piece is not strictly x-monotone")

    @property
    def x_min(self) -> Fraction:
        return self.points[0][0]

    @property
    def x_max(self) -> Fraction:
        return self.points[-1][0]

    def boundary_points(self) -> tuple[Point, ...]:
        return self.points if self.rising else tuple(reversed(self.points))

    def y_at(self, x: Fraction) -> Fraction:
        """Exact y on the piece at abscissa x (requires x_min <= x <= x_max)."""
        pts = self.points
        lo, hi = 0, len(pts) - 1
        if not (pts[0][0] <= x <= pts[-1][0]):
            raise ValueError("x outside piece span")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= x:
                lo = mid
            else:
                hi = mid
        (ax, ay), (bx, by) = pts[lo], pts[hi]
        if x == ax:
            return ay
        if x == bx:
            return by
        return ay + (by - ay) * (x - ax) / (bx - ax)

    def segments(self):
        return list(zip(self.points, self.points[1:]))


def monotone_decompose(boundary: Sequence[Point], region_id: int = -1,
                       weight: Fraction = Fraction(1)) -> tuple[PolyCurve, ...]:
    """Split a simple polygon boundary at its x-direction reversals.

    The piece count is minimal: a split happens exactly where the sign of
    the x step changes around the cycle. Vertical edges are rejected.
    """
    verts = list(boundary)
    n = len(verts)
    if n < 3:
        raise SelfIntersecting("polygon needs at least 3 vertices")
    for i in range(n):
        if verts[i][0] == verts[(i + 1) % n][0]:
            raise VerticalEdge(f"vertical edge at vertex {i}")
    if not polygon_is_simple(verts):
        raise SelfIntersecting("polygon boundary self-intersects")

    signs = [1 if verts[(i + 1) % n][0] > verts[i][0] else -1 for i in range(n)]
    # reversal vertices: sign changes between incoming and outgoing edge
    breaks = [i for i in range(n) if signs[i - 1] != signs[i]]
    if not breaks:
        raise SelfIntersecting("closed boundary must reverse x direction")
    pieces = []
    for k, start in enumerate(breaks):
        end = breaks[(k + 1) % len(breaks)]
        chain = [verts[start]]
        i = start
        while i != end:
            i = (i + 1) % n
            chain.append(verts[i])
        rising = signs[start] == 1
        pts = tuple(chain) if rising else tuple(reversed(chain))
        pieces.append(PolyCurve(points=pts, region_id=region_id, index=k,
                                weight=weight, rising=rising))
    return tuple(pieces)


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Region:
    """A weighted alpha-simple region: polygon interior or bare segment.

    Segment regions (kind='segment') have empty interior; they exist for the
    independent-set track and the separator lower-bound instances.
    """
    id: int
    weight: Fraction
    boundary: tuple[Point, ...]
    kind: str = 'polygon'
    source_tags: Optional[tuple] = None   # per-edge provenance for cores

    @staticmethod
    def polygon(rid: int, weight, vertices: Iterable) -> 'Region':
        verts = drop_collinear(ensure_ccw([pt(x, y) for x, y in vertices]))
        return Region(id=rid, weight=scalar(weight), boundary=verts)

    @staticmethod
    def segment(rid: int, weight, a, b) -> 'Region':
        a = (scalar(a[0]), scalar(a[1]))
        b = (scalar(b[0]), scalar(b[1]))
        if a[0] == b[0]:
            raise VerticalEdge("segment region may not be vertical")
        if a[0] > b[0]:
            a, b = b, a
        return Region(id=rid, weight=scalar(weight), boundary=(a, b),
                      kind='segment')

    @property
    def monotone_pieces(self) -> tuple[PolyCurve, ...]:
        if self.kind == 'segment':
            return (PolyCurve(points=self.boundary, region_id=self.id,
                              index=0, weight=self.weight, rising=True),)
        return monotone_decompose(self.boundary, self.id, self.weight)

    @property
    def alpha(self) -> int:
        return len(self.monotone_pieces)

    def area2(self) -> Fraction:
        if self.kind == 'segment':
            return Fraction(0)
        return abs(polygon_area2(self.boundary))

    def locate(self, p: Point) -> str:
        """'in' / 'on' / 'out' with exact arithmetic."""
        if self.kind == 'segment':
            return 'on' if on_segment(self.boundary[0], self.boundary[1], p) else 'out'
        return point_in_polygon(p, self.boundary)

    def bbox(self):
        return polygon_bbox(self.boundary)

    def fbox(self):
        return float_bbox(self.boundary)

    def edges(self):
        if self.kind == 'segment':
            return [(self.boundary[0], self.boundary[1])]
        n = len(self.boundary)
        return [(self.boundary[i], self.boundary[(i + 1) % n]) for i in range(n)]

    def centroid_inner_point(self) -> Point:
        """A point strictly inside a polygon region (triangle fan probe)."""
        if self.kind == 'segment':
            raise GeometryError("segment region has no interior")
        verts = self.boundary
        n = len(verts)
        for i in range(1, n - 1):
            cen = ((verts[0][0] + verts[i][0] + verts[i + 1][0]) / 3,
                   (verts[0][1] + verts[i][1] + verts[i + 1][1]) / 3)
            if point_in_polygon(cen, verts) == 'in':
                return cen
        raise GeometryError("no interior probe found")


def locate(point: Point, region: Region) -> str:
    """Classify a point against a region: 'in', 'on' or 'out'."""
    return region.locate(point)


def min_feature_distance2(regions: Sequence[Region]) -> Fraction:
    """Squared minimum positive vertex-to-vertex / vertex-to-edge distance.

    Used to certify that perturbation and gap magnitudes are far below every
    geometric feature of the input family.
    """
    best = None
    all_edges = []
    all_verts = []
    for r in regions:
        all_verts.extend(r.boundary)
        all_edges.extend(r.edges())
    for i, v in enumerate(all_verts):
        for w in all_verts[i + 1:]:
            d = dist2(v, w)
            if d > 0 and (best is None or d < best):
                best = d
    for v in all_verts:
        for a, b in all_edges:
            if v == a or v == b:
                continue
            d = _point_segment_dist2(v, a, b)
            if d > 0 and (best is None or d < best):
                best = d
    return best if best is not None else Fraction(1)


def _point_segment_dist2(p: Point, a: Point, b: Point) -> Fraction:
    ab = sub(b, a)
    ap = sub(p, a)
    denom = dot(ab, ab)
    if denom == 0:
        return dist2(p, a)
    t = dot(ap, ab) / denom
    if t <= 0:
        return dist2(p, a)
    if t >= 1:
        return dist2(p, b)
    c = cross(a, b, p)
    return c * c / denom


def perturb_regions(regions: Sequence[Region], step: Optional[Fraction] = None
                    ) -> list[Region]:
    """Deterministic pre-perturbation: shift region i upward by i*h.

    h is a rational far below the least feature distance, so only degenerate
    coincidences change.
    """
    if step is None:
        d2 = min_feature_distance2(regions)
        h = Fraction(1)
        while h * h * 16 * (len(regions) + 1) ** 2 > d2:
            h /= 2
        step = h
    out = []
    for i, r in enumerate(regions):
        dy = step * i
        moved = tuple((x, y + dy) for x, y in r.boundary)
        out.append(Region(id=r.id, weight=r.weight, boundary=moved,
                          kind=r.kind, source_tags=r.source_tags))
    return out
