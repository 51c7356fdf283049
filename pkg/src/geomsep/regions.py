"""Arrangements of regions and exact boolean operations on tagged polygons.

Boundaries of core regions are assembled from pieces of the input boundaries,
so every polygon edge carries a provenance tag (the id of the region whose
boundary it came from). The boolean walker requires transversal general
position and raises Degenerate otherwise; callers that control a free
parameter (gap sizes, perturbations) retry with a smaller value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (Degenerate, Disconnected, GeometryError, Point, Region,
                       Swallowed, bbox_disjoint, cross, dist2, ensure_ccw,
                       float_bbox, on_segment, point_in_polygon, polygon_area2,
                       segment_crossing_param, segment_intersection)


@dataclass(frozen=True)
class ArrangementVertex:
    location: Point
    defining: tuple[int, int]      # region ids, i < j
    depth: Fraction                # total weight strictly containing, minus defining
    cover_count: int               # number of regions strictly containing


@dataclass
class Arrangement:
    regions: list[Region]
    vertices: list[ArrangementVertex]

    @property
    def m(self) -> int:
        return len(self.vertices)

    def by_pair(self) -> dict[tuple[int, int], list[ArrangementVertex]]:
        out: dict[tuple[int, int], list[ArrangementVertex]] = {}
        for v in self.vertices:
            out.setdefault(v.defining, []).append(v)
        return out


def boundary_intersections(a: Region, b: Region) -> list[ArrangementVertex]:
    """All transversal crossings of the two boundaries (depth unset = 0).

    Raises Degenerate on overlapping edges, tangencies or vertex-on-edge
    coincidences.
    """
    out = []
    if bbox_disjoint(a.fbox(), b.fbox()):
        return out
    ea = a.edges()
    eb = b.edges()
    fa = [float_bbox(e) for e in ea]
    fb = [float_bbox(e) for e in eb]
    lo = min(a.id, b.id)
    hi = max(a.id, b.id)
    for i, (p, q) in enumerate(ea):
        for j, (r, s) in enumerate(eb):
            if bbox_disjoint(fa[i], fb[j]):
                continue
            kind, point = segment_intersection(p, q, r, s)
            if kind == 'degenerate':
                raise Degenerate(
                    f"non-transversal contact between regions {a.id} and {b.id}")
            if kind == 'proper':
                out.append(ArrangementVertex(location=point, defining=(lo, hi),
                                             depth=Fraction(0), cover_count=0))
    return out


def is_pseudodisk_family(regions: Sequence[Region]):
    """Every pair of boundaries crosses at most twice.

    Returns (True, None) or (False, (i, j)) with the violating pair.
    """
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            hits = boundary_intersections(regions[i], regions[j])
            if len(hits) > 2:
                return False, (regions[i].id, regions[j].id)
    return True, None


def build_arrangement(regions: Sequence[Region]) -> Arrangement:
    """All pairwise boundary crossings with exact weighted depths."""
    verts = []
    regs = list(regions)
    for i in range(len(regs)):
        for j in range(i + 1, len(regs)):
            verts.extend(boundary_intersections(regs[i], regs[j]))
    # no three boundaries concurrent
    locs = [v.location for v in verts]
    if len(set(locs)) != len(locs):
        raise Degenerate("three boundaries meet at a point")
    final = []
    for v in verts:
        depth = Fraction(0)
        count = 0
        for r in regs:
            if r.id in v.defining:
                continue
            if r.locate(v.location) == 'in':
                depth += r.weight
                count += 1
            elif r.locate(v.location) == 'on':
                raise Degenerate("arrangement vertex on a third boundary")
        final.append(ArrangementVertex(location=v.location, defining=v.defining,
                                       depth=depth, cover_count=count))
    return Arrangement(regions=regs, vertices=final)


def union_stats(regions: Sequence[Region]):
    """(union boundary vertex count, m, histogram cover_count -> vertices)."""
    arr = build_arrangement(regions)
    hist: dict[int, int] = {}
    for v in arr.vertices:
        hist[v.cover_count] = hist.get(v.cover_count, 0) + 1
    return hist.get(0, 0), arr.m, hist


# ---------------------------------------------------------------------------
# tagged polygons and the boolean walker


@dataclass(frozen=True)
class TaggedPolygon:
    """CCW simple polygon; tags[i] is the provenance of edge v[i] -> v[i+1]."""
    vertices: tuple[Point, ...]
    tags: tuple

    @staticmethod
    def from_region(region: Region, tag=None) -> 'TaggedPolygon':
        verts = ensure_ccw(region.boundary)
        if region.source_tags is not None and len(region.source_tags) == len(verts):
            tags = tuple(region.source_tags)
        else:
            tags = tuple([tag if tag is not None else region.id] * len(verts))
        return TaggedPolygon(vertices=tuple(verts), tags=tags)

    def to_region(self, rid: int, weight) -> Region:
        return Region(id=rid, weight=weight, boundary=self.vertices,
                      source_tags=self.tags)

    def area2(self) -> Fraction:
        return polygon_area2(self.vertices)

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n], self.tags[i])
                for i in range(n)]

    def fbox(self):
        return float_bbox(self.vertices)


class _Node:
    __slots__ = ('point', 'crossing', 'twin', 'entering', 'nxt', 'prv', 'tag',
                 'visited')

    def __init__(self, point, crossing=False, tag=None):
        self.point = point
        self.crossing = crossing
        self.twin = None
        self.entering = False   # for A nodes: A passes out->in of B here
        self.nxt = None
        self.prv = None
        self.tag = tag          # provenance of the edge LEAVING this node
        self.visited = False


def _build_chain(poly: TaggedPolygon, other: TaggedPolygon):
    """Linked vertex/crossing cycle of `poly`, with crossings versus `other`.

    Returns (nodes_in_order, crossing_record) where crossing_record maps
    (edge_index_self, edge_index_other, point) -> node.
    """
    n = len(poly.vertices)
    per_edge: list[list] = [[] for _ in range(n)]
    m = len(other.vertices)
    fe = [float_bbox((poly.vertices[i], poly.vertices[(i + 1) % n])) for i in range(n)]
    fo = [float_bbox((other.vertices[j], other.vertices[(j + 1) % m])) for j in range(m)]
    for i in range(n):
        a, b = poly.vertices[i], poly.vertices[(i + 1) % n]
        for j in range(m):
            if bbox_disjoint(fe[i], fo[j]):
                continue
            c, d = other.vertices[j], other.vertices[(j + 1) % m]
            kind, _ = segment_intersection(a, b, c, d)
            if kind == 'degenerate':
                raise Degenerate("boolean operands touch non-transversally")
            if kind == 'proper':
                t, u, point = segment_crossing_param(a, b, c, d)
                per_edge[i].append((t, u, j, point))
    nodes = []
    records = {}
    for i in range(n):
        node = _Node(poly.vertices[i], crossing=False, tag=poly.tags[i])
        nodes.append(node)
        for (t, u, j, point) in sorted(per_edge[i], key=lambda rec: rec[0]):
            cnode = _Node(point, crossing=True, tag=poly.tags[i])
            records[(i, j, point)] = cnode
            nodes.append(cnode)
    for k, node in enumerate(nodes):
        node.nxt = nodes[(k + 1) % len(nodes)]
        node.prv = nodes[k - 1]
    return nodes, records


def _link_chains(pa, ra, pb, rb):
    for (i, j, point), na in ra.items():
        nb = rb.get((j, i, point))
        if nb is None:
            raise Degenerate("crossing bookkeeping mismatch")
        na.twin = nb
        nb.twin = na


def _mark_entering(nodes_a, poly_b: TaggedPolygon):
    """Set .entering on A's crossing nodes by walking A and toggling state."""
    start_state = None
    for node in nodes_a:
        if not node.crossing:
            side = point_in_polygon(node.point, poly_b.vertices)
            if side == 'on':
                raise Degenerate("operand vertex on the other boundary")
            start_state = side
            start_node = node
            break
    if start_state is None:
        raise Degenerate("no plain vertex to seed inside/outside state")
    inside = start_state == 'in'
    node = start_node
    while True:
        node = node.nxt
        if node.crossing:
            node.entering = not inside
            inside = not inside
        if node is start_node:
            break


def _collect_loop(points_tags):
    pts = [p for p, _ in points_tags]
    tags = [t for _, t in points_tags]
    # drop exact duplicates produced at switch points
    out_p, out_t = [], []
    for p, t in zip(pts, tags):
        if out_p and p == out_p[-1]:
            out_t[-1] = out_t[-1] or t
            continue
        out_p.append(p)
        out_t.append(t)
    while len(out_p) > 1 and out_p[0] == out_p[-1]:
        out_p.pop()
        out_t.pop()
    if len(out_p) < 3:
        return None
    return TaggedPolygon(vertices=tuple(out_p), tags=tuple(out_t))


def _boolean_setup(a: TaggedPolygon, b: TaggedPolygon):
    nodes_a, rec_a = _build_chain(a, b)
    nodes_b, rec_b = _build_chain(b, a)
    if rec_a:
        _link_chains(a, rec_a, b, rec_b)
        _mark_entering(nodes_a, b)
        _mark_entering(nodes_b, a)
    return nodes_a, nodes_b, bool(rec_a)


def polygon_difference(a: TaggedPolygon, b: TaggedPolygon) -> list[TaggedPolygon]:
    """closure(A \\ B) as CCW loops; transversal general position required.

    Raises Disconnected when B is strictly inside A (the result would have a
    hole, which never happens for the cover-free families this serves).
    """
    if bbox_disjoint(a.fbox(), b.fbox()):
        return [a]
    nodes_a, nodes_b, crossed = _boolean_setup(a, b)
    if not crossed:
        a_side = point_in_polygon(a.vertices[0], b.vertices)
        if a_side == 'on':
            raise Degenerate("vertex contact between operands")
        if a_side == 'in':
            return []
        b_side = point_in_polygon(b.vertices[0], a.vertices)
        if b_side == 'on':
            raise Degenerate("vertex contact between operands")
        if b_side == 'in':
            raise Disconnected("subtrahend strictly inside; result has a hole")
        return [a]

    loops = []
    limit = 4 * (len(nodes_a) + len(nodes_b))
    for start in nodes_a:
        if not start.crossing or not start.entering or start.visited:
            continue
        # A enters B here: the result boundary turns onto B walked backward.
        walk = []
        node = start.twin   # same point, B chain
        on_a = False
        walk.append((start.point, node.prv.tag))
        start.visited = True
        node.visited = True
        steps = 0
        while True:
            steps += 1
            if steps > limit:
                raise Degenerate("difference walk failed to close")
            if on_a:
                node = node.nxt
                if node.crossing:
                    node.visited = True
                    node.twin.visited = True
                    if node is start:
                        break
                    if not node.entering:
                        raise Degenerate("walk parity broken (expected entry)")
                    # switch to B backward
                    node = node.twin
                    walk.append((node.point, node.prv.tag))
                    on_a = False
                else:
                    walk.append((node.point, node.tag))
            else:
                node = node.prv
                if node.crossing:
                    node.visited = True
                    twin = node.twin
                    twin.visited = True
                    if twin is start:
                        break
                    if twin.entering:
                        raise Degenerate("walk parity broken (expected exit)")
                    # switch to A forward
                    node = twin
                    walk.append((node.point, node.tag))
                    on_a = True
                else:
                    walk.append((node.point, node.prv.tag))
        loop = _collect_loop(walk)
        if loop is not None and loop.area2() > 0:
            loops.append(loop)
    return loops


def polygon_intersection(a: TaggedPolygon, b: TaggedPolygon) -> list[TaggedPolygon]:
    """A intersect B as CCW loops; transversal general position required."""
    if bbox_disjoint(a.fbox(), b.fbox()):
        return []
    nodes_a, nodes_b, crossed = _boolean_setup(a, b)
    if not crossed:
        a_side = point_in_polygon(a.vertices[0], b.vertices)
        if a_side == 'on':
            raise Degenerate("vertex contact between operands")
        if a_side == 'in':
            return [a]
        b_side = point_in_polygon(b.vertices[0], a.vertices)
        if b_side == 'on':
            raise Degenerate("vertex contact between operands")
        if b_side == 'in':
            return [b]
        return []

    loops = []
    limit = 4 * (len(nodes_a) + len(nodes_b))
    for start in nodes_a:
        if not start.crossing or not start.entering or start.visited:
            continue
        walk = [(start.point, start.tag)]
        start.visited = True
        node = start
        on_a = True
        steps = 0
        while True:
            steps += 1
            if steps > limit:
                raise Degenerate("intersection walk failed to close")
            node = node.nxt
            if node.crossing:
                node.visited = True
                node.twin.visited = True
                if node is start or node.twin is start:
                    break
                node = node.twin
                on_a = not on_a
                walk.append((node.point, node.tag))
            else:
                walk.append((node.point, node.tag))
        loop = _collect_loop(walk)
        if loop is not None and loop.area2() > 0:
            loops.append(loop)
    return loops


def intersection_area2(a: TaggedPolygon, b: TaggedPolygon) -> Fraction:
    return sum((loop.area2() for loop in polygon_intersection(a, b)),
               Fraction(0))


def _residual_pieces(region: Region, others: Sequence[Region]) -> list[TaggedPolygon]:
    """Loops of closure(region minus the union of the others)."""
    pieces = [TaggedPolygon.from_region(region)]
    for other in others:
        if other.kind == 'segment':
            continue
        cutter = TaggedPolygon.from_region(other)
        nxt: list[TaggedPolygon] = []
        for piece in pieces:
            nxt.extend(polygon_difference(piece, cutter))
        pieces = nxt
        if not pieces:
            break
    return pieces


def is_cover_free(regions: Sequence[Region]):
    """No region's closure is contained in the union of the others.

    Decided exactly: the residual area of R minus the union of the rest is
    zero iff the closure of R is covered. Returns (True, None) or
    (False, covered_region_id).
    """
    regs = list(regions)
    for i, r in enumerate(regs):
        if r.kind == 'segment':
            covered = False
            for other in regs:
                if other.id == r.id or other.kind == 'segment':
                    continue
                if other.locate(r.boundary[0]) != 'out' and \
                        other.locate(r.boundary[1]) != 'out':
                    mid = ((r.boundary[0][0] + r.boundary[1][0]) / 2,
                           (r.boundary[0][1] + r.boundary[1][1]) / 2)
                    if other.locate(mid) != 'out':
                        covered = True
                        break
            if covered:
                return False, r.id
            continue
        others = regs[:i] + regs[i + 1:]
        try:
            pieces = _residual_pieces(r, others)
        except Disconnected:
            # a hole got carved out of some subtrahend: residual clearly nonempty
            continue
        if sum((p.area2() for p in pieces), Fraction(0)) == 0:
            return False, r.id
    return True, None


def region_difference(a: Region, x: Region) -> Region:
    """Core-shaped closure(A \\ X): boundary pieces sourced from X are tagged.

    Requires a pseudodisk pair in general position. Raises Swallowed when A
    is inside X and Disconnected when the difference falls apart.
    """
    pa = TaggedPolygon.from_region(a)
    px = TaggedPolygon.from_region(x, tag=x.id)
    loops = polygon_difference(pa, px)
    if not loops:
        raise Swallowed(f"region {a.id} lies inside region {x.id}")
    if len(loops) > 1:
        raise Disconnected(f"difference of {a.id} minus {x.id} is disconnected")
    return loops[0].to_region(a.id, a.weight)


def offset_polygon(poly: TaggedPolygon, gap: Fraction) -> TaggedPolygon:
    """Outward mitered offset: every edge line moves out by gap * |n|_inf.

    Equivalent to a Minkowski sum with gap * K for a fixed convex body K, so
    offsets nest monotonically in gap. Exact and tag-preserving; the caller
    validates simplicity and retries with a smaller gap on failure.
    """
    verts = poly.vertices
    tags = poly.tags
    n = len(verts)
    lines = []
    for i in range(n):
        p = verts[i]
        q = verts[(i + 1) % n]
        vx, vy = q[0] - p[0], q[1] - p[1]
        # outward normal of a CCW polygon is to the right of the direction
        nx, ny = vy, -vx
        c = nx * p[0] + ny * p[1] + gap * max(abs(nx), abs(ny))
        lines.append((nx, ny, c))
    out_verts = []
    out_tags = []
    for i in range(n):
        a1, b1, c1 = lines[i - 1]
        a2, b2, c2 = lines[i]
        det = a1 * b2 - a2 * b1
        if det == 0:
            raise Degenerate("parallel adjacent edges in offset")
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        out_verts.append((x, y))
        out_tags.append(tags[i])
    result = TaggedPolygon(vertices=tuple(out_verts), tags=tuple(out_tags))
    return result
