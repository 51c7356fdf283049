"""Core decompositions of pseudodisk families.

A push shrinks every region away from a marked pusher; iterating pushes along
a weighted random permutation yields pairwise disjoint cores whose boundary
vertices are charged by the Clarkson-Shor style sum. Gaps are realized as
certified tiny rationals on a geometrically decreasing schedule (later pushes
use gaps far below every earlier separation), so all predicates stay exact;
the scale is validated after construction and shrunk on any failure.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (Degenerate, Disconnected, GeometryError, Point, Region,
                       Swallowed, bbox_disjoint, dist2, min_feature_distance2,
                       point_in_polygon)
from .regions import (Arrangement, ArrangementVertex, TaggedPolygon,
                      boundary_intersections, build_arrangement, is_cover_free,
                      is_pseudodisk_family, offset_polygon, polygon_difference)


class NotCoverFree(GeometryError):
    pass


class NotPseudodisks(GeometryError):
    pass


class IntervalUndefined(GeometryError):
    pass


@dataclass(frozen=True)
class CoreVertex:
    location: Point
    sources: tuple[int, int]          # boundary-piece tags meeting here, i < j
    arrangement_vertex: Optional[ArrangementVertex]


@dataclass
class CoreRegion:
    source_id: int
    region: Region                    # realized core polygon with source tags
    vertex_list: list[CoreVertex]

    def distinct_vertices(self) -> list[CoreVertex]:
        seen = set()
        out = []
        for v in self.vertex_list:
            key = (v.sources, v.arrangement_vertex.location
                   if v.arrangement_vertex else v.location)
            if key not in seen:
                seen.add(key)
                out.append(v)
        return out

    @property
    def vertex_count(self) -> int:
        return len(self.distinct_vertices())


@dataclass
class CoreDecomposition:
    mode: str                                  # pusher | disjoint | uniform
    cores: dict[int, CoreRegion]               # region id -> core
    pusher_id: Optional[int] = None
    permutation: Optional[dict[int, int]] = None   # region id -> 1-based slot
    ranks: dict = field(default_factory=dict)
    gap_scale: Fraction = Fraction(0)
    rank_conflicts: int = 0
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# intervals on a pusher boundary


def _cycle_param(poly: Sequence[Point], point: Point) -> Fraction:
    """Cumulative parameter of a point on the polygon boundary (edge + t)."""
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if a == point:
            return Fraction(i)
        cr = (b[0] - a[0]) * (point[1] - a[1]) - (b[1] - a[1]) * (point[0] - a[0])
        if cr == 0:
            if min(a[0], b[0]) <= point[0] <= max(a[0], b[0]) and \
               min(a[1], b[1]) <= point[1] <= max(a[1], b[1]):
                dx = b[0] - a[0]
                t = (point[0] - a[0]) / dx if dx != 0 else \
                    (point[1] - a[1]) / (b[1] - a[1])
                if 0 <= t < 1:
                    return Fraction(i) + t
    raise GeometryError("point not on polygon boundary")


def _point_at_param(poly: Sequence[Point], t: Fraction) -> Point:
    n = len(poly)
    i = int(t) % n
    frac = t - int(t)
    a, b = poly[i], poly[(i + 1) % n]
    return (a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1]))


@dataclass(frozen=True)
class _Arc:
    start: Fraction     # cyclic parameter in [0, n)
    length: Fraction    # arc extent going CCW
    total: Fraction

    def contains_param(self, t: Fraction, strict=True) -> bool:
        rel = (t - self.start) % self.total
        return (0 < rel < self.length) if strict else (0 <= rel <= self.length)

    def contains_arc(self, other: '_Arc') -> bool:
        rel = (other.start - self.start) % self.total
        return rel + other.length <= self.length and \
            (rel > 0 or other.length < self.length)

    def overlaps(self, other: '_Arc') -> bool:
        rel = (other.start - self.start) % self.total
        if rel < self.length:
            return True
        rel2 = (self.start - other.start) % self.total
        return rel2 < other.length


def _region_interval(pusher_poly: Sequence[Point], region: Region) -> Optional[_Arc]:
    """Arc of the pusher boundary inside the region, or None when disjoint.

    Raises IntervalUndefined when the region lies strictly inside the pusher
    and NotPseudodisks when the boundaries cross more than twice.
    """
    helper = Region(id=-1, weight=Fraction(1), boundary=tuple(pusher_poly))
    hits = boundary_intersections(helper, region)
    total = Fraction(len(pusher_poly))
    if not hits:
        side = point_in_polygon(region.boundary[0], tuple(pusher_poly))
        if side == 'in':
            raise IntervalUndefined(
                f"region {region.id} lies strictly inside the pusher")
        return None
    if len(hits) != 2:
        raise NotPseudodisks(
            f"pusher boundary crosses region {region.id} {len(hits)} times")
    t1 = _cycle_param(pusher_poly, hits[0].location)
    t2 = _cycle_param(pusher_poly, hits[1].location)
    if t1 > t2:
        t1, t2 = t2, t1
    mid = _point_at_param(pusher_poly, (t1 + t2) / 2)
    if region.locate(mid) == 'in':
        return _Arc(start=t1, length=t2 - t1, total=total)
    return _Arc(start=t2, length=total - (t2 - t1), total=total)


def interval_ranks(regions: Sequence[Region], pusher: Region,
                   priority: Optional[dict[int, int]] = None):
    """Distinct ranks for all non-pusher regions.

    Interval inclusion is respected (nested interval => larger rank, i.e.
    pushed further). Properly overlapping intervals are ordered by the
    optional priority map (larger priority => larger rank); remaining ties
    and regions missing the pusher boundary get deterministic trailing order.
    Returns (rank map, interval map, conflict count).
    """
    arcs: dict[int, Optional[_Arc]] = {}
    for r in regions:
        if r.id == pusher.id:
            continue
        arcs[r.id] = _region_interval(pusher.boundary, r)
    return _rank_arcs(arcs, priority)


# ---------------------------------------------------------------------------
# gap scale certification


def default_gap_scale(regions: Sequence[Region]) -> Fraction:
    """A dyadic rational far below the least feature distance of the family."""
    d2 = min_feature_distance2(regions)
    bound = 64 * (len(regions) + 2) ** 2
    g = Fraction(1)
    while g * g * bound * bound > d2:
        g /= 2
    return g / 4


def _junctions(core_poly: TaggedPolygon, own_id: int,
               pair_index: dict[tuple[int, int], list[ArrangementVertex]]
               ) -> list[CoreVertex]:
    """Boundary vertices where the source tag changes, with correspondence."""
    n = len(core_poly.vertices)
    out = []
    for i in range(n):
        prev_tag = core_poly.tags[i - 1]
        tag = core_poly.tags[i]
        if prev_tag == tag:
            continue
        loc = core_poly.vertices[i]
        key = (min(prev_tag, tag), max(prev_tag, tag))
        best = None
        best_d = None
        for av in pair_index.get(key, ()):  # nearest arrangement vertex
            d = dist2(loc, av.location)
            if best_d is None or d < best_d:
                best, best_d = av, d
        out.append(CoreVertex(location=loc, sources=key,
                              arrangement_vertex=best))
    return out


def _subtract(poly: TaggedPolygon, pusher: TaggedPolygon, gap: Fraction
              ) -> TaggedPolygon:
    """closure(poly minus pusher expanded by gap); must stay connected."""
    grown = offset_polygon(pusher, gap)
    pieces = polygon_difference(poly, grown)
    if not pieces:
        raise Swallowed("core vanished under a push")
    if len(pieces) > 1:
        pieces.sort(key=lambda p: -p.area2())
        raise Disconnected("push disconnected a core")
    return pieces[0]


# ---------------------------------------------------------------------------
# the push operation


def push(regions: Sequence[Region], pusher: Region,
         priority: Optional[dict[int, int]] = None,
         gap_scale: Optional[Fraction] = None,
         arrangement: Optional[Arrangement] = None,
         validate: bool = True) -> CoreDecomposition:
    """One pusher step: every other region retreats from the pusher.

    The pusher's core is the pusher itself; every region crossing it is
    replaced by closure(R minus pusher-expanded-by-gap) with gap proportional
    to its interval rank. Output is validated as a cover-free pseudodisk
    family when `validate` is set.
    """
    regs = list(regions)
    if validate:
        ok, witness = is_pseudodisk_family(regs)
        if not ok:
            raise NotPseudodisks(f"input pair {witness} crosses > 2 times")
        ok, witness = is_cover_free(regs)
        if not ok:
            raise NotCoverFree(f"region {witness} covered by the others")
    if arrangement is None:
        arrangement = build_arrangement(regs)
    pair_index = arrangement.by_pair()
    scale = gap_scale if gap_scale is not None else default_gap_scale(regs)
    n = max(len(regs), 2)

    for attempt in range(8):
        try:
            ranks, arcs, conflicts = interval_ranks(regs, pusher, priority)
            cores: dict[int, CoreRegion] = {}
            pusher_poly = TaggedPolygon.from_region(pusher)
            cores[pusher.id] = CoreRegion(
                source_id=pusher.id,
                region=pusher_poly.to_region(pusher.id, pusher.weight),
                vertex_list=_junctions(pusher_poly, pusher.id, pair_index))
            for r in regs:
                if r.id == pusher.id:
                    continue
                poly = TaggedPolygon.from_region(r)
                if arcs.get(r.id) is not None:
                    gap = scale * Fraction(ranks[r.id], n)
                    poly = _subtract(poly, pusher_poly, gap)
                cores[r.id] = CoreRegion(
                    source_id=r.id,
                    region=poly.to_region(r.id, r.weight),
                    vertex_list=_junctions(poly, r.id, pair_index))
            deco = CoreDecomposition(mode='pusher', cores=cores,
                                     pusher_id=pusher.id, ranks=ranks,
                                     gap_scale=scale,
                                     rank_conflicts=conflicts)
            if validate:
                _validate_push(regs, pusher, deco)
            return deco
        except Degenerate:
            scale /= 4
    raise Degenerate("push failed at every gap scale")


def _validate_push(regions, pusher, deco: CoreDecomposition):
    core_regions = [deco.cores[r.id].region for r in regions]
    for r in regions:
        core = deco.cores[r.id].region
        if core.area2() > r.area2():
            raise Degenerate("core exceeds source area")
        for v in core.boundary:
            if r.locate(v) == 'out':
                raise Degenerate("core vertex escapes its source")
    for r in regions:
        if r.id == pusher.id:
            continue
        core = deco.cores[r.id].region
        hits = boundary_intersections(core, pusher)
        if hits:
            raise Degenerate("core still crosses the pusher")
        if pusher.locate(core.boundary[0]) == 'in':
            raise Degenerate("core stuck inside the pusher")
    ok, witness = is_pseudodisk_family(core_regions)
    if not ok:
        raise NotPseudodisks(f"pushed cores {witness} cross more than twice")
    ok, witness = is_cover_free(core_regions)
    if not ok:
        raise NotCoverFree(f"pushed core {witness} lost cover-freeness")


# ---------------------------------------------------------------------------
# weighted permutation and the disjoint decomposition


def weighted_permutation(weights: dict[int, Fraction], seed: int) -> list[int]:
    """Sequential weighted sampling without replacement; deterministic."""
    rng = random.Random(seed)
    remaining = sorted(weights)
    out = []
    while remaining:
        total = sum(weights[i] for i in remaining)
        roll = Fraction(rng.getrandbits(53), 1 << 53) * total
        acc = Fraction(0)
        chosen = remaining[-1]
        for i in remaining:
            acc += weights[i]
            if roll < acc:
                chosen = i
                break
        out.append(chosen)
        remaining.remove(chosen)
    return out


def disjoint_core_decomposition(regions: Sequence[Region], seed: int = 0,
                                order: Optional[list[int]] = None,
                                gap_scale: Optional[Fraction] = None,
                                arrangement: Optional[Arrangement] = None,
                                validate: bool = False) -> CoreDecomposition:
    """Iterated pushes along a weight-biased random permutation.

    Each step uses the current core of the next region in the permutation as
    the pusher; interval ranks are refined by the permutation itself (later
    regions are pushed further), which keeps vertex accounting tight. Final
    cores are pairwise disjoint.
    """
    regs = list(regions)
    if validate:
        ok, witness = is_pseudodisk_family(regs)
        if not ok:
            raise NotPseudodisks(f"input pair {witness} crosses > 2 times")
        ok, witness = is_cover_free(regs)
        if not ok:
            raise NotCoverFree(f"region {witness} covered by the others")
    if arrangement is None:
        arrangement = build_arrangement(regs)
    pair_index = arrangement.by_pair()
    if order is None:
        order = weighted_permutation({r.id: r.weight for r in regs}, seed)
    by_id = {r.id: r for r in regs}
    base_scale = gap_scale if gap_scale is not None else default_gap_scale(regs)
    n = max(len(regs), 2)

    for attempt in range(8):
        try:
            current = {r.id: TaggedPolygon.from_region(r) for r in regs}
            total_conflicts = 0
            scale = base_scale
            for step, pusher_id in enumerate(order):
                pusher_poly = current[pusher_id]
                later = order[step + 1:]
                if not later:
                    break
                pusher_region = pusher_poly.to_region(
                    pusher_id, by_id[pusher_id].weight)
                prio = {rid: pos for pos, rid in enumerate(later)}
                arcs = {}
                for rid in later:
                    target = current[rid].to_region(rid, by_id[rid].weight)
                    arcs[rid] = _region_interval(pusher_poly.vertices, target)
                ranks, _, conflicts = _rank_arcs(arcs, prio)
                total_conflicts += conflicts
                for rid in later:
                    if arcs.get(rid) is None:
                        if not bbox_disjoint(current[rid].fbox(),
                                             pusher_poly.fbox()):
                            # may still overlap without boundary contact
                            pieces = polygon_difference(current[rid], pusher_poly)
                            if not pieces:
                                raise NotCoverFree(
                                    f"core {rid} swallowed by core {pusher_id}")
                        continue
                    gap = scale * Fraction(ranks[rid], n)
                    current[rid] = _subtract(current[rid], pusher_poly, gap)
                scale /= 8 * n * n
            cores = {}
            for r in regs:
                poly = current[r.id]
                cores[r.id] = CoreRegion(
                    source_id=r.id,
                    region=poly.to_region(r.id, r.weight),
                    vertex_list=_junctions(poly, r.id, pair_index))
            deco = CoreDecomposition(
                mode='disjoint', cores=cores,
                permutation={rid: pos + 1 for pos, rid in enumerate(order)},
                gap_scale=base_scale, rank_conflicts=total_conflicts)
            _validate_disjoint_light(regs, deco)
            return deco
        except Degenerate:
            base_scale /= 4
    raise Degenerate("disjoint core decomposition failed at every gap scale")


def _rank_arcs(arcs: dict[int, Optional[_Arc]],
               priority: Optional[dict[int, int]]):
    """Rank a prepared arc map.

    Hard constraints: nested interval => larger rank. Soft constraints (only
    with a priority map): properly overlapping intervals ordered by priority,
    later-pushed regions further in. Cycles between hard and soft constraints
    are broken by dropping soft edges; the count is reported.
    """
    meeting = [rid for rid, arc in arcs.items() if arc is not None]
    absent = [rid for rid, arc in arcs.items() if arc is None]
    hard: dict[int, set[int]] = {rid: set() for rid in meeting}
    soft: dict[int, set[int]] = {rid: set() for rid in meeting}
    for a in meeting:
        for b in meeting:
            if a >= b:
                continue
            arc_a, arc_b = arcs[a], arcs[b]
            if arc_a.contains_arc(arc_b):
                hard[b].add(a)      # rank(b) > rank(a): nested pushed further
            elif arc_b.contains_arc(arc_a):
                hard[a].add(b)
            elif priority is not None and arc_a.overlaps(arc_b):
                if priority.get(a, 0) < priority.get(b, 0):
                    soft[a].add(b)  # rank(a) < rank(b)
                else:
                    soft[b].add(a)
    # hard[x] holds predecessors here; normalize to successor lists
    succ: dict[int, set[int]] = {rid: set() for rid in meeting}
    indeg = {rid: 0 for rid in meeting}
    for b, preds in hard.items():
        for a in preds:
            succ[a].add(b)
            indeg[b] += 1
    soft_in: dict[int, set[int]] = {rid: set() for rid in meeting}
    for a, outs in soft.items():
        for b in outs:
            succ[a].add(b)
            indeg[b] += 1
            soft_in[b].add(a)

    conflicts = 0
    ranks: dict[int, int] = {}
    next_rank = 1
    pending = set(meeting)
    prio = priority or {}

    def sort_key(rid):
        return (prio.get(rid, 0), arcs[rid].start, rid)

    while pending:
        avail = [rid for rid in pending if indeg[rid] == 0]
        if not avail:
            # a soft edge participates in every cycle; drop one into the
            # deterministically chosen victim
            victim = None
            for rid in sorted(pending, key=sort_key):
                if soft_in[rid]:
                    victim = rid
                    break
            if victim is None:
                raise Degenerate("nested intervals form a cycle")
            src = min(soft_in[victim])
            soft_in[victim].discard(src)
            succ[src].discard(victim)
            indeg[victim] -= 1
            conflicts += 1
            continue
        pick = min(avail, key=sort_key)
        ranks[pick] = next_rank
        next_rank += 1
        pending.discard(pick)
        for o in succ.get(pick, ()):
            if o in pending:
                indeg[o] -= 1
                soft_in[o].discard(pick)
    for rid in sorted(absent):
        ranks[rid] = next_rank
        next_rank += 1
    return ranks, arcs, conflicts


def _validate_disjoint_light(regions, deco: CoreDecomposition):
    cores = [deco.cores[r.id].region for r in regions]
    for i in range(len(cores)):
        for j in range(i + 1, len(cores)):
            a, b = cores[i], cores[j]
            if bbox_disjoint(a.fbox(), b.fbox()):
                continue
            if boundary_intersections(a, b):
                raise Degenerate("final cores cross")
            if b.locate(a.boundary[0]) == 'in' or a.locate(b.boundary[0]) == 'in':
                raise Degenerate("final cores nest")
    for r, core in zip(regions, cores):
        for v in core.boundary:
            if r.locate(v) == 'out':
                raise Degenerate("core vertex escapes its source")


# ---------------------------------------------------------------------------
# vertex costs and the Clarkson-Shor sum


def closed_form_cost(arrangement: Arrangement) -> Fraction:
    """2 * sum over arrangement vertices of w_i*w_j / (w_i + w_j + d_v)."""
    weights = {r.id: r.weight for r in arrangement.regions}
    total = Fraction(0)
    for v in arrangement.vertices:
        i, j = v.defining
        wi, wj = weights[i], weights[j]
        total += wi * wj / (wi + wj + v.depth)
    return 2 * total


def core_vertex_cost(deco: CoreDecomposition, regions: Sequence[Region],
                     arrangement: Optional[Arrangement] = None):
    """(exact sum |v(core_i)| * w_i, analytic expectation of that sum)."""
    if deco.mode != 'disjoint':
        raise ValueError("vertex cost is defined for disjoint decompositions")
    if arrangement is None:
        arrangement = build_arrangement(list(regions))
    weights = {r.id: r.weight for r in regions}
    cost = Fraction(0)
    for rid, core in deco.cores.items():
        cost += core.vertex_count * weights[rid]
    return cost, closed_form_cost(arrangement)


def cs_sum(regions: Sequence[Region], k: Fraction,
           arrangement: Optional[Arrangement] = None) -> Fraction:
    """Sum of w_i*w_j/(w_i+w_j+k) over vertices with k <= d_v < 2k."""
    if k <= 0:
        raise ValueError("k must be positive")
    if arrangement is None:
        arrangement = build_arrangement(list(regions))
    weights = {r.id: r.weight for r in arrangement.regions}
    total = Fraction(0)
    for v in arrangement.vertices:
        if k <= v.depth < 2 * k:
            i, j = v.defining
            total += weights[i] * weights[j] / (weights[i] + weights[j] + k)
    return total


# ---------------------------------------------------------------------------
# verification


def strictly_interior_probes(regions: Sequence[Region], count: int, seed: int,
                             clearance2: Optional[Fraction] = None) -> list[Point]:
    """Random points strictly inside the union and away from all boundaries."""
    rng = random.Random(seed)
    polys = [r for r in regions if r.kind == 'polygon']
    if not polys:
        return []
    if clearance2 is None:
        clearance2 = min_feature_distance2(polys) / Fraction(10 ** 6)
    out = []
    attempts = 0
    while len(out) < count and attempts < count * 200:
        attempts += 1
        host = polys[rng.randrange(len(polys))]
        (x0, y0, x1, y1) = host.bbox()
        px = x0 + Fraction(rng.getrandbits(40), 1 << 40) * (x1 - x0)
        py = y0 + Fraction(rng.getrandbits(40), 1 << 40) * (y1 - y0)
        p = (px, py)
        if host.locate(p) != 'in':
            continue
        clear = True
        from .geometry import _point_segment_dist2
        for r in polys:
            for a, b in r.edges():
                if _point_segment_dist2(p, a, b) <= clearance2:
                    clear = False
                    break
            if not clear:
                break
        if clear:
            out.append(p)
    return out


def verify_core_decomposition(regions: Sequence[Region],
                              deco: CoreDecomposition,
                              points: Sequence[Point] = (),
                              arrangement: Optional[Arrangement] = None) -> dict:
    """Containment, coverage, mode structure and the permutation conditions.

    Returns a report dict; the `violations` list is empty on success.
    """
    regs = list(regions)
    by_id = {r.id: r for r in regs}
    if arrangement is None:
        arrangement = build_arrangement(regs)
    violations = []

    # (1) containment
    for rid, core in deco.cores.items():
        src = by_id[rid]
        if core.region.area2() > src.area2():
            violations.append(('containment', rid, 'area grows'))
        for v in core.region.boundary:
            if src.locate(v) == 'out':
                violations.append(('containment', rid, 'vertex escapes'))
                break

    # (2) coverage of strictly interior probes
    cores = list(deco.cores.values())
    for p in points:
        inside_union = any(r.locate(p) == 'in' for r in regs)
        if not inside_union:
            continue
        if not any(c.region.locate(p) != 'out' for c in cores):
            violations.append(('coverage', None, p))

    # (3) simple connectivity: realized cores are single simple cycles
    from .geometry import polygon_is_simple
    for rid, core in deco.cores.items():
        if not polygon_is_simple(core.region.boundary):
            violations.append(('connectivity', rid, 'not a simple cycle'))

    # (4) mode structure
    core_regions = [c.region for c in cores]
    if deco.mode == 'disjoint':
        for i in range(len(core_regions)):
            for j in range(i + 1, len(core_regions)):
                a, b = core_regions[i], core_regions[j]
                if bbox_disjoint(a.fbox(), b.fbox()):
                    continue
                if boundary_intersections(a, b) or \
                        b.locate(a.boundary[0]) == 'in' or \
                        a.locate(b.boundary[0]) == 'in':
                    violations.append(('disjointness', (a.id, b.id), None))
    elif deco.mode == 'pusher':
        ok, witness = is_pseudodisk_family(core_regions)
        if not ok:
            violations.append(('pseudodisk', witness, None))
        ok, witness = is_cover_free(core_regions)
        if not ok:
            violations.append(('cover-free', witness, None))
        for rid, core in deco.cores.items():
            if rid == deco.pusher_id:
                continue
            pusher = by_id[deco.pusher_id]
            if boundary_intersections(core.region, pusher) or \
                    pusher.locate(core.region.boundary[0]) == 'in':
                violations.append(('pusher-disjoint', rid, None))

    # (5) permutation conditions on every core vertex
    if deco.mode == 'disjoint' and deco.permutation is not None:
        pos = deco.permutation
        containers = _container_index(arrangement)
        for rid, core in deco.cores.items():
            for cv in core.distinct_vertices():
                av = cv.arrangement_vertex
                if av is None:
                    violations.append(('vertex-correspondence', rid, cv.location))
                    continue
                i, j = av.defining
                l = rid
                holders = containers[(av.location, av.defining)]
                if l == i or l == j:
                    other = j if l == i else i
                    if not pos[other] < pos[l]:
                        violations.append(('claim-own', rid, av.location))
                    if holders and not max(pos[i], pos[j]) < min(
                            pos[m] for m in holders):
                        violations.append(('claim-container', rid, av.location))
                else:
                    if l not in holders:
                        violations.append(('claim-membership', rid, av.location))
                    if not max(pos[i], pos[j]) < min(pos[m] for m in holders):
                        violations.append(('claim-order', rid, av.location))
    return {
        'violations': violations,
        'mode': deco.mode,
        'cores': len(deco.cores),
        'rank_conflicts': deco.rank_conflicts,
    }


def _container_index(arrangement: Arrangement):
    """For each vertex: ids of regions strictly containing it."""
    out = {}
    for v in arrangement.vertices:
        holders = []
        for r in arrangement.regions:
            if r.id in v.defining:
                continue
            if r.locate(v.location) == 'in':
                holders.append(r.id)
        out[(v.location, v.defining)] = holders
    return out


# ---------------------------------------------------------------------------
# uniform (net based) decomposition


class NetValidationFailed(GeometryError):
    pass


def uniform_core_decomposition(regions: Sequence[Region], eta: Fraction,
                               seed: int = 0, net_constant: int = 4,
                               max_resample: int = 32,
                               gap_scale: Optional[Fraction] = None
                               ) -> CoreDecomposition:
    """Push along a sampled net, then restore the net members.

    The net is a uniform random sample validated on the instance: every
    arrangement vertex not covered by the net union must have cover count at
    most eta*n. Cores of regions outside the net are disjoint from every net
    member; net members keep their original shape.
    """
    regs = list(regions)
    n = len(regs)
    eta = Fraction(eta)
    if not (0 < eta < 1):
        raise ValueError("eta must lie in (0, 1)")
    arrangement = build_arrangement(regs)
    pair_index = arrangement.by_pair()
    size = min(n, max(1, math.ceil(
        float(net_constant / eta) * max(1.0, math.log2(float(1 / eta))))))
    rng = random.Random(seed)
    ids = [r.id for r in regs]
    by_id = {r.id: r for r in regs}

    net: Optional[list[int]] = None
    for _ in range(max_resample):
        cand = sorted(rng.sample(ids, size))
        if _net_valid(regs, cand, eta, arrangement):
            net = cand
            break
    if net is None:
        raise NetValidationFailed("no valid eta-net sample within the cap")

    base_scale = gap_scale if gap_scale is not None else default_gap_scale(regs)
    for attempt in range(8):
        try:
            current = {r.id: TaggedPolygon.from_region(r) for r in regs}
            scale = base_scale
            order_rest = [rid for rid in ids if rid not in net]
            for step, pusher_id in enumerate(net):
                pusher_poly = current[pusher_id]
                targets = [rid for rid in ids if rid != pusher_id]
                prio = {rid: pos for pos, rid in enumerate(net + order_rest)}
                arcs = {}
                for rid in targets:
                    target = current[rid].to_region(rid, by_id[rid].weight)
                    arcs[rid] = _region_interval(pusher_poly.vertices, target)
                ranks, _, _ = _rank_arcs(arcs, prio)
                for rid in targets:
                    if arcs.get(rid) is None:
                        continue
                    gap = scale * Fraction(ranks[rid], max(n, 2))
                    current[rid] = _subtract(current[rid], pusher_poly, gap)
                scale /= 8 * max(n, 2) ** 2
            # restore net members
            for rid in net:
                current[rid] = TaggedPolygon.from_region(by_id[rid])
            cores = {}
            for r in regs:
                poly = current[r.id]
                cores[r.id] = CoreRegion(
                    source_id=r.id,
                    region=poly.to_region(r.id, r.weight),
                    vertex_list=_junctions(poly, r.id, pair_index))
            deco = CoreDecomposition(mode='uniform', cores=cores,
                                     gap_scale=base_scale,
                                     notes=[('net', tuple(net))])
            return deco
        except Degenerate:
            base_scale /= 4
    raise Degenerate("uniform core decomposition failed at every gap scale")


def _net_valid(regions, net_ids, eta, arrangement) -> bool:
    net_set = set(net_ids)
    n = len(regions)
    by_id = {r.id: r for r in regions}
    for v in arrangement.vertices:
        covered = any(by_id[rid].locate(v.location) != 'out' for rid in net_set)
        if not covered and v.cover_count > eta * n:
            return False
    return True


def uniform_intersection_count(deco: CoreDecomposition) -> int:
    """Total boundary crossings in the realized uniform decomposition."""
    cores = [c.region for c in deco.cores.values()]
    total = 0
    for i in range(len(cores)):
        for j in range(i + 1, len(cores)):
            if bbox_disjoint(cores[i].fbox(), cores[j].fbox()):
                continue
            total += len(boundary_intersections(cores[i], cores[j]))
    return total
