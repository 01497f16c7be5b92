"""Decomposition of a piecewise-affine function into local building
blocks: one angular fan per vertex, one half-plane pair per segment or
line edge, and an affine tail.

The signed sum of these blocks reproduces the function exactly:

    f = sum of fans + sum over line edges - sum over segment edges + tail

where the tail collects c(P) * f_P over all pieces.  Ray edges carry no
block of their own; their contribution is absorbed by the vertex fans.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContinuityError, InvalidInputError
from .geometry import (
    Direction,
    Line,
    Point,
    Rat,
    Ray,
    Segment,
    ccw_sort_directions,
    in_ccw_sector,
    rat_to_json,
    same_direction,
    sector_midpoint_direction,
    shrink_to_disk,
    sub,
    translate,
)
from .model import AffineFunc, CPAInstance, _member_core
from .sides import conic_coeff, edge_halfplane, vertex_clearance_sq


@dataclass(frozen=True)
class Fan:
    """A function that is affine on each angular sector around a center.

    rays are in strict CCW order; sector i spans rays[i] to
    rays[(i+1) % k] and carries sector_affines[i].
    """

    center: Point
    rays: tuple[Direction, ...]
    sector_affines: tuple[AffineFunc, ...]

    def __post_init__(self):
        if len(self.rays) != len(self.sector_affines):
            raise InvalidInputError("fan needs one affine per sector")
        if len(self.rays) < 2:
            raise InvalidInputError("fan needs at least two rays")


def validate_fan(fan: Fan) -> None:
    """Adjacent sector affines must agree along their shared ray."""
    k = len(fan.rays)
    for i in range(k):
        d = fan.rays[i]
        prev = fan.sector_affines[i - 1]
        cur = fan.sector_affines[i]
        for q in (fan.center, translate(fan.center, d)):
            if prev(q) != cur(q):
                raise ContinuityError(
                    f"fan sectors {i - 1} and {i} disagree at {q}")


def eval_fan(fan: Fan, x: Point) -> Rat:
    """Value of the fan at x; points on rays take the first CCW sector
    touching them (continuity makes the choice irrelevant)."""
    u = sub(x, fan.center)
    if u.dx == 0 and u.dy == 0:
        return fan.sector_affines[0](x)
    k = len(fan.rays)
    for i in range(k):
        if same_direction(fan.rays[i], u) or \
                in_ccw_sector(fan.rays[i], fan.rays[(i + 1) % k], u):
            return fan.sector_affines[i](x)
    raise InvalidInputError(f"no sector of fan at {fan.center} contains {x}")


@dataclass(frozen=True)
class EdgePair:
    """A two-piece function split by a line: plus_side_affine on
    {boundary >= 0}, minus_side_affine on the other closed half-plane.
    sign is +1 when the source edge was a full line, -1 for a segment."""

    boundary: AffineFunc
    plus_side_affine: AffineFunc
    minus_side_affine: AffineFunc
    sign: int


def eval_edge_pair(pair: EdgePair, x: Point) -> Rat:
    if pair.boundary(x) >= 0:
        return pair.plus_side_affine(x)
    return pair.minus_side_affine(x)


@dataclass(frozen=True)
class Decomposition:
    fans: tuple[Fan, ...]
    edge_pairs: tuple[EdgePair, ...]
    tail: AffineFunc


def build_vertex_function(inst: CPAInstance, vertex_id: str,
                          seed: int = 0) -> Fan:
    """The fan agreeing with the instance on a small disk around the
    vertex: one ray per incident edge, one probed piece per sector."""
    v = inst.vertices[vertex_id]
    incident = inst.vertex_edges[vertex_id]
    dirs = []
    candidates: set[str] = set()
    for eid in incident:
        e = inst.edges[eid]
        g = e.geom
        if isinstance(g, Segment):
            other = g.b if g.a == v else g.a
            dirs.append(sub(other, v))
        else:
            dirs.append(g.d)
        candidates.update(e.pieces)
    order = ccw_sort_directions(v, dirs)
    dirs = [dirs[i] for i in order]
    r2 = vertex_clearance_sq(inst, vertex_id)
    affines = []
    for i, start in enumerate(dirs):
        end = dirs[(i + 1) % len(dirs)]
        mid = sector_midpoint_direction(start, end)
        off = shrink_to_disk(mid, r2 / 4)
        probe = Point(v.x + off.dx, v.y + off.dy)
        owners = [pid for pid in sorted(candidates)
                  if _member_core(inst, pid, probe, seed=seed)]
        if len(owners) != 1:
            raise InvalidInputError(
                f"sector probe {probe} at vertex {vertex_id} hit "
                f"{len(owners)} pieces")
        affines.append(inst.pieces[owners[0]].affine)
    fan = Fan(v, tuple(dirs), tuple(affines))
    validate_fan(fan)
    return fan


def build_edge_function(inst: CPAInstance, edge_id: str) -> EdgePair:
    """The two-affine function agreeing with the instance across an
    edge.  Only segments and lines qualify."""
    e = inst.edges[edge_id]
    if isinstance(e.geom, Ray):
        raise InvalidInputError(
            f"edge {edge_id} is a ray; rays have no edge function")
    q_id, r_id = e.pieces
    hp_q = edge_halfplane(inst, q_id, edge_id)
    plus_id, minus_id = (q_id, r_id) if hp_q.side > 0 else (r_id, q_id)
    return EdgePair(
        boundary=hp_q.boundary,
        plus_side_affine=inst.pieces[plus_id].affine,
        minus_side_affine=inst.pieces[minus_id].affine,
        sign=1 if isinstance(e.geom, Line) else -1,
    )


def _check_sparsified(inst: CPAInstance) -> None:
    for eid, e in inst.edges.items():
        a, b = e.pieces
        if inst.pieces[a].affine == inst.pieces[b].affine:
            raise InvalidInputError(
                f"edge {eid} separates equal affines; sparsify first")
    for vid, eids in inst.vertex_edges.items():
        if len(eids) < 3:
            raise InvalidInputError(
                f"vertex {vid} has degree {len(eids)}; sparsify first")


def decompose(inst: CPAInstance, seed: int = 0) -> Decomposition:
    """Assemble fans, edge pairs and the affine tail for an instance.

    The instance must already be sparsified; redundant vertices or
    edges would duplicate contributions.
    """
    _check_sparsified(inst)
    fans = tuple(build_vertex_function(inst, vid, seed=seed)
                 for vid in sorted(inst.vertices))
    pairs = tuple(build_edge_function(inst, eid)
                  for eid in sorted(inst.edges)
                  if not isinstance(inst.edges[eid].geom, Ray))
    tail = AffineFunc(Fraction(0), Fraction(0), Fraction(0))
    for pid in sorted(inst.pieces):
        c = conic_coeff(inst, pid).c
        if c:
            tail = tail + inst.pieces[pid].affine.scale(Fraction(c))
    return Decomposition(fans, pairs, tail)


def eval_decomposition(dec: Decomposition, x: Point) -> Rat:
    total = dec.tail(x)
    for fan in dec.fans:
        total += eval_fan(fan, x)
    for pair in dec.edge_pairs:
        total += pair.sign * eval_edge_pair(pair, x)
    return total


# ---------------------------------------------------------------------------
# JSON dump (CLI inspection format)

def _affine_json(f: AffineFunc) -> list:
    return f.to_json()


def decomposition_to_json(dec: Decomposition) -> dict:
    return {
        "fans": [
            {
                "center": [rat_to_json(f.center.x), rat_to_json(f.center.y)],
                "rays": [[rat_to_json(d.dx), rat_to_json(d.dy)] for d in f.rays],
                "sector_affines": [_affine_json(a) for a in f.sector_affines],
            }
            for f in dec.fans
        ],
        "edge_pairs": [
            {
                "boundary": _affine_json(p.boundary),
                "plus": _affine_json(p.plus_side_affine),
                "minus": _affine_json(p.minus_side_affine),
                "sign": p.sign,
            }
            for p in dec.edge_pairs
        ],
        "tail": _affine_json(dec.tail),
    }
