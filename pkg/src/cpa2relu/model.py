"""Piecewise-affine instances: data model, file format, validation,
sparsification and exact evaluation.

An instance is a subdivision of the plane into closed polygonal pieces
(possibly unbounded, possibly with holes) with one affine function per
piece.  Membership of a point in a piece is decided by the crossing
parity of a generic path to the piece's interior witness point.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .errors import (
    ContinuityError,
    DanglingRefError,
    InvalidInputError,
    NoPieceFoundError,
    RetriesExhaustedError,
    SamplingStalledError,
    SchemaError,
)
from .geometry import (
    DEGENERATE,
    Direction,
    EdgeGeom,
    Line,
    Point,
    Rat,
    Ray,
    Segment,
    _crossing_on_edge,
    _hull_intersection,
    cross,
    dot,
    edge_base,
    edge_direction,
    hull_points,
    int_line,
    int_point,
    on_affine_hull,
    on_edge,
    orientation,
    perp,
    rat_from_json,
    rat_to_json,
    same_direction,
    sub,
    translate,
)

N_COVER = 256
MAX_SAMPLE_REJECTS = 10_000
MAX_DENOMINATOR = 1 << 16


@dataclass(frozen=True)
class AffineFunc:
    """f(x, y) = a*x + b*y + c with rational coefficients."""

    a: Rat
    b: Rat
    c: Rat

    def __call__(self, p: Point) -> Rat:
        return self.a * p.x + self.b * p.y + self.c

    def __add__(self, other: "AffineFunc") -> "AffineFunc":
        return AffineFunc(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "AffineFunc") -> "AffineFunc":
        return AffineFunc(self.a - other.a, self.b - other.b, self.c - other.c)

    def __neg__(self) -> "AffineFunc":
        return AffineFunc(-self.a, -self.b, -self.c)

    def scale(self, t: Rat) -> "AffineFunc":
        return AffineFunc(self.a * t, self.b * t, self.c * t)

    def reflect_through(self, v: Point) -> "AffineFunc":
        """The affine map x |-> f(v - x)."""
        return AffineFunc(-self.a, -self.b, self.a * v.x + self.b * v.y + self.c)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def int_form(self) -> tuple[int, int, int, int]:
        """(A, B, C, D) with f = (A*x + B*y + C)/D and D > 0."""
        den = (self.a.denominator * self.b.denominator * self.c.denominator)
        lcm = den
        A = self.a.numerator * (lcm // self.a.denominator)
        B = self.b.numerator * (lcm // self.b.denominator)
        C = self.c.numerator * (lcm // self.c.denominator)
        g = math.gcd(math.gcd(abs(A), abs(B)), math.gcd(abs(C), lcm))
        if g > 1:
            A, B, C, lcm = A // g, B // g, C // g, lcm // g
        return (A, B, C, lcm)

    def to_json(self) -> list:
        return [rat_to_json(self.a), rat_to_json(self.b), rat_to_json(self.c)]

    @classmethod
    def from_json(cls, triple) -> "AffineFunc":
        if not isinstance(triple, list) or len(triple) != 3:
            raise SchemaError(f"affine must be a [a, b, c] triple, got {triple!r}")
        return cls(*(rat_from_json(v) for v in triple))


ARC = "arc"
CYCLE = "cycle"


@dataclass(frozen=True)
class BoundaryComponent:
    kind: str  # ARC or CYCLE
    edges: tuple[str, ...]


@dataclass(frozen=True)
class Piece:
    id: str
    affine: AffineFunc
    boundary: tuple[BoundaryComponent, ...]
    witness: Point


@dataclass(frozen=True)
class EdgeRec:
    id: str
    geom: EdgeGeom
    pieces: tuple[str, str]
    vertex_ids: tuple[str, ...]  # 2 for segments, 1 for rays, 0 for lines


class CPAInstance:
    """A validated-or-not piecewise-affine instance with derived indexes."""

    def __init__(self, vertices: dict[str, Point], edges: dict[str, EdgeRec],
                 pieces: dict[str, Piece]):
        self.vertices = dict(sorted(vertices.items()))
        self.edges = dict(sorted(edges.items()))
        self.pieces = dict(sorted(pieces.items()))
        self.vertex_edges: dict[str, tuple[str, ...]] = {
            vid: () for vid in self.vertices}
        for eid, e in self.edges.items():
            for vid in e.vertex_ids:
                self.vertex_edges[vid] = self.vertex_edges.get(vid, ()) + (eid,)
        self.piece_edges: dict[str, tuple[str, ...]] = {}
        for pid, piece in self.pieces.items():
            seen = []
            for comp in piece.boundary:
                seen.extend(comp.edges)
            self.piece_edges[pid] = tuple(sorted(set(seen)))
        self.piece_vertices: dict[str, tuple[str, ...]] = {}
        for pid, eids in self.piece_edges.items():
            vs: set[str] = set()
            for eid in eids:
                vs.update(self.edges[eid].vertex_ids)
            self.piece_vertices[pid] = tuple(sorted(vs))
        # caches filled lazily
        self._int_lines: dict[str, tuple[int, int, int]] = {}
        self._bbox: tuple[Rat, Rat, Rat, Rat] | None = None
        self.cone_cache: dict = {}
        self.halfplane_cache: dict = {}
        self.clearance_cache: dict = {}

    @property
    def p(self) -> int:
        return len(self.pieces)

    def int_line(self, eid: str) -> tuple[int, int, int]:
        L = self._int_lines.get(eid)
        if L is None:
            L = int_line(self.edges[eid].geom)
            self._int_lines[eid] = L
        return L

    def piece_degree(self, pid: str, vid: str) -> int:
        return sum(1 for eid in self.vertex_edges[vid]
                   if eid in set(self.piece_edges[pid]))

    def bbox(self) -> tuple[Rat, Rat, Rat, Rat]:
        """Axis box spanning twice the instance's coordinate extent."""
        if self._bbox is not None:
            return self._bbox
        pts = list(self.vertices.values())
        pts.extend(p.witness for p in self.pieces.values())
        for e in self.edges.values():
            pts.append(edge_base(e.geom))
        xs = [q.x for q in pts]
        ys = [q.y for q in pts]
        xmin, xmax = min(xs), max(xs)
        ymin, ymax = min(ys), max(ys)
        w = xmax - xmin
        h = ymax - ymin
        pad_x = w / 2 if w else Fraction(1)
        pad_y = h / 2 if h else Fraction(1)
        self._bbox = (xmin - pad_x, ymin - pad_y, xmax + pad_x, ymax + pad_y)
        return self._bbox


# ---------------------------------------------------------------------------
# Parsing and serialization

def _parse_point(value, what: str) -> Point:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError(f"{what} must be an [x, y] pair, got {value!r}")
    return Point(rat_from_json(value[0]), rat_from_json(value[1]))


def _parse_direction(value, what: str) -> Direction:
    p = _parse_point(value, what)
    if p.x == 0 and p.y == 0:
        raise SchemaError(f"{what} must be nonzero")
    return Direction(p.x, p.y)


def parse_instance(doc) -> CPAInstance:
    """Build an instance from a JSON document (dict or source string).

    Structural problems raise SchemaError; references to missing ids
    raise DanglingRefError.  Semantic problems (broken cover, torn
    continuity, bad witnesses) are left to validate().
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("instance document must be a JSON object")
    for key in ("vertices", "edges", "pieces"):
        if key not in doc or not isinstance(doc[key], dict):
            raise SchemaError(f"missing or malformed {key!r} table")

    vertices = {str(vid): _parse_point(v, f"vertex {vid}")
                for vid, v in doc["vertices"].items()}

    edges: dict[str, EdgeRec] = {}
    for eid, e in doc["edges"].items():
        eid = str(eid)
        if not isinstance(e, dict):
            raise SchemaError(f"edge {eid} must be an object")
        kind = e.get("kind")
        if kind == "segment":
            for f in ("a", "b"):
                if f not in e:
                    raise SchemaError(f"segment {eid} missing {f!r}")
            a, b = str(e["a"]), str(e["b"])
            for vid in (a, b):
                if vid not in vertices:
                    raise DanglingRefError(f"edge {eid} references vertex {vid}")
            if vertices[a] == vertices[b]:
                raise SchemaError(f"segment {eid} has coincident endpoints")
            geom: EdgeGeom = Segment(vertices[a], vertices[b])
            vids: tuple[str, ...] = (a, b)
        elif kind == "ray":
            if "v" not in e or "d" not in e:
                raise SchemaError(f"ray {eid} missing 'v' or 'd'")
            v = str(e["v"])
            if v not in vertices:
                raise DanglingRefError(f"edge {eid} references vertex {v}")
            geom = Ray(vertices[v], _parse_direction(e["d"], f"ray {eid} direction"))
            vids = (v,)
        elif kind == "line":
            if "p" not in e or "d" not in e:
                raise SchemaError(f"line {eid} missing 'p' or 'd'")
            geom = Line(_parse_point(e["p"], f"line {eid} base point"),
                        _parse_direction(e["d"], f"line {eid} direction"))
            vids = ()
        else:
            raise SchemaError(f"edge {eid} has unknown kind {kind!r}")
        ps = e.get("pieces")
        if not isinstance(ps, list) or len(ps) != 2:
            raise SchemaError(f"edge {eid} must list exactly two pieces")
        p0, p1 = str(ps[0]), str(ps[1])
        if p0 == p1:
            raise SchemaError(f"edge {eid} lists the same piece on both sides")
        edges[eid] = EdgeRec(eid, geom, (p0, p1), vids)

    pieces: dict[str, Piece] = {}
    for pid, p in doc["pieces"].items():
        pid = str(pid)
        if not isinstance(p, dict):
            raise SchemaError(f"piece {pid} must be an object")
        if "affine" not in p or "witness" not in p:
            raise SchemaError(f"piece {pid} missing 'affine' or 'witness'")
        affine = AffineFunc.from_json(p["affine"])
        witness = _parse_point(p["witness"], f"piece {pid} witness")
        comps = []
        for comp in p.get("boundary", []):
            if not isinstance(comp, dict) or "kind" not in comp or "edges" not in comp:
                raise SchemaError(f"piece {pid} has a malformed boundary component")
            kind = comp["kind"]
            if kind not in (ARC, CYCLE):
                raise SchemaError(f"piece {pid}: unknown component kind {kind!r}")
            ceids = [str(x) for x in comp["edges"]]
            if not ceids:
                raise SchemaError(f"piece {pid} has an empty boundary component")
            for ceid in ceids:
                if ceid not in edges:
                    raise DanglingRefError(f"piece {pid} references edge {ceid}")
            comps.append(BoundaryComponent(kind, tuple(ceids)))
        pieces[pid] = Piece(pid, affine, tuple(comps), witness)

    for eid, e in edges.items():
        for pid in e.pieces:
            if pid not in pieces:
                raise DanglingRefError(f"edge {eid} references piece {pid}")
    if not pieces:
        raise SchemaError("instance has no pieces")
    return CPAInstance(vertices, edges, pieces)


def serialize_instance(inst: CPAInstance) -> dict:
    """Canonical JSON form; parse_instance round-trips it exactly."""
    doc: dict = {"vertices": {}, "edges": {}, "pieces": {}}
    for vid, v in sorted(inst.vertices.items()):
        doc["vertices"][vid] = [rat_to_json(v.x), rat_to_json(v.y)]
    for eid, e in sorted(inst.edges.items()):
        g = e.geom
        if isinstance(g, Segment):
            rec = {"kind": "segment", "a": e.vertex_ids[0], "b": e.vertex_ids[1]}
        elif isinstance(g, Ray):
            rec = {"kind": "ray", "v": e.vertex_ids[0],
                   "d": [rat_to_json(g.d.dx), rat_to_json(g.d.dy)]}
        else:
            rec = {"kind": "line",
                   "p": [rat_to_json(g.p.x), rat_to_json(g.p.y)],
                   "d": [rat_to_json(g.d.dx), rat_to_json(g.d.dy)]}
        rec["pieces"] = list(e.pieces)
        doc["edges"][eid] = rec
    for pid, piece in sorted(inst.pieces.items()):
        doc["pieces"][pid] = {
            "affine": piece.affine.to_json(),
            "witness": [rat_to_json(piece.witness.x), rat_to_json(piece.witness.y)],
            "boundary": [{"kind": c.kind, "edges": list(c.edges)}
                         for c in piece.boundary],
        }
    return doc


def instance_to_json(inst: CPAInstance) -> str:
    return json.dumps(serialize_instance(inst), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Membership by crossing parity

def _path_parity(inst: CPAInstance, edge_ids, path: list[Point]):
    """Crossing parity of a polyline against a set of edges.

    Returns 0/1, or DEGENERATE when an interior path vertex or a whole
    path segment lies on some hull, or a crossing hits an edge endpoint.
    A path *endpoint* merely touching a hull (while off the edge itself)
    contributes nothing and is fine.
    """
    ipath = [int_point(q) for q in path]
    count = 0
    for eid in edge_ids:
        A, B, C = inst.int_line(eid)
        sides = [kernels.line_sign(A, B, C, *ip) for ip in ipath]
        if any(s == 0 for s in sides[1:-1]):
            return DEGENERATE
        geom = inst.edges[eid].geom
        for i in range(len(path) - 1):
            s0, s1 = sides[i], sides[i + 1]
            if s0 == 0 and s1 == 0:
                return DEGENERATE
            if s0 == 0 or s1 == 0 or s0 == s1:
                continue
            z = _hull_intersection(geom, path[i], path[i + 1])
            c = _crossing_on_edge(geom, z)
            if c is DEGENERATE:
                return DEGENERATE
            count += c
    return count & 1


def _random_box_point(inst: CPAInstance, rng: random.Random,
                      max_den: int = 256) -> Point:
    xmin, ymin, xmax, ymax = inst.bbox()
    coords = []
    for lo, hi in ((xmin, xmax), (ymin, ymax)):
        den = rng.randint(2, max_den)
        nlo = -((-lo.numerator * den) // lo.denominator)
        nhi = (hi.numerator * den) // hi.denominator
        if nlo > nhi:
            nlo = nhi
        coords.append(Fraction(rng.randint(nlo, nhi), den))
    return Point(*coords)


def _member_core(inst: CPAInstance, pid: str, x: Point, seed: int = 0,
                 retries: int = 32) -> bool:
    """Parity membership of x in a piece.  x must be off the boundary."""
    piece = inst.pieces[pid]
    w = piece.witness
    if x == w:
        return True
    edge_ids = inst.piece_edges[pid]
    path = [x, w]
    rng: random.Random | None = None
    for _ in range(retries):
        par = _path_parity(inst, edge_ids, path)
        if par is not DEGENERATE:
            return par == 0
        if rng is None:
            rng = random.Random(seed)
        via = _random_box_point(inst, rng)
        if via == x or via == w:
            continue
        path = [x, via, w]
    raise RetriesExhaustedError(
        f"no generic path from {x} to witness of piece {pid}")


def _pieces_at(inst: CPAInstance, x: Point) -> dict[str, Rat]:
    """Pieces touching x through an edge or vertex, with their values."""
    found: dict[str, Rat] = {}
    ip = int_point(x)
    for eid, e in inst.edges.items():
        A, B, C = inst.int_line(eid)
        if kernels.line_sign(A, B, C, *ip) != 0:
            continue
        if on_edge(x, e.geom):
            for pid in e.pieces:
                found[pid] = inst.pieces[pid].affine(x)
    return found


def eval_cpa(inst: CPAInstance, x: Point) -> Rat:
    """Exact value of the instance's function at x.

    Points on edges are evaluated through every incident piece and the
    values are cross-checked; interior points go through the membership
    oracle.
    """
    touching = _pieces_at(inst, x)
    if touching:
        vals = set(touching.values())
        if len(vals) != 1:
            raise ContinuityError(
                f"incident pieces disagree at {x}: {sorted(touching.items())}")
        return vals.pop()
    matches = [pid for pid in inst.pieces if _member_core(inst, pid, x)]
    if len(matches) != 1:
        raise NoPieceFoundError(
            f"point {x} lies in {len(matches)} pieces; the cover is broken")
    return inst.pieces[matches[0]].affine(x)


def _sample_off_hulls(inst: CPAInstance, rng: random.Random, n: int,
                      max_den: int = MAX_DENOMINATOR) -> list[Point]:
    """n random rational points in the doubled bounding box, rejecting
    any point on an edge hull.  Raises SamplingStalledError when stuck."""
    xmin, ymin, xmax, ymax = inst.bbox()
    lines = [inst.int_line(eid) for eid in inst.edges]
    out: list[Point] = []
    rejects = 0
    while len(out) < n:
        coords = []
        for lo, hi in ((xmin, xmax), (ymin, ymax)):
            den = rng.randint(1, max_den)
            nlo = -((-lo.numerator * den) // lo.denominator)
            nhi = (hi.numerator * den) // hi.denominator
            if nlo > nhi:
                nlo = nhi
            coords.append(Fraction(rng.randint(nlo, nhi), den))
        q = Point(*coords)
        ip = int_point(q)
        if any(kernels.line_sign(A, B, C, *ip) == 0 for (A, B, C) in lines):
            rejects += 1
            if rejects >= MAX_SAMPLE_REJECTS:
                raise SamplingStalledError(
                    f"{rejects} consecutive rejections while sampling")
            continue
        rejects = 0
        out.append(q)
    return out


# ---------------------------------------------------------------------------
# Validation

@dataclass
class CheckResult:
    name: str
    passed: bool
    failures: list[str] = field(default_factory=list)


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "checks": [{"name": c.name, "passed": c.passed,
                            "failures": c.failures} for c in self.checks]}


def _edge_param_interval(g: EdgeGeom, base: Point, d: Direction):
    """Parameter interval of g on the common line (base, d); caller
    guarantees collinearity.  Returns (lo, hi) with None for infinite."""
    if isinstance(g, Segment):
        ta = dot(sub(g.a, base), d)
        tb = dot(sub(g.b, base), d)
        return (min(ta, tb), max(ta, tb))
    if isinstance(g, Ray):
        tv = dot(sub(g.v, base), d)
        if dot(g.d, d) > 0:
            return (tv, None)
        return (None, tv)
    return (None, None)


def _edges_intersect_cleanly(g1: EdgeGeom, g2: EdgeGeom,
                             allowed: set[Point]) -> str | None:
    """None when the two edge point sets meet only at allowed points;
    otherwise a description of the offending overlap."""
    d1, d2 = edge_direction(g1), edge_direction(g2)
    p1, p2 = edge_base(g1), edge_base(g2)
    c = cross(d1, d2)
    if c != 0:
        t = cross(sub(p2, p1), d2) / c
        z = translate(p1, d1, t)
        if on_edge(z, g1) and on_edge(z, g2) and z not in allowed:
            return f"edges cross at {z}"
        return None
    if not on_affine_hull(p2, g1):
        return None
    lo1, hi1 = _edge_param_interval(g1, p1, d1)
    lo2, hi2 = _edge_param_interval(g2, p1, d1)
    lo = lo1 if lo2 is None else lo2 if lo1 is None else max(lo1, lo2)
    hi = hi1 if hi2 is None else hi2 if hi1 is None else min(hi1, hi2)
    if lo is None or hi is None or lo < hi:
        return "edges overlap along a common line"
    if lo > hi:
        return None
    z = translate(p1, d1, lo / dot(d1, d1))
    if z not in allowed:
        return f"collinear edges touch at non-vertex {z}"
    return None


def _chain_check(inst: CPAInstance, pid: str, comp: BoundaryComponent) -> list[str]:
    """Well-formedness of one boundary component's edge chain."""
    errs: list[str] = []
    recs = [inst.edges[eid] for eid in comp.edges]
    kinds = [type(r.geom).__name__ for r in recs]
    where = f"piece {pid} component {list(comp.edges)}"
    if comp.kind == CYCLE:
        if len(recs) < 3:
            return [f"{where}: cycle needs at least 3 edges"]
        if any(k != "Segment" for k in kinds):
            return [f"{where}: cycles may only contain segments"]
    else:
        if len(recs) == 1 and kinds[0] == "Line":
            return []
        if len(recs) < 2 or kinds[0] != "Ray" or kinds[-1] != "Ray":
            return [f"{where}: arc must be a single line or start and end in rays"]
        if any(k != "Segment" for k in kinds[1:-1]):
            return [f"{where}: arc interior may only contain segments"]
    junctions = []
    pairs = list(zip(recs, recs[1:]))
    if comp.kind == CYCLE:
        pairs.append((recs[-1], recs[0]))
    for r1, r2 in pairs:
        shared = set(r1.vertex_ids) & set(r2.vertex_ids)
        if len(shared) != 1:
            errs.append(f"{where}: {r1.id} and {r2.id} do not chain")
            return errs
        junctions.append(shared.pop())
    if len(set(junctions)) != len(junctions):
        errs.append(f"{where}: chain revisits a vertex")
    for i, rec in enumerate(recs):
        if comp.kind == CYCLE:
            expect = {junctions[i - 1], junctions[i]}
        else:
            if i == 0:
                expect = {junctions[0]}
            elif i == len(recs) - 1:
                expect = {junctions[-1]}
            else:
                expect = {junctions[i - 1], junctions[i]}
        if set(rec.vertex_ids) != expect:
            errs.append(f"{where}: edge {rec.id} endpoints break the chain")
    return errs


def validate(inst: CPAInstance, n_cover: int = N_COVER,
             seed: int = 0) -> ValidationReport:
    """Run all instance admissibility checks and collect the outcomes."""
    checks: list[CheckResult] = []

    # (a) continuity: adjacent affines agree on each edge's hull
    fails: list[str] = []
    for eid, e in inst.edges.items():
        q, r = (inst.pieces[pid].affine for pid in e.pieces)
        for pt_ in hull_points(e.geom):
            if q(pt_) != r(pt_):
                fails.append(f"edge {eid}: affines differ at {pt_}")
                break
    checks.append(CheckResult("continuity", not fails, fails))

    # (b) each edge bounds exactly its two declared pieces
    fails = []
    listed: dict[str, set[str]] = {eid: set() for eid in inst.edges}
    for pid, piece in inst.pieces.items():
        for comp in piece.boundary:
            for eid in comp.edges:
                listed[eid].add(pid)
    for eid, e in inst.edges.items():
        if listed[eid] != set(e.pieces):
            fails.append(f"edge {eid}: declared pieces {sorted(e.pieces)} but "
                         f"appears in boundaries of {sorted(listed[eid])}")
    checks.append(CheckResult("edge_pieces", not fails, fails))

    # (c) vertex consistency
    fails = []
    for vid in inst.vertices:
        if not inst.vertex_edges.get(vid):
            fails.append(f"vertex {vid} is not used by any edge")
    by_coord: dict[Point, str] = {}
    for vid, v in inst.vertices.items():
        if v in by_coord:
            fails.append(f"vertices {by_coord[v]} and {vid} coincide at {v}")
        by_coord[v] = vid
    checks.append(CheckResult("vertex_consistency", not fails, fails))

    # (d) boundary component well-formedness and clean edge intersections
    fails = []
    for pid, piece in inst.pieces.items():
        seen: set[str] = set()
        for comp in piece.boundary:
            fails.extend(_chain_check(inst, pid, comp))
            for eid in comp.edges:
                if eid in seen:
                    fails.append(f"piece {pid}: edge {eid} repeated in boundary")
                seen.add(eid)
    eids = sorted(inst.edges)
    for i, e1 in enumerate(eids):
        r1 = inst.edges[e1]
        for e2 in eids[i + 1:]:
            r2 = inst.edges[e2]
            shared = {inst.vertices[v] for v in set(r1.vertex_ids) & set(r2.vertex_ids)}
            msg = _edges_intersect_cleanly(r1.geom, r2.geom, shared)
            if msg is not None:
                fails.append(f"{e1} vs {e2}: {msg}")
    for pid, piece in inst.pieces.items():
        w = piece.witness
        for eid in inst.edges:
            if on_affine_hull(w, inst.edges[eid].geom):
                fails.append(f"piece {pid}: witness {w} lies on hull of {eid}")
                break
    checks.append(CheckResult("boundary_components", not fails, fails))

    # (e) witnesses of distinct pieces are separated by the boundary
    fails = []
    pids = sorted(inst.pieces)
    for pid in pids:
        for qid in pids:
            if pid == qid:
                continue
            try:
                inside = _member_core(inst, pid, inst.pieces[qid].witness,
                                      seed=seed)
            except RetriesExhaustedError:
                fails.append(f"no generic path between witnesses of {pid}, {qid}")
                continue
            if inside:
                fails.append(f"witness of {qid} is not separated from {pid}")
    checks.append(CheckResult("witness_separation", not fails, fails))

    # (f) random general-position points belong to exactly one piece
    fails = []
    try:
        samples = _sample_off_hulls(inst, random.Random(seed), n_cover)
    except SamplingStalledError as exc:
        samples = []
        fails.append(str(exc))
    for q in samples:
        hits = [pid for pid in pids if _member_core(inst, pid, q, seed=seed)]
        if len(hits) != 1:
            fails.append(f"point {q} lies in pieces {hits}")
            if len(fails) > 5:
                break
    checks.append(CheckResult("cover", not fails, fails))

    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# Sparsification

def _merged_geom(g1: EdgeGeom, g2: EdgeGeom, at: Point) -> EdgeGeom:
    """Join two collinear edges sharing the vertex at; the vertex goes away."""
    if isinstance(g1, Ray) and isinstance(g2, Ray):
        if not (cross(g1.d, g2.d) == 0 and dot(g1.d, g2.d) < 0):
            raise InvalidInputError("degree-2 rays are not opposite")
        return Line(at, g1.d)
    if isinstance(g2, Segment) and not isinstance(g1, Segment):
        g1, g2 = g2, g1
    a = g1.b if g1.a == at else g1.a
    if isinstance(g2, Segment):
        b = g2.b if g2.a == at else g2.a
        if orientation(a, at, b) != 0 or dot(sub(a, at), sub(b, at)) >= 0:
            raise InvalidInputError("degree-2 segments are not collinear")
        return Segment(a, b)
    if not same_direction(sub(at, a), g2.d):
        raise InvalidInputError("degree-2 segment and ray are not collinear")
    return Ray(a, g2.d)


def _trace_components(edges: dict[str, tuple[EdgeGeom, tuple[str, ...]]],
                      parity,
                      ) -> list[BoundaryComponent]:
    """Recover the boundary components of a piece from its edge set.

    parity(probe) must return True when probe lies inside the piece.
    Edges are oriented with the piece on the left, walked with the
    usual clockwise-next turn rule, and the resulting closed or
    bi-infinite walks are split into simple components at repeated
    vertices.
    """
    from .geometry import dist_sq_point_edge, shrink_to_disk

    geoms = {eid: g for eid, (g, _) in edges.items()}
    vids = {eid: vs for eid, (_, vs) in edges.items()}
    vertex_pts: dict[str, Point] = {}
    for eid, g in geoms.items():
        if isinstance(g, Segment):
            vertex_pts[vids[eid][0]] = g.a
            vertex_pts[vids[eid][1]] = g.b
        elif isinstance(g, Ray):
            vertex_pts[vids[eid][0]] = g.v

    def midpoint(g: EdgeGeom) -> Point:
        if isinstance(g, Segment):
            return Point((g.a.x + g.b.x) / 2, (g.a.y + g.b.y) / 2)
        return translate(edge_base(g), edge_direction(g))

    # orient every edge with the piece on its left
    forward: dict[str, bool] = {}
    components: list[BoundaryComponent] = []
    for eid in sorted(geoms):
        g = geoms[eid]
        if isinstance(g, Line):
            components.append(BoundaryComponent(ARC, (eid,)))
            continue
        m = midpoint(g)
        clear = None
        for oid, og in geoms.items():
            if oid == eid:
                continue
            d2 = dist_sq_point_edge(m, og)
            clear = d2 if clear is None else min(clear, d2)
        for vp in vertex_pts.values():
            d2 = sub(m, vp).dx ** 2 + sub(m, vp).dy ** 2
            if d2 > 0:
                clear = d2 if clear is None else min(clear, d2)
        if clear is None:
            clear = Fraction(1)
        off = shrink_to_disk(perp(edge_direction(g)), clear / 4)
        left = Point(m.x + off.dx, m.y + off.dy)
        forward[eid] = parity(left)

    # half-edge walk
    def tail_head(eid: str) -> tuple[str | None, str | None]:
        g = geoms[eid]
        if isinstance(g, Segment):
            a, b = vids[eid]
            return (a, b) if forward[eid] else (b, a)
        v = vids[eid][0]
        return (v, None) if forward[eid] else (None, v)

    def travel_dir(eid: str) -> Direction:
        d = edge_direction(geoms[eid])
        return d if forward[eid] else -d

    outgoing: dict[str, list[str]] = {}
    for eid in forward:
        t, _ = tail_head(eid)
        if t is not None:
            outgoing.setdefault(t, []).append(eid)

    def next_edge(eid: str) -> str | None:
        _, head = tail_head(eid)
        if head is None:
            return None
        rev = -travel_dir(eid)
        cands = outgoing.get(head, [])
        if not cands:
            raise InvalidInputError(f"boundary walk dead-ends at vertex {head}")
        # largest CCW angle from rev == first direction clockwise of rev

        def angle_key(ceid: str):
            d = travel_dir(ceid)
            if same_direction(rev, d):
                return (0, 0)
            c = cross(rev, d)
            if c > 0:
                return (1, d)
            if c == 0:
                return (2, 0)
            return (3, d)

        best = None
        for ceid in sorted(cands):
            if best is None:
                best = ceid
                continue
            ka, kb = angle_key(best), angle_key(ceid)
            if kb[0] > ka[0]:
                best = ceid
            elif kb[0] == ka[0] and kb[0] in (1, 3):
                if cross(travel_dir(best), travel_dir(ceid)) > 0:
                    best = ceid
        return best

    used: set[str] = set()

    def walk(start: str, closed: bool):
        stack: list[tuple[str, str | None]] = []
        seen: dict[str, int] = {}
        if closed:
            t, _ = tail_head(start)
            seen[t] = -1
        eid: str | None = start
        while eid is not None:
            if eid in used:
                raise InvalidInputError("boundary walk reuses an edge")
            used.add(eid)
            _, head = tail_head(eid)
            stack.append((eid, head))
            if head is None:
                break
            if head in seen:
                i = seen[head]
                cyc = stack[i + 1:]
                del stack[i + 1:]
                for _, u in cyc[:-1]:
                    if u is not None:
                        seen.pop(u, None)
                components.append(BoundaryComponent(
                    CYCLE, tuple(e for e, _ in cyc)))
                if i == -1 and closed:
                    return
            else:
                seen[head] = len(stack) - 1
            eid = next_edge(eid)
        if stack:
            components.append(BoundaryComponent(ARC, tuple(e for e, _ in stack)))

    # arcs start at inbound rays, cycles at any unused segment half-edge
    for eid in sorted(forward):
        g = geoms[eid]
        if isinstance(g, Ray) and eid not in used:
            t, _ = tail_head(eid)
            if t is None:
                walk(eid, closed=False)
    for eid in sorted(forward):
        if eid not in used and not isinstance(geoms[eid], Line):
            walk(eid, closed=True)
    return components


def sparsify(inst: CPAInstance, *, skip_validation: bool = False) -> CPAInstance:
    """Collapse redundant structure without changing the function.

    Neighbouring pieces carrying the same affine are merged (their common
    edges vanish), then every remaining degree-2 vertex joins its two
    collinear incident edges.  The result has no degree-2 vertices,
    at most the original number of pieces, and at most 3p edges.
    """
    if not skip_validation:
        report = validate(inst)
        if not report.ok:
            bad = [c.name for c in report.checks if not c.passed]
            raise InvalidInputError(f"instance fails validation: {bad}")

    vertices = dict(inst.vertices)
    egeom: dict[str, EdgeGeom] = {eid: e.geom for eid, e in inst.edges.items()}
    evids: dict[str, tuple[str, ...]] = {eid: e.vertex_ids for eid, e in inst.edges.items()}
    epieces: dict[str, tuple[str, str]] = {eid: e.pieces for eid, e in inst.edges.items()}
    paffine = {pid: p.affine for pid, p in inst.pieces.items()}
    pwitness = {pid: p.witness for pid, p in inst.pieces.items()}
    pcomps: dict[str, list[BoundaryComponent] | None] = {
        pid: list(p.boundary) for pid, p in inst.pieces.items()}

    def piece_edge_set(pid: str) -> list[str]:
        return sorted(e for e, ps in epieces.items() if pid in ps)

    # pass 1: merge pieces joined by an edge whose two affines coincide
    while True:
        hit = None
        for eid in sorted(epieces):
            a, b = epieces[eid]
            if paffine[a] == paffine[b]:
                hit = (eid, a, b)
                break
        if hit is None:
            break
        _, a, b = hit
        keep, drop = sorted((a, b))
        shared = [e for e, ps in epieces.items() if set(ps) == {a, b}]
        for e in shared:
            del egeom[e], evids[e], epieces[e]
        for e, ps in list(epieces.items()):
            epieces[e] = tuple(keep if q == drop else q for q in ps)
        del paffine[drop], pwitness[drop], pcomps[drop]
        pcomps[keep] = None  # boundary must be retraced
        used_vs = {v for vs in evids.values() for v in vs}
        for vid in list(vertices):
            if vid not in used_vs:
                del vertices[vid]

    # pass 2: remove degree-2 vertices whose incident edges are collinear.
    # A degree-2 vertex with a genuine corner (square corners, say) stays.
    def _away_dir(g: EdgeGeom, at: Point) -> Direction:
        if isinstance(g, Segment):
            other = g.b if g.a == at else g.a
            return sub(other, at)
        assert isinstance(g, Ray)
        return g.d

    counter = 0
    while True:
        deg: dict[str, list[str]] = {v: [] for v in vertices}
        for eid, vs in evids.items():
            for v in vs:
                deg[v].append(eid)
        target = None
        for vid in sorted(deg):
            if len(deg[vid]) != 2:
                continue
            f1, f2 = (_away_dir(egeom[e], vertices[vid]) for e in sorted(deg[vid]))
            if cross(f1, f2) == 0 and dot(f1, f2) < 0:
                target = vid
                break
        if target is None:
            break
        e1, e2 = sorted(deg[target])
        if set(epieces[e1]) != set(epieces[e2]):
            raise InvalidInputError(
                f"degree-2 vertex {target} separates different piece pairs")
        merged = _merged_geom(egeom[e1], egeom[e2], vertices[target])
        while f"m{counter}" in egeom:
            counter += 1
        mid = f"m{counter}"
        counter += 1
        new_vids = tuple(v for v in (*evids[e1], *evids[e2]) if v != target)
        egeom[mid] = merged
        evids[mid] = new_vids
        epieces[mid] = epieces[e1]
        for pid in set(epieces[e1]):
            comps = pcomps[pid]
            if comps is None:
                continue
            out = []
            for comp in comps:
                es = list(comp.edges)
                if e1 in es or e2 in es:
                    es = _splice_pair(es, comp.kind, e1, e2, mid)
                out.append(BoundaryComponent(comp.kind, tuple(es)))
            pcomps[pid] = out
        del egeom[e1], evids[e1], epieces[e1]
        del egeom[e2], evids[e2], epieces[e2]
        del vertices[target]

    # retrace boundaries of merged pieces
    pieces: dict[str, Piece] = {}
    for pid in sorted(paffine):
        comps = pcomps[pid]
        if comps is None:
            eset = {e: (egeom[e], evids[e]) for e in piece_edge_set(pid)}
            w = pwitness[pid]

            def parity(probe: Point, _w=w, _es=sorted(eset)) -> bool:
                return _parity_probe(egeom, _es, probe, _w)

            comps = _trace_components(eset, parity)
        pieces[pid] = Piece(pid, paffine[pid], tuple(comps), pwitness[pid])

    edges = {eid: EdgeRec(eid, egeom[eid], epieces[eid], evids[eid])
             for eid in egeom}
    return CPAInstance(vertices, edges, pieces)


def _splice_pair(es: list[str], kind: str, e1: str, e2: str, mid: str) -> list[str]:
    """Replace the adjacent pair e1, e2 in a component chain by mid."""
    n = len(es)
    for i, e in enumerate(es):
        if e not in (e1, e2):
            continue
        j = (i + 1) % n
        if es[j] in (e1, e2) and es[j] != e and (kind == CYCLE or j != 0):
            out = [x for k, x in enumerate(es) if k not in (i, j)]
            out.insert(min(i, j) if (kind == ARC or j != 0) else 0, mid)
            if kind == CYCLE and len(out) < 3:
                raise InvalidInputError("cycle degenerated during merge")
            return out
    raise InvalidInputError(f"edges {e1}, {e2} are not adjacent in {es}")


def _parity_probe(egeom: dict[str, EdgeGeom], edge_ids: list[str],
                  x: Point, w: Point, retries: int = 32) -> bool:
    """Standalone parity membership for a raw edge set (sparsify helper)."""
    from .geometry import crossing_count

    if x == w:
        return True
    rng = random.Random(7)
    path = [x, w]
    for _ in range(retries):
        total = 0
        ok = True
        for eid in edge_ids:
            c = crossing_count(path, egeom[eid])
            if c is DEGENERATE:
                ok = False
                break
            total += c
        if ok:
            return total % 2 == 0
        span = max(abs(x.x), abs(x.y), abs(w.x), abs(w.y), Fraction(1))
        via = Point(Fraction(rng.randint(-4 * span.numerator, 4 * span.numerator),
                             span.denominator * rng.randint(2, 64)),
                    Fraction(rng.randint(-4 * span.numerator, 4 * span.numerator),
                             span.denominator * rng.randint(2, 64)))
        if via != x and via != w:
            path = [x, via, w]
    raise RetriesExhaustedError("no generic probe path during boundary retrace")
