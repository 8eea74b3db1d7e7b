"""Triangle dissections of balanced polygons and their dual balanced graphs.

Pipeline: orient everything clockwise, scale to integer coordinates, pair the
boundary edges, split triangle sides at T-vertices by inserting zero-area
faces, glue paired boundary sub-segments, and read off the dual graph.  Each
dual vertex of a genuine triangle of area S has multiplicity v2(2S).
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import INF, PlaneVector, as_scalar, cross, format_scalar, format_valuation, val2
from .errors import (
    AreaMismatch,
    AuditFailure,
    CoverageMismatch,
    DissectionError,
    InvalidInput,
    NotBalancedPolygon,
    OrientationConflict,
)
from .graph import BalancedGraph, Edge, census, lemma1_audit, vertex_multiplicity

REPORT_SCHEMA = "stein-report/1"

Point = PlaneVector


def twice_signed_area(points) -> object:
    """Shoelace sum; negative for clockwise order."""
    n = len(points)
    return as_scalar(sum(cross(points[i], points[(i + 1) % n]) for i in range(n)))


def _dot(u, v):
    return u.x * v.x + u.y * v.y


def strictly_inside(p: Point, a: Point, b: Point) -> bool:
    ab, ap = b - a, p - a
    if cross(ab, ap) != 0:
        return False
    t = _dot(ap, ab)
    return 0 < t < _dot(ab, ab)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    return p == a or p == b or strictly_inside(p, a, b)


@dataclass
class Dissection:
    polygon: list
    triangles: list
    pairing: list | None = None
    reoriented_polygon: bool = False
    reoriented_triangles: int = 0

    def __post_init__(self):
        self.polygon = [Point.of(*p) for p in self.polygon]
        self.triangles = [tuple(Point.of(*p) for p in t) for t in self.triangles]
        if len(self.polygon) < 3:
            raise DissectionError("polygon needs at least 3 vertices")
        if any(len(t) != 3 for t in self.triangles):
            raise DissectionError("every piece must have exactly 3 vertices")
        a = twice_signed_area(self.polygon)
        if a == 0:
            raise DissectionError("polygon has zero area")
        if a > 0:
            n = len(self.polygon)
            self.polygon = self.polygon[::-1]
            self.reoriented_polygon = True
            if self.pairing is not None:
                # old edge i (p_i -> p_{i+1}) is new edge n-2-i, reversed
                self.pairing = [((n - 2 - i) % n, (n - 2 - j) % n) for i, j in self.pairing]
        tris = []
        for t in self.triangles:
            if twice_signed_area(t) > 0:
                t = (t[0], t[2], t[1])
                self.reoriented_triangles += 1
            tris.append(t)
        self.triangles = tris

    def edge(self, i):
        n = len(self.polygon)
        return self.polygon[i], self.polygon[(i + 1) % n]

    def edge_vector(self, i) -> Point:
        a, b = self.edge(i)
        return b - a

    def scaled(self, lam) -> "Dissection":
        return Dissection([p * lam for p in self.polygon],
                          [tuple(p * lam for p in t) for t in self.triangles],
                          self.pairing)

    def to_json(self):
        obj = {
            "polygon": [p.to_json() for p in self.polygon],
            "triangles": [[p.to_json() for p in t] for t in self.triangles],
        }
        if self.pairing is not None:
            obj["pairing"] = [list(p) for p in self.pairing]
        return obj

    @classmethod
    def from_json(cls, obj) -> "Dissection":
        try:
            polygon = [Point.from_json(p) for p in obj["polygon"]]
            triangles = [tuple(Point.from_json(p) for p in t) for t in obj["triangles"]]
            pairing = obj.get("pairing")
            if pairing is not None:
                pairing = [(int(i), int(j)) for i, j in pairing]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise DissectionError(f"malformed dissection JSON: {exc}") from None
        return cls(polygon, triangles, pairing)


def normalize_to_integers(D: Dissection):
    """Scale by the lcm of all denominators; return (dissection, scale)."""
    scale = 1
    for p in D.polygon + [q for t in D.triangles for q in t]:
        for c in p:
            scale = math.lcm(scale, Fraction(c).denominator)
    if scale == 1:
        return D, 1
    return D.scaled(scale), scale


def balanced_pairing(D: Dissection):
    """Pair each boundary edge with an edge carrying the negated vector."""
    n = len(D.polygon)
    vecs = [D.edge_vector(i) for i in range(n)]
    if D.pairing is not None:
        used = set()
        for i, j in D.pairing:
            if not (0 <= i < n and 0 <= j < n) or i == j or i in used or j in used:
                raise NotBalancedPolygon(f"pairing ({i}, {j}) is not a valid edge matching",
                                         edge=i)
            if vecs[i] != -vecs[j]:
                raise NotBalancedPolygon(f"edges {i} and {j} are not opposite translates",
                                         edge=i)
            used |= {i, j}
        if len(used) != n:
            missing = min(set(range(n)) - used)
            raise NotBalancedPolygon(f"edge {missing} is unpaired", edge=missing)
        return [tuple(p) for p in D.pairing]

    matched = [None] * n
    pairs = []
    for i in range(n):
        if matched[i] is not None:
            continue
        j = next((j for j in range(i + 1, n) if matched[j] is None and vecs[j] == -vecs[i]), None)
        if j is None:
            raise NotBalancedPolygon(f"boundary edge {i} {vecs[i].to_json()} has no opposite partner",
                                     edge=i)
        matched[i], matched[j] = j, i
        pairs.append((i, j))
    return pairs


@dataclass
class GluedTriangulation:
    """Faces (input triangles first, then inserted zero-area faces) and their gluing.

    A side is addressed as (face index, k) and runs faces[f][k] -> faces[f][k+1].
    ``gluing`` is an involution on sides; ``kind`` tags each side as
    "interior", "boundary" or "link" (a parent side matched to its inserted
    degenerate face).
    """

    polygon: list
    faces: list
    input_count: int
    pairing: list
    gluing: dict
    kind: dict
    translations: dict = field(default_factory=dict)

    @property
    def inserted_count(self) -> int:
        return len(self.faces) - self.input_count

    def side(self, s):
        f, k = s
        pts = self.faces[f]
        return pts[k], pts[(k + 1) % 3]

    def side_vector(self, s) -> Point:
        a, b = self.side(s)
        return b - a

    def face_area2(self, f):
        """Twice the (unsigned) area of face ``f``."""
        return abs(twice_signed_area(self.faces[f]))


def _split_points(D: Dissection, pairs, translations):
    base = set(D.polygon)
    for t in D.triangles:
        base.update(t)
    pts = set(base)
    for i, j in pairs:
        for src, dst in ((i, j), (j, i)):
            a, b = D.edge(src)
            shift = translations[src]
            for p in base:
                if on_segment(p, a, b):
                    pts.add(p + shift)
    return pts


def validate_and_glue(D: Dissection, pairs=None) -> GluedTriangulation:
    if pairs is None:
        pairs = balanced_pairing(D)
    n = len(D.polygon)
    # translation carrying edge i onto its partner (start of i -> end of partner)
    translations = {}
    for i, j in pairs:
        translations[i] = D.edge(j)[1] - D.edge(i)[0]
        translations[j] = D.edge(i)[1] - D.edge(j)[0]
    split_at = _split_points(D, pairs, translations)

    faces = [tuple(t) for t in D.triangles]
    input_count = len(faces)
    gluing, kind = {}, {}
    atomic = []
    for f in range(input_count):
        for k in range(3):
            a, b = faces[f][k], faces[f][(k + 1) % 3]
            inner = [p for p in split_at if strictly_inside(p, a, b)]
            inner.sort(key=lambda p: _dot(p - a, b - a))
            current, start = (f, k), a
            for p in inner:
                faces.append((start, p, b))
                d = len(faces) - 1
                gluing[current], gluing[(d, 2)] = (d, 2), current
                kind[current] = kind[(d, 2)] = "link"
                atomic.append((d, 0))
                current, start = (d, 1), p
            atomic.append(current)

    by_key = defaultdict(list)
    for s in atomic:
        f, k = s
        by_key[(faces[f][k], faces[f][(k + 1) % 3])].append(s)

    edge_of = {}
    for (p, q) in by_key:
        for i in range(n):
            a, b = D.edge(i)
            if on_segment(p, a, b) and on_segment(q, a, b):
                if _dot(q - p, b - a) < 0:
                    raise OrientationConflict(
                        f"side {p.to_json()}->{q.to_json()} runs against the boundary", edge=i)
                edge_of[(p, q)] = i
                break

    matches = []
    for key, own in by_key.items():
        p, q = key
        if key in edge_of:
            shift = translations[edge_of[key]]
            partner_key, tag = (q + shift, p + shift), "boundary"
        else:
            partner_key, tag = (q, p), "interior"
        matches.append((key, own, by_key.get(partner_key, []), tag))

    def _complaint(key, own, partner):
        p, q = key
        return (f"segment {p.to_json()}-{q.to_json()} occurs {len(own)} times forward and "
                f"{len(partner)} times backward"), [p.to_json(), q.to_json()]

    for key, own, partner, _ in matches:
        if len(own) + len(partner) != 2:
            msg, seg = _complaint(key, own, partner)
            raise CoverageMismatch(msg, segment=seg)
    for key, own, partner, tag in matches:
        if len(own) != 1:
            msg, seg = _complaint(key, own, partner)
            raise OrientationConflict(msg, segment=seg)
        gluing[own[0]] = partner[0]
        kind[own[0]] = tag

    for s, t in gluing.items():
        if gluing.get(t) != s:
            raise CoverageMismatch("gluing is not an involution")

    total = sum(twice_signed_area(faces[f]) for f in range(input_count))
    if total != twice_signed_area(D.polygon):
        raise AreaMismatch(f"faces cover area {format_scalar(-as_scalar(total) / 2)} but the polygon "
                           f"has {format_scalar(-twice_signed_area(D.polygon) / 2)}")
    return GluedTriangulation(list(D.polygon), faces, input_count, list(pairs), gluing, kind,
                              translations)


def face_id(f) -> str:
    return f"f{f}"


def build_dual(T: GluedTriangulation) -> BalancedGraph:
    """One vertex per face, one edge per glued pair of sides.

    The dart into face F carries F's own (clockwise) side vector.
    """
    edges = []
    for s in sorted(T.gluing):
        t = T.gluing[s]
        if t < s:
            continue
        edges.append(Edge(f"g{len(edges)}", face_id(t[0]), face_id(s[0]), T.side_vector(s)))
    return BalancedGraph([face_id(f) for f in range(len(T.faces))], edges)


@dataclass
class SteinReport:
    triangle_count: int
    areas: list
    common_area: object
    scale: int
    inserted_degenerate: int
    multiplicities: dict
    census: dict
    all_equal_areas: bool
    nondegenerate_count: int
    parity_holds: bool
    reoriented_polygon: bool = False
    reoriented_triangles: int = 0
    certificate: dict | None = None

    @property
    def nondegenerate_parity(self) -> str:
        return "even" if self.nondegenerate_count % 2 == 0 else "odd"

    @property
    def conclusion(self) -> str:
        if self.all_equal_areas:
            return (f"equal areas; {self.nondegenerate_count} triangles "
                    f"({self.nondegenerate_parity}); parity holds")
        return "areas unequal; parity holds" if self.parity_holds else "areas unequal"

    def to_json(self):
        obj = {
            "schema": REPORT_SCHEMA,
            "triangle_count": self.triangle_count,
            "areas": [format_scalar(a) for a in self.areas],
            "common_area": None if self.common_area is None else format_scalar(self.common_area),
            "scale": self.scale,
            "inserted_degenerate": self.inserted_degenerate,
            "multiplicities": {k: format_valuation(v) for k, v in self.multiplicities.items()},
            "census": self.census,
            "all_equal_areas": self.all_equal_areas,
            "nondegenerate_count": self.nondegenerate_count,
            "nondegenerate_parity": self.nondegenerate_parity,
            "parity_holds": self.parity_holds,
            "reoriented_polygon": self.reoriented_polygon,
            "reoriented_triangles": self.reoriented_triangles,
            "conclusion": self.conclusion,
        }
        if self.certificate is not None:
            obj["certificate"] = self.certificate
        return obj


def dual_of(D: Dissection):
    """Run the pipeline up to the dual graph; returns (glued, dual, scale)."""
    Dn, scale = normalize_to_integers(D)
    glued = validate_and_glue(Dn, balanced_pairing(Dn))
    return glued, build_dual(glued), scale


def stein_check(D: Dissection, *, certificate=False) -> SteinReport:
    glued, G, scale = dual_of(D)
    lemma1_audit(G)
    mult = {face_id(f): vertex_multiplicity(G, face_id(f)) for f in range(len(glued.faces))}

    area2 = [glued.face_area2(f) for f in range(glued.input_count)]
    for f in range(len(glued.faces)):
        a2 = glued.face_area2(f) if f < glued.input_count else 0
        expected = val2(a2) if a2 else INF
        if mult[face_id(f)] != expected:
            raise AuditFailure(f"face {f}: multiplicity {mult[face_id(f)]} but v2(2S) = {expected}",
                               clause="multiplicity-formula", face=f)
    nondeg = [a for a in area2 if a != 0]
    equal = bool(nondeg) and all(a == nondeg[0] for a in nondeg)
    c = census(G)
    if equal and len(nondeg) % 2:
        raise AuditFailure("odd number of equal-area triangles", clause="equal-area-parity")
    if not c.even:
        raise AuditFailure("dual graph has an odd number of minimal vertices", clause="census-parity")

    def original(a2):
        return as_scalar(Fraction(a2, 2) / (scale * scale))

    report = SteinReport(
        triangle_count=glued.input_count,
        areas=[original(a) for a in area2],
        common_area=original(nondeg[0]) if equal else None,
        scale=scale,
        inserted_degenerate=glued.inserted_count,
        multiplicities=mult,
        census=c.summary(),
        all_equal_areas=equal,
        nondegenerate_count=len(nondeg),
        parity_holds=c.even,
        reoriented_polygon=D.reoriented_polygon,
        reoriented_triangles=D.reoriented_triangles,
    )
    if certificate:
        from .reduction import reduce_and_certify

        report.certificate = reduce_and_certify(G).to_json()
    return report


def render_svg(glued: GluedTriangulation, multiplicities: dict, size: int = 480) -> str:
    """SVG drawing of the input faces, each labelled with its dual multiplicity."""
    xs = [float(p.x) for p in glued.polygon]
    ys = [float(p.y) for p in glued.polygon]
    span_ = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    pad = 20
    k = (size - 2 * pad) / span_

    def tx(p):
        return pad + (float(p.x) - min(xs)) * k, size - pad - (float(p.y) - min(ys)) * k

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    poly = " ".join("%.2f,%.2f" % tx(p) for p in glued.polygon)
    out.append(f'<polygon points="{poly}" fill="none" stroke="black" stroke-width="2"/>')
    for f in range(glued.input_count):
        pts = glued.faces[f]
        coords = [tx(p) for p in pts]
        out.append('<polygon points="%s" fill="#eef" stroke="#446" stroke-width="1"/>'
                   % " ".join("%.2f,%.2f" % c for c in coords))
        cx = sum(c[0] for c in coords) / 3
        cy = sum(c[1] for c in coords) / 3
        m = format_valuation(multiplicities[face_id(f)])
        out.append(f'<text x="{cx:.2f}" y="{cy:.2f}" font-size="12" text-anchor="middle">{m}</text>')
    out.append("</svg>")
    return "\n".join(out)
