"""Parity certificates: data model, JSON form and an independent checker.

The checker replays a certificate against its input graph using only the
graph/lattice primitives.  It never calls the reduction engine: cycles,
maximal lattices and rebalanced vectors are read from the certificate and
verified, not recomputed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dyadic import INF, PlaneVector, format_valuation, is_primitive, parse_valuation
from .errors import AuditFailure, InvalidInput
from .graph import BalancedGraph, census, vertex_lattice, vertex_multiplicity
from .lattice import DyadicLattice, equals, includes, multiplicity

CERTIFICATE_SCHEMA = "parity-certificate/1"

BASE_CASE_M0 = "BaseCaseM0"
ALL_INFINITE = "AllInfinite"
CYCLES_ONLY = "CyclesOnly"
HALVE = "Halve"

REASONS = {
    BASE_CASE_M0: "primitive-subgraph handshake (M=0)",
    ALL_INFINITE: "global handshake (M=inf)",
    CYCLES_ONLY: "cycles account for all minimal vertices",
    HALVE: "descent to smaller instance",
}


def primitive_degree_counts(G: BalancedGraph):
    """(V2, V3, E) of the subgraph made of primitive edges."""
    v2 = v3 = 0
    for v in G.vertices:
        k = sum(is_primitive(w) for w in G.incoming_vectors(v))
        v2 += k == 2
        v3 += k == 3
    e = sum(is_primitive(e.b) for e in G.edges)
    return v2, v3, e


@dataclass
class CycleRecord:
    vertices: list
    edges: list  # [edge id, forward] per cycle step
    max_lattice: DyadicLattice
    max_multiplicity: object
    equal_count: int
    rebalanced: dict  # edge id -> new stored vector

    def to_json(self):
        return {
            "length": len(self.vertices),
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "max_lattice": self.max_lattice.to_json(),
            "max_multiplicity": format_valuation(self.max_multiplicity),
            "equal_count": self.equal_count,
            "rebalanced": {k: v.to_json() for k, v in self.rebalanced.items()},
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            vertices=list(obj["vertices"]),
            edges=[[str(e), bool(f)] for e, f in obj["edges"]],
            max_lattice=DyadicLattice.from_json(obj["max_lattice"]),
            max_multiplicity=parse_valuation(obj["max_multiplicity"]),
            equal_count=int(obj["equal_count"]),
            rebalanced={k: PlaneVector.from_json(v) for k, v in obj["rebalanced"].items()},
        )


@dataclass
class Round:
    index: int
    before: dict
    branch: str = ""
    cycles: list = field(default_factory=list)
    after: dict | None = None
    handshake: dict | None = None

    def to_json(self):
        return {
            "round": self.index,
            "before": self.before,
            "branch": self.branch,
            "reason": REASONS.get(self.branch, ""),
            "cycles": [c.to_json() for c in self.cycles],
            "after": self.after,
            "handshake": self.handshake,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            index=int(obj["round"]),
            before=dict(obj["before"]),
            branch=obj["branch"],
            cycles=[CycleRecord.from_json(c) for c in obj.get("cycles", [])],
            after=obj.get("after"),
            handshake=obj.get("handshake"),
        )


@dataclass
class ParityCertificate:
    input_digest: str
    rounds: list = field(default_factory=list)
    conclusion: dict | None = None

    @property
    def reason(self) -> str:
        return REASONS[self.rounds[-1].branch] if self.rounds else ""

    @property
    def branches(self):
        return [r.branch for r in self.rounds]

    def to_json(self):
        return {
            "schema": CERTIFICATE_SCHEMA,
            "input_digest": self.input_digest,
            "rounds": [r.to_json() for r in self.rounds],
            "conclusion": self.conclusion,
            "reason": self.reason,
        }

    @classmethod
    def from_json(cls, obj):
        try:
            if obj.get("schema") != CERTIFICATE_SCHEMA:
                raise InvalidInput(f"unknown certificate schema {obj.get('schema')!r}")
            return cls(
                input_digest=obj["input_digest"],
                rounds=[Round.from_json(r) for r in obj["rounds"]],
                conclusion=obj["conclusion"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed certificate: {exc}") from None


def _fail(msg, rnd=None, **kw):
    raise AuditFailure(msg, clause="certificate", round=rnd, **kw)


def _check_cycles(G: BalancedGraph, rnd: Round, M):
    prim = {e.id for e in G.edges if is_primitive(e.b)}
    used_edges, used_vertices = set(), set()
    contributed = 0
    for rec in rnd.cycles:
        n = len(rec.vertices)
        if n == 0 or len(rec.edges) != n:
            _fail("cycle record has inconsistent lengths", rnd.index)
        for i, (eid, forward) in enumerate(rec.edges):
            if eid not in prim or eid in used_edges:
                _fail(f"edge {eid} is not a fresh primitive edge", rnd.index)
            e = G.edge_map[eid]
            tail, head = (e.tail, e.head) if forward else (e.head, e.tail)
            if tail != rec.vertices[i] or head != rec.vertices[(i + 1) % n]:
                _fail(f"edge {eid} does not join consecutive cycle vertices", rnd.index)
            used_edges.add(eid)
        if used_vertices & set(rec.vertices) or len(set(rec.vertices)) != n:
            _fail("cycles are not vertex-disjoint simple cycles", rnd.index)
        used_vertices |= set(rec.vertices)

        L = rec.max_lattice
        if multiplicity(L) != rec.max_multiplicity:
            _fail("recorded maximal multiplicity is wrong", rnd.index)
        lattices = [vertex_lattice(G, v) for v in rec.vertices]
        if not all(includes(L, Lv) for Lv in lattices):
            _fail("maximal lattice does not contain every vertex lattice", rnd.index)
        if rec.max_multiplicity == INF:
            equal = 0
            if any(vertex_multiplicity(G, v) != INF for v in rec.vertices):
                _fail("rank-1 maximal lattice on a cycle with a finite vertex", rnd.index)
        else:
            equal = sum(equals(Lv, L) for Lv in lattices)
            if equal == 0:
                _fail("maximal lattice is not attained on the cycle", rnd.index)
        if equal != rec.equal_count or equal % 2:
            _fail(f"equal-lattice count {rec.equal_count} is wrong or odd", rnd.index)
        if rec.max_multiplicity == M:
            contributed += equal
        if set(rec.rebalanced) != {eid for eid, _ in rec.edges}:
            _fail("rebalanced vectors must cover exactly the cycle edges", rnd.index)
    if used_edges != prim:
        _fail("cycles do not cover every primitive edge", rnd.index)
    return used_vertices, contributed


def verify_certificate(G: BalancedGraph, cert: ParityCertificate) -> dict:
    """Re-check ``cert`` against ``G``; return the verified census summary."""
    if cert.input_digest != G.digest():
        _fail("certificate was issued for a different graph")
    if not cert.rounds:
        _fail("certificate has no rounds")
    direct = census(G)
    current = G
    carried = 0
    for k, rnd in enumerate(cert.rounds):
        last = k == len(cert.rounds) - 1
        if rnd.index != k:
            _fail("round numbering is off", k)
        c = census(current)
        if c.summary() != rnd.before:
            _fail(f"census before round {k} does not match", k)
        M = c.minimum
        terminal_branch = rnd.branch in (BASE_CASE_M0, ALL_INFINITE, CYCLES_ONLY)
        if terminal_branch != last:
            _fail(f"branch {rnd.branch} in the wrong position", k)

        if rnd.branch == BASE_CASE_M0:
            v2, v3, e = primitive_degree_counts(current)
            if M != 0 or rnd.handshake != {"V2": v2, "V3": v3, "E": e}:
                _fail("base case data does not match", k)
            if 2 * v2 + 3 * v3 != 2 * e or v3 != c.count:
                _fail("base case handshake fails", k)
            carried += v3
            break
        if rnd.branch == ALL_INFINITE:
            nv, ne = len(current.vertices), len(current.edges)
            if M != INF or 3 * nv != 2 * ne or rnd.handshake != {"V": nv, "E": ne}:
                _fail("global handshake data does not match", k)
            carried += nv
            break
        if rnd.branch not in (CYCLES_ONLY, HALVE) or M in (0, INF):
            _fail(f"unexpected branch {rnd.branch!r} at M={format_valuation(M)}", k)

        on_cycle, contributed = _check_cycles(current, rnd, M)
        new_b = {}
        for rec in rnd.cycles:
            new_b.update(rec.rebalanced)
        rebalanced = current.with_vectors(new_b)  # re-validates balance
        if any(is_primitive(e.b) for e in rebalanced.edges):
            _fail("rebalanced graph still has a primitive edge", k)
        after = census(rebalanced)
        if after.summary() != rnd.after:
            _fail("census after rebalancing does not match", k)
        off = [v for v in c.argmin if v not in on_cycle]
        if c.count != contributed + len(off):
            _fail("minimal-vertex ledger does not add up", k)
        carried += contributed
        if rnd.branch == CYCLES_ONLY:
            if off:
                _fail("CyclesOnly round leaves minimal vertices off the cycles", k)
            break
        if after.minimum != M or after.count != len(off):
            _fail("halving round does not carry the off-cycle minimum", k)
        current = rebalanced.map_vectors(lambda b: b.halved())
        h = census(current)
        if h.minimum != M - 2 or h.argmin != after.argmin:
            _fail("halving did not shift multiplicities by 2", k)

    if carried != direct.count or carried % 2:
        _fail(f"ledger total {carried} does not certify the direct count {direct.count}")
    if cert.conclusion != direct.summary():
        _fail("recorded conclusion does not match the direct census")
    return direct.summary()
