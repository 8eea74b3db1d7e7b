"""Balanced 3-valent multigraphs.

Each undirected edge stores one vector, the value of the balancing function
on its tail->head dart; the head->tail dart carries the negation.  Loops and
parallel edges are allowed.
"""
from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

from .dyadic import (
    INF,
    ZERO,
    PlaneVector,
    cross,
    format_valuation,
    is_primitive,
    is_two_integral_vector,
    val2,
)
from .errors import (
    AuditFailure,
    CycleStructureViolation,
    InvalidGraph,
    NotThreeValent,
    NotTwoIntegral,
    UnbalancedVertex,
)
from .lattice import DyadicLattice, includes, span

GRAPH_SCHEMA = "balanced-graph/1"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    b: PlaneVector

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class Dart(NamedTuple):
    """An edge traversed tail->head (``forward``) or head->tail."""

    edge: str
    forward: bool

    def reverse(self) -> "Dart":
        return Dart(self.edge, not self.forward)


class BalancedGraph:
    """A validated balanced graph.  Treat instances as immutable."""

    def __init__(self, vertices, edges, *, check=True):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.edge_map = {e.id: e for e in self.edges}
        self._order = {v: i for i, v in enumerate(self.vertices)}
        self._incoming = defaultdict(list)
        if len(self._order) != len(self.vertices):
            raise InvalidGraph("duplicate vertex id")
        if len(self.edge_map) != len(self.edges):
            raise InvalidGraph("duplicate edge id")
        for e in self.edges:
            for end in (e.tail, e.head):
                if end not in self._order:
                    raise InvalidGraph(f"edge {e.id} references unknown vertex {end!r}", edge=e.id)
            if not is_two_integral_vector(e.b):
                raise NotTwoIntegral(f"edge {e.id} vector is not 2-integral", edge=e.id)
            self._incoming[e.head].append(Dart(e.id, True))
            self._incoming[e.tail].append(Dart(e.id, False))
        if check:
            validate(self)

    def order(self, v) -> int:
        return self._order[v]

    def incoming(self, v):
        """The darts terminating at ``v``."""
        return self._incoming[v]

    def head(self, d: Dart):
        e = self.edge_map[d.edge]
        return e.head if d.forward else e.tail

    def tail(self, d: Dart):
        e = self.edge_map[d.edge]
        return e.tail if d.forward else e.head

    def vector(self, d: Dart) -> PlaneVector:
        b = self.edge_map[d.edge].b
        return b if d.forward else -b

    def incoming_vectors(self, v):
        return [self.vector(d) for d in self._incoming[v]]

    def with_vectors(self, new_b, *, check=True) -> "BalancedGraph":
        """Copy with some edge vectors replaced (``new_b``: edge id -> vector)."""
        edges = [Edge(e.id, e.tail, e.head, new_b.get(e.id, e.b)) for e in self.edges]
        return BalancedGraph(self.vertices, edges, check=check)

    def map_vectors(self, fn, *, check=True) -> "BalancedGraph":
        edges = [Edge(e.id, e.tail, e.head, fn(e.b)) for e in self.edges]
        return BalancedGraph(self.vertices, edges, check=check)

    def to_json(self):
        return {
            "schema": GRAPH_SCHEMA,
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "b": e.b.to_json()}
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, obj, *, check=True) -> "BalancedGraph":
        try:
            vertices = [str(v) for v in obj["vertices"]]
            edges = [
                Edge(str(e["id"]), str(e["tail"]), str(e["head"]), PlaneVector.from_json(e["b"]))
                for e in obj["edges"]
            ]
        except (KeyError, TypeError):
            raise InvalidGraph("graph JSON must have 'vertices' and 'edges' with id/tail/head/b") from None
        return cls(vertices, edges, check=check)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self):
        return f"BalancedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


def validate(G: BalancedGraph) -> None:
    """Raise on the first vertex that is not 3-valent or not balanced."""
    for v in G.vertices:
        darts = G.incoming(v)
        if len(darts) != 3:
            raise NotThreeValent(f"vertex {v!r} has {len(darts)} darts", vertex=v, degree=len(darts))
        total = ZERO
        for d in darts:
            total = total + G.vector(d)
        if not total.is_zero():
            raise UnbalancedVertex(f"vertex {v!r} does not balance", vertex=v,
                                   residual=total.to_json())


def vertex_lattice(G: BalancedGraph, v) -> DyadicLattice:
    a, b, _ = G.incoming_vectors(v)
    return span(a, b)


def vertex_multiplicity(G: BalancedGraph, v):
    a, b, _ = G.incoming_vectors(v)
    return val2(cross(a, b))


def is_primitive_vertex(G: BalancedGraph, v) -> bool:
    return any(is_primitive(w) for w in G.incoming_vectors(v))


@dataclass
class VertexCensus:
    multiplicity: dict
    minimum: object
    argmin: tuple = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.argmin)

    @property
    def even(self) -> bool:
        return self.count % 2 == 0

    @property
    def parity(self) -> str:
        return "even" if self.even else "odd"

    def summary(self):
        return {"M": format_valuation(self.minimum), "count": self.count, "parity": self.parity}

    def to_json(self):
        return {
            **self.summary(),
            "argmin": list(self.argmin),
            "multiplicities": {v: format_valuation(m) for v, m in self.multiplicity.items()},
        }


def census(G: BalancedGraph) -> VertexCensus:
    mult = {v: vertex_multiplicity(G, v) for v in G.vertices}
    lowest = min(mult.values(), default=INF)
    argmin = tuple(v for v in G.vertices if mult[v] == lowest)
    return VertexCensus(mult, lowest, argmin)


def lemma1_audit(G: BalancedGraph) -> None:
    """Multiplicity 0 <=> three primitive darts; otherwise an even number."""
    for v in G.vertices:
        m = vertex_multiplicity(G, v)
        k = sum(is_primitive(w) for w in G.incoming_vectors(v))
        if (m == 0 and k != 3) or (m != 0 and k % 2):
            raise AuditFailure(f"vertex {v!r}: multiplicity {m} with {k} primitive darts",
                               vertex=v, clause="primitive-count")


def primitive_edges(G: BalancedGraph):
    return [e for e in G.edges if is_primitive(e.b)]


def edge_nesting_audit(G: BalancedGraph) -> int:
    """Along a primitive edge the higher-multiplicity end has the smaller lattice.

    Returns the number of primitive edges checked.
    """
    n = 0
    for e in primitive_edges(G):
        n += 1
        if e.is_loop:
            continue
        mv, mw = vertex_multiplicity(G, e.tail), vertex_multiplicity(G, e.head)
        hi, lo = (e.tail, e.head) if mv >= mw else (e.head, e.tail)
        if not includes(vertex_lattice(G, lo), vertex_lattice(G, hi)):
            raise AuditFailure(f"edge {e.id}: L({hi}) not inside L({lo})", edge=e.id, clause="edge-nesting")
    return n


@dataclass
class PrimitiveCycle:
    """A cycle of primitive edges.

    ``edges[i]`` is the dart v_i -> v_{i+1}; ``outgoing[i]`` is the third
    dart terminating at v_i.
    """

    vertices: list
    edges: list
    outgoing: list

    def __len__(self):
        return len(self.vertices)


def primitive_cycles(G: BalancedGraph):
    """Split the primitive edges into vertex-disjoint cycles.

    Requires every vertex to carry 0 or 2 primitive darts, which holds
    whenever the minimal multiplicity is positive.
    """
    prim = {}
    for v in G.vertices:
        darts = [d for d in G.incoming(v) if is_primitive(G.vector(d))]
        if len(darts) not in (0, 2):
            raise CycleStructureViolation(
                f"vertex {v!r} has {len(darts)} primitive darts", vertex=v)
        if darts:
            prim[v] = darts

    seen = set()
    cycles = []
    for start in G.vertices:
        if start not in prim or start in seen:
            continue
        verts, steps, outs = [], [], []
        v, arrive = start, None
        while True:
            seen.add(v)
            pair = prim[v]
            if arrive is None:
                leave = pair[0].reverse()
            else:
                leave = next((d.reverse() for d in pair if d != arrive), None)
                if leave is None:
                    raise CycleStructureViolation(f"cannot continue cycle at {v!r}", vertex=v)
            third = [d for d in G.incoming(v) if d not in pair]
            if len(third) != 1:
                raise CycleStructureViolation(f"vertex {v!r} has no outgoing dart", vertex=v)
            verts.append(v)
            steps.append(leave)
            outs.append(third[0])
            nxt = G.head(leave)
            if nxt == start:
                break
            if nxt in seen:
                raise CycleStructureViolation(f"primitive path revisits {nxt!r}", vertex=nxt)
            v, arrive = nxt, leave
        # a non-loop cycle has to close through the start's other primitive dart
        if len(verts) > 1 and steps[-1] != prim[start][1]:
            raise CycleStructureViolation(f"cycle from {start!r} closes on the wrong dart", vertex=start)
        total = ZERO
        for d in outs:
            total = total + G.vector(d)
        if not total.is_zero():
            raise CycleStructureViolation(f"outgoing darts of cycle at {start!r} do not sum to 0",
                                          vertex=start)
        cycles.append(PrimitiveCycle(verts, steps, outs))
    return cycles
