"""Constructive parity reduction for balanced graphs.

The engine repeatedly

1. stops if the minimal multiplicity M is 0 (handshake on the primitive
   subgraph) or infinite (handshake on the whole graph);
2. otherwise walks the primitive cycles, finds each cycle's maximal lattice
   and rewrites the cycle edges as partial sums of the outgoing vectors,
   which removes every primitive edge;
3. stops if every vertex of multiplicity M was on a cycle, or else halves
   all vectors (M drops by 2, the census is carried over exactly) and loops.

Every round is logged into a :class:`ParityCertificate` that can be
re-checked by :func:`steinparity.certificate.verify_certificate`.
"""
from __future__ import annotations

from .certificate import (
    ALL_INFINITE,
    BASE_CASE_M0,
    CYCLES_ONLY,
    HALVE,
    CycleRecord,
    ParityCertificate,
    Round,
    primitive_degree_counts,
)
from .dyadic import INF, ZERO, is_primitive
from .errors import AuditFailure, IncomparableLattices, PrimitiveEdgePresent
from .graph import (
    BalancedGraph,
    PrimitiveCycle,
    census,
    lemma1_audit,
    edge_nesting_audit,
    primitive_cycles,
    vertex_lattice,
)
from .lattice import (
    DyadicLattice,
    contains,
    equals,
    includes,
    index2_trichotomy,
    multiplicity,
    same_half,
    span,
)


def cycle_max_lattice(G: BalancedGraph, C: PrimitiveCycle) -> DyadicLattice:
    """The vertex lattice on ``C`` containing all the others.

    A single scan along the cycle keeps the running maximum; the lattices at
    the two ends of a primitive edge are nested, so every step is comparable.
    If the cycle only has infinite-multiplicity vertices the result is the
    rank-1 span of the (common) cycle direction.
    """
    lattices = [vertex_lattice(G, v) for v in C.vertices]
    best = lattices[0]
    for v, L in zip(C.vertices, lattices):
        if includes(best, L):
            continue
        if includes(L, best):
            best = L
            continue
        raise IncomparableLattices(f"lattice at {v!r} is incomparable with the running maximum",
                                   vertex=v)
    for v, L in zip(C.vertices, lattices):
        if not includes(best, L):
            raise IncomparableLattices(f"maximum does not contain the lattice at {v!r}", vertex=v)
    if multiplicity(best) == INF:
        return span(G.vector(C.edges[0]), ZERO)
    return best


def equal_lattice_vertices(G: BalancedGraph, C: PrimitiveCycle, L: DyadicLattice):
    return [v for v in C.vertices if equals(vertex_lattice(G, v), L)]


def lemma5_audit(G: BalancedGraph, C: PrimitiveCycle, L: DyadicLattice | None = None) -> None:
    """Check the even count, the outgoing-vector containment and the half switches."""
    if L is None:
        L = cycle_max_lattice(G, C)
    if multiplicity(L) == INF:
        return
    equal = equal_lattice_vertices(G, C, L)
    if len(equal) % 2:
        raise AuditFailure(f"{len(equal)} cycle vertices have the maximal lattice",
                           clause="cycle-equal-count", vertex=C.vertices[0])
    _, _, zero = index2_trichotomy(L)
    for d in C.outgoing:
        if not contains(zero, G.vector(d)):
            raise AuditFailure(f"outgoing dart on edge {d.edge} is not in the non-primitive half",
                               clause="cycle-inclusion", edge=d.edge)
    n = len(C)
    switches = []
    for i, v in enumerate(C.vertices):
        before, after = G.vector(C.edges[i - 1]), G.vector(C.edges[i])
        if not same_half(L, before, after):
            switches.append(v)
    if set(switches) != set(equal):
        raise AuditFailure("half switches do not match the maximal-lattice vertices",
                           clause="cycle-half-switch", vertex=C.vertices[0], length=n)


def rebalanced_vectors(G: BalancedGraph, C: PrimitiveCycle) -> dict:
    """New stored vectors for the cycle edges.

    The dart v_i -> v_{i+1} gets f_1 + ... + f_i (empty sum for i = 0).
    """
    out = {}
    running = ZERO
    for i, d in enumerate(C.edges):
        if i > 0:
            running = running + G.vector(C.outgoing[i])
        out[d.edge] = running if d.forward else -running
    return out


def rebalance_cycle(G: BalancedGraph, C: PrimitiveCycle) -> BalancedGraph:
    L = cycle_max_lattice(G, C)
    H = G.with_vectors(rebalanced_vectors(G, C))
    _check_rebalanced(H, C, L)
    return H


def _check_rebalanced(H: BalancedGraph, C: PrimitiveCycle, L: DyadicLattice) -> None:
    for d in C.edges:
        if is_primitive(H.edge_map[d.edge].b):
            raise AuditFailure(f"edge {d.edge} is still primitive after rebalancing",
                               clause="rebalance", edge=d.edge)
    finite = multiplicity(L) != INF
    zero = index2_trichotomy(L)[2] if finite else None
    for v in C.vertices:
        Lv = vertex_lattice(H, v)
        ok = includes(zero, Lv) if finite else multiplicity(Lv) == INF
        if not ok:
            raise AuditFailure(f"rebalanced lattice at {v!r} escaped the non-primitive half",
                               clause="rebalance", vertex=v)


def halve(G: BalancedGraph) -> BalancedGraph:
    for e in G.edges:
        if is_primitive(e.b):
            raise PrimitiveEdgePresent(f"edge {e.id} is primitive; cannot halve", edge=e.id)
    return G.map_vectors(lambda b: b.halved())


def reduce_and_certify(G: BalancedGraph) -> ParityCertificate:
    direct = census(G)
    cert = ParityCertificate(input_digest=G.digest())
    current = G
    carried = 0  # minimal vertices already accounted for by cycle counts
    while True:
        c = census(current)
        lemma1_audit(current)
        rnd = Round(index=len(cert.rounds), before=c.summary())
        cert.rounds.append(rnd)
        M = c.minimum

        if M == 0:
            v2, v3, e = primitive_degree_counts(current)
            if 2 * v2 + 3 * v3 != 2 * e or v3 != c.count:
                raise AuditFailure("primitive subgraph handshake failed", clause="base", round=rnd.index)
            rnd.branch = BASE_CASE_M0
            rnd.handshake = {"V2": v2, "V3": v3, "E": e}
            terminal = v3
            break
        if M == INF:
            if 3 * len(current.vertices) != 2 * len(current.edges):
                raise AuditFailure("global handshake failed", clause="infinite", round=rnd.index)
            rnd.branch = ALL_INFINITE
            rnd.handshake = {"V": len(current.vertices), "E": len(current.edges)}
            terminal = len(current.vertices)
            break

        edge_nesting_audit(current)
        cycles = primitive_cycles(current)
        new_b = {}
        contributed = 0
        for C in cycles:
            L = cycle_max_lattice(current, C)
            lemma5_audit(current, C, L)
            m_L = multiplicity(L)
            equal = equal_lattice_vertices(current, C, L) if m_L != INF else []
            if m_L == M:
                contributed += len(equal)
            vectors = rebalanced_vectors(current, C)
            new_b.update(vectors)
            rnd.cycles.append(CycleRecord(
                vertices=list(C.vertices),
                edges=[[d.edge, d.forward] for d in C.edges],
                max_lattice=L,
                max_multiplicity=m_L,
                equal_count=len(equal),
                rebalanced=vectors,
            ))

        rebalanced = current.with_vectors(new_b)
        for C, rec in zip(cycles, rnd.cycles):
            _check_rebalanced(rebalanced, C, rec.max_lattice)
        if any(is_primitive(e.b) for e in rebalanced.edges):
            raise AuditFailure("primitive edge survived rebalancing", clause="rebalance", round=rnd.index)
        after = census(rebalanced)
        rnd.after = after.summary()
        on_cycle = {v for C in cycles for v in C.vertices}
        off = [v for v in c.argmin if v not in on_cycle]
        if c.count != contributed + len(off):
            raise AuditFailure("minimal-vertex ledger does not add up", clause="ledger", round=rnd.index)
        if not off:
            if after.minimum <= M:
                raise AuditFailure("rebalancing left a vertex at the minimum", clause="ledger",
                                   round=rnd.index)
            rnd.branch = CYCLES_ONLY
            terminal = 0
            carried += contributed
            break

        if after.minimum != M or after.count != len(off):
            raise AuditFailure("rebalanced census does not match off-cycle minimum", clause="ledger",
                               round=rnd.index)
        halved = halve(rebalanced)
        h = census(halved)
        if h.minimum != M - 2 or h.argmin != after.argmin:
            raise AuditFailure("halving did not shift the census by exactly 2", clause="halve",
                               round=rnd.index)
        rnd.branch = HALVE
        carried += contributed
        current = halved

    total = carried + terminal
    if total != direct.count:
        raise AuditFailure(f"ledger total {total} differs from direct count {direct.count}",
                           clause="conclusion")
    if total % 2:
        raise AuditFailure("ledger concludes an odd count", clause="conclusion")
    cert.conclusion = direct.summary()
    return cert
