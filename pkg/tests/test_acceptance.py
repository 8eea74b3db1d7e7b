"""Acceptance criteria 1-9, each one test at its stated sample size.

Multiplicities are cross-checked against a plain oracle: for a 3-valent
vertex with incoming vectors a, b the lattice span(a, b) has rank 2 exactly
when cross(a, b) != 0, and then its multiplicity is v2(cross(a, b)).
"""
import json
import random
import time
from collections import Counter
from fractions import Fraction

import pytest

import factories
from steinparity.certificate import verify_certificate
from steinparity.cli import main
from steinparity.dissection import dual_of, normalize_to_integers, stein_check
from steinparity.dyadic import INF, PlaneVector, cross, is_primitive, val2
from steinparity.errors import NotBalancedPolygon
from steinparity.gen import GenConfig, generate
from steinparity.graph import census, lemma1_audit, edge_nesting_audit, primitive_edges
from steinparity.lattice import (
    contains,
    equals,
    includes,
    index2_trichotomy,
    is_primitive_lattice,
    multiplicity,
    span,
    superlattice_at,
)
from steinparity.reduction import halve, reduce_and_certify

pytestmark = pytest.mark.acceptance

P = PlaneVector


def oracle_multiplicities(G):
    out = {}
    for v in G.vertices:
        a, b, _ = G.incoming_vectors(v)
        c = cross(a, b)
        out[v] = val2(c) if c != 0 else INF
    return out


def oracle_census(G):
    m = oracle_multiplicities(G)
    low = min(m.values())
    return low, sum(1 for x in m.values() if x == low), m


def report(record_property, ok, text):
    line = f"{'PASS' if ok else 'FAIL'}: {text}"
    print(line)
    record_property("detail", text)
    return ok


# ---- instance sets shared by criteria 1, 2 and 5 --------------------------

def c1_configs():
    rng = random.Random(20240101)
    for i in range(10_000):
        yield GenConfig(vertices=2 * rng.randint(1, 30), seed=rng.getrandbits(32),
                        bound=4096, scale_exp=i % 4)


def c2_configs():
    rng = random.Random(20240202)
    for i in range(1000):
        n = 2 * rng.randint(1, 30)
        if i % 3 == 0:
            # pure scaling: Halve rounds down to a base case
            yield GenConfig(vertices=n, seed=rng.getrandbits(32), bound=4096,
                            scale_exp=rng.randint(1, 3))
        else:
            # congruent vectors: odd M possible and primitive cycles present
            yield GenConfig(vertices=n, seed=rng.getrandbits(32), bound=rng.choice([7, 4096]),
                            scale_exp=rng.randint(0, 1), congruence_depth=rng.randint(1, 5))


@pytest.fixture(scope="module")
def c1_graphs():
    t0 = time.perf_counter()
    graphs = [generate(cfg) for cfg in c1_configs()]
    return graphs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def c2_graphs():
    return [generate(cfg) for cfg in c2_configs()]


# ---- criterion 1 -------------------------------------------------------------

def test_c1_census_parity(c1_graphs, record_property):
    graphs, gen_time = c1_graphs
    t0 = time.perf_counter()
    even = agree = 0
    for G in graphs:
        c = census(G)
        low, count, _ = oracle_census(G)
        agree += (c.minimum, c.count) == (low, count)
        even += c.even and count % 2 == 0
    elapsed = gen_time + time.perf_counter() - t0
    n = len(graphs)
    ok = even == n and agree == n and elapsed < 120
    assert report(record_property, ok,
                  f"C1 parity even {even}/{n}, oracle agrees {agree}/{n}, {elapsed:.1f}s (<120s)")


# ---- criterion 2 -------------------------------------------------------------

def test_c2_certificate_soundness(c2_graphs, record_property):
    sound = 0
    branches = Counter()
    Ms = Counter()
    for G in c2_graphs:
        low, count, _ = oracle_census(G)
        assert low >= 1
        cert = reduce_and_certify(G)  # ledger identities are asserted inside every round
        assert all(c.equal_count % 2 == 0 for r in cert.rounds for c in r.cycles)
        assert verify_certificate(G, cert) == cert.conclusion
        expected = {"M": "inf" if low == INF else low, "count": count,
                    "parity": "even" if count % 2 == 0 else "odd"}
        sound += cert.conclusion == expected
        branches[">".join(cert.branches)] += 1
        Ms[low] += 1
    n = len(c2_graphs)
    top = ", ".join(f"{k}:{v}" for k, v in branches.most_common(4))
    assert report(record_property, sound == n, f"C2 sound {sound}/{n}; paths {top}")
    # the sample must exercise every branch of the reduction
    seen = {b for path in branches for b in path.split(">")}
    assert seen >= {"Halve", "CyclesOnly", "BaseCaseM0", "AllInfinite"}, seen
    assert any(m % 2 for m in Ms if m != INF)


# ---- criterion 3 -------------------------------------------------------------

def _perturbed_candidates(rng, L, i, k=12):
    g1, g2 = L.generators
    s = 1 << i
    for _ in range(k):
        while True:
            p = g1 * rng.randint(-9, 9) + g2 * rng.randint(-9, 9)
            if is_primitive(p):
                break
        q = rng.choice([P(s, 0), P(0, s), P(rng.randint(-9, 9) * s, rng.randint(-9, 9) * s),
                        P(rng.randint(-99, 99), rng.randint(-99, 99))])
        r = P(rng.randint(-3, 3), rng.randint(-3, 3))
        if rng.random() < 0.5:
            r = r * s
        yield span(p + r, q)


def test_c3_superlattice_and_trichotomy(record_property):
    rng = random.Random(3)
    failures = matched = halves = 0
    for _ in range(500):
        d = rng.randint(0, 10)
        L = factories.random_primitive_lattice(rng, d)
        failures += multiplicity(L) != d
        for i in range(d + 1):
            S = superlattice_at(L, i)
            failures += not (includes(S, L) and multiplicity(S) == i and is_primitive_lattice(S))
            for C in _perturbed_candidates(rng, L, i):
                if is_primitive_lattice(C) and multiplicity(C) == i and includes(C, L):
                    matched += 1
                    failures += not equals(C, S)
        if d == 0:
            continue
        plus, minus, zero = index2_trichotomy(L)
        failures += equals(plus, minus) or equals(plus, zero) or equals(minus, zero)
        failures += any(multiplicity(X) != d + 1 or not includes(L, X) for X in (plus, minus, zero))
        failures += is_primitive_lattice(zero)
        g1, g2 = L.generators
        sampled = 0
        while sampled < 1000:
            v = g1 * rng.randint(-50, 50) + g2 * rng.randint(-50, 50)
            if not is_primitive(v):
                continue
            sampled += 1
            failures += (contains(plus, v) + contains(minus, v) + contains(zero, v)) != 1
            failures += contains(zero, v)
        halves += sampled
    assert report(record_property, failures == 0,
                  f"C3 500 lattices, {matched} matching perturbed candidates, "
                  f"{halves} primitive samples, {failures} failures")


# ---- criterion 4 -------------------------------------------------------------

def test_c4_membership_residue_oracle(record_property):
    rng = random.Random(4)
    mismatches = lattices = 0
    depths = Counter()
    while lattices < 100:
        g1 = P(rng.randint(-20, 20), rng.randint(-20, 20))
        g2 = P(rng.randint(-20, 20), rng.randint(-20, 20))
        c = cross(g1, g2)
        if c == 0 or val2(c) > 6:
            continue
        lattices += 1
        L = span(g1, g2)
        d = multiplicity(L)
        depths[d] += 1
        N = 1 << (d + 1)
        reachable = factories.residue_span((g1, g2), N)
        for x in range(N):
            for y in range(N):
                mismatches += contains(L, P(x, y)) != ((x, y) in reachable)
    assert report(record_property, mismatches == 0,
                  f"C4 {lattices} lattices (d histogram {dict(sorted(depths.items()))}), "
                  f"{mismatches} mismatches")


# ---- criterion 5 -------------------------------------------------------------

def test_c5_structural_audits(c1_graphs, c2_graphs, record_property):
    graphs = c1_graphs[0] + c2_graphs
    edges = 0
    for G in graphs:
        lemma1_audit(G)
        checked = edge_nesting_audit(G)
        assert checked == len(primitive_edges(G))
        edges += checked
    assert report(record_property, True,
                  f"C5 audits passed on {len(graphs)} graphs, {edges} primitive edges")


# ---- criterion 6 -------------------------------------------------------------

def _face_formula_holds(D):
    T, G, scale = dual_of(D)
    mult = census(G).multiplicity
    for f in range(T.input_count):
        S = Fraction(T.face_area2(f), 2)  # area in integer (scaled) coordinates
        if S and mult[f"f{f}"] != 1 + val2(S):
            return False
    return all(mult[f"f{f}"] == INF for f in range(T.input_count, len(T.faces)))


def test_c6_dissection_corpus(record_property):
    results = {}

    D = factories.square_two_triangles()
    T, G, _ = dual_of(D)
    m = census(G).multiplicity
    results["a"] = (len(G.vertices) == 2 and len(G.edges) == 3
                    and sorted(m.values()) == [2, 2] and stein_check(D).nondegenerate_count % 2 == 0
                    and _face_formula_holds(D))

    D = factories.square_four_triangles()
    r = stein_check(D)
    results["b"] = (sorted(r.multiplicities.values()) == [1, 1, 1, 1] and r.all_equal_areas
                    and r.nondegenerate_count == 4 and _face_formula_holds(D))

    D = factories.square_six_strips()
    r = stein_check(D)
    results["c"] = (r.nondegenerate_count == 6 and r.all_equal_areas
                    and set(r.multiplicities.values()) == {1 + val2(6)} and _face_formula_holds(D))

    D = factories.square_t_vertex()
    r = stein_check(D)
    results["d"] = (r.areas == [1, 2, 1] and r.inserted_degenerate == 1
                    and len(r.multiplicities) == 4 and r.census["M"] == 1
                    and r.census["count"] == 2 and _face_formula_holds(D))

    try:
        stein_check(factories.triangle_polygon())
        results["e"] = False
    except NotBalancedPolygon:
        results["e"] = True

    ok = all(results.values())
    assert report(record_property, ok, "C6 " + " ".join(f"({k}) {'ok' if v else 'FAIL'}"
                                                       for k, v in results.items()))


# ---- criterion 7 -------------------------------------------------------------

def test_c7_halving_contract(record_property):
    rng = random.Random(7)
    good = 0
    for _ in range(200):
        cfg = GenConfig(vertices=2 * rng.randint(1, 30), seed=rng.getrandbits(32),
                        scale_exp=1, congruence_depth=rng.choice([0, 0, 1, 2, 3]))
        G = generate(cfg)
        H = halve(G)
        before, after = oracle_multiplicities(G), oracle_multiplicities(H)
        shifted = all(after[v] == (INF if m == INF else m - 2) for v, m in before.items())
        good += shifted and census(G).argmin == census(H).argmin
    assert report(record_property, good == 200, f"C7 halving contract {good}/200")


# ---- criterion 8 -------------------------------------------------------------

def test_c8_scale_invariance(record_property):
    good = total = 0
    for seed in range(100):
        D, _ = normalize_to_integers(factories.random_dissection(random.Random(seed)))
        _, G, _ = dual_of(D)
        base = oracle_multiplicities(G)
        for lam in (2, 3, 6):
            _, H, _ = dual_of(D.scaled(lam))
            scaled = oracle_multiplicities(H)
            shift = 2 * val2(lam)
            total += 1
            good += (all(scaled[v] == (INF if m == INF else m + shift) for v, m in base.items())
                     and census(G).argmin == census(H).argmin)
    assert report(record_property, good == total, f"C8 scale invariance {good}/{total}")


# ---- criterion 9 -------------------------------------------------------------

def _corruptions(obj, rng):
    yield "{truncated"
    bad = json.loads(json.dumps(obj))
    e = rng.choice([e for e in bad["edges"] if e["tail"] != e["head"]])  # loops self-cancel
    e["b"] = [str(int(e["b"][0]) + 1), e["b"][1]]  # breaks balance at both ends
    yield bad
    bad = json.loads(json.dumps(obj))
    bad["edges"].pop()  # valence drops below 3
    yield bad
    bad = json.loads(json.dumps(obj))
    bad["edges"][0]["b"] = ["1/2", "0"]
    yield bad


def test_c9_cli_contract(tmp_path, capsys, record_property):
    rng = random.Random(9)
    round_trip = corrupt_ok = corrupt_total = 0
    exit_two = 0
    for seed in range(100):
        g = tmp_path / f"g{seed}.json"
        n = 2 * rng.randint(1, 30)
        flags = ["--scale-exp", str(seed % 4)]
        if seed % 5 == 0:
            flags += ["--congruence-depth", str(1 + seed % 3)]
        codes = [main(["gen", "--vertices", str(n), "--seed", str(seed), "-o", str(g), *flags]),
                 main(["--quiet", "check-graph", str(g)]),
                 main(["--quiet", "reduce", str(g), "--trace", str(tmp_path / "c.json")]),
                 main(["--quiet", "verify-certificate", str(g), str(tmp_path / "c.json")]),
                 main(["--quiet", "audit", str(g)])]
        exit_two += codes.count(2)
        round_trip += codes == [0] * 5
        obj = json.loads(g.read_text())
        for k, bad in enumerate(_corruptions(obj, rng)):
            b = tmp_path / f"bad{seed}_{k}.json"
            b.write_text(bad if isinstance(bad, str) else json.dumps(bad))
            corrupt_total += 1
            corrupt_ok += main(["--quiet", "check-graph", str(b)]) == 1
    capsys.readouterr()
    ok = round_trip == 100 and corrupt_ok == corrupt_total and exit_two == 0
    assert report(record_property, ok,
                  f"C9 round trips {round_trip}/100, corrupted inputs exit 1 "
                  f"{corrupt_ok}/{corrupt_total}, exit-2 runs {exit_two}")
