"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line and then
asserts.  Run directly (``python tests/test_acceptance.py``) for the seven
lines alone.
"""

import io
import os
import random
import sys
import tempfile
import time
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chordprop import corpus  # noqa: E402
from chordprop.bv import check_bv, check_gerstenhaber  # noqa: E402
from chordprop.cli import run  # noqa: E402
from chordprop.diagram import classify_type, glue, make_diagram, reduce  # noqa: E402
from chordprop.dsl import parse, serialize  # noqa: E402
from chordprop.fatgraph import enumerate_fatgraphs, euler_characteristic, genus, make_fatgraph  # noqa: E402
from chordprop.signs import (  # noqa: E402
    FormalCycleDegree,
    commutativity_audit,
    cross_swap_audit,
    delta,
    loop_product,
    mu_degree,
    string_bracket_degrees,
    swap_exponent_intersection,
)

from oracles import face_count  # noqa: E402

FUZZ_RUNS = 100_000


def _cylinder():
    loop = make_fatgraph([(1, 2)], [(1, 2)])
    return make_diagram(loop, [1], {1: 1}, [(1,)], {1: "in:0", 2: "out:0"})


def _shape(g):
    """(chi, b, genus) recomputed from the raw permutations."""
    chi = len(g.vertices) - len(g.pairs)
    b = face_count(g.pairs, g.vertices)
    return chi, b, (2 - b - chi) // 2


@pytest.fixture
def announce(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def check_1():
    start = time.perf_counter()
    graphs = list(enumerate_fatgraphs(5))
    bad = 0
    for g in graphs:
        b = face_count(g.pairs, g.vertices)
        twice_g = 2 - b - (g.num_vertices - g.num_edges)
        if twice_g < 0 or twice_g % 2 or genus(g) != twice_g // 2 or euler_characteristic(g) != 2 - twice_g - b:
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and len(graphs) == 1004 and elapsed < 30
    return ok, f"Euler/genus on {len(graphs)} graphs (E<=5), {bad} bad, {elapsed:.1f}s"


def check_2():
    ds = corpus.load_all("diagrams")
    required = {"cylinder", "product", "genus1", "cylinder_subdivided", "product_subdivided"}
    bad = []
    for name, d in ds.items():
        r = reduce(d)
        before = (*_shape(d.graph), d.p, d.q)
        after = (*_shape(r.graph), r.p, r.q)
        if before != after or reduce(r) != r or not r.is_reduced():
            bad.append(name)
    ok = not bad and len(ds) >= 12 and required <= set(ds)
    return ok, f"reduce invariant and idempotent on {len(ds)} diagrams, failures {bad}"


def check_3():
    ds = {k: reduce(v) for k, v in corpus.load_all("diagrams").items()}
    bad, pairs = [], 0
    for a, b in product(ds, repeat=2):
        d1, d2 = ds[a], ds[b]
        if d1.q != d2.p:
            continue
        pairs += 1
        chi, _, g = _shape(glue(d1, d2).graph)
        chi1, _, g1 = _shape(d1.graph)
        chi2, _, g2 = _shape(d2.graph)
        if chi != chi1 + chi2 or g != g1 + g2 + d1.q - 1:
            bad.append((a, b))
    cyl = _cylinder()
    ident = 0
    for name, d in ds.items():
        if d.q == 1:
            ident += 1
            if classify_type(glue(d, cyl)) != d.surface_type:
                bad.append((name, "cylinder"))
        if d.p == 1:
            ident += 1
            if classify_type(glue(cyl, d)) != d.surface_type:
                bad.append(("cylinder", name))
    ok = not bad and pairs > 0
    return ok, f"{pairs} composable pairs, {ident} cylinder gluings, failures {bad}"


def check_4():
    bad = []
    for d in range(9):
        x, y = FormalCycleDegree(3, 1, d), FormalCycleDegree(5, 2, d)
        offset = loop_product(x, y).degree - x.degree - y.degree
        if not mu_degree(0, 2, 1, 0, d) == offset == -d:
            bad.append(("mu-loop", d))
    ds = {k: reduce(v) for k, v in corpus.load_all("diagrams").items()}
    for a, b in product(ds, repeat=2):
        if ds[a].q != ds[b].p:
            continue
        gl = glue(ds[a], ds[b])
        for d in range(9):
            if mu_degree(*gl.surface_type, 0, d) != \
                    mu_degree(*ds[a].surface_type, 0, d) + mu_degree(*ds[b].surface_type, 0, d):
                bad.append(("additive", a, b, d))
    x = FormalCycleDegree(4, 1, 3)
    if delta(x, 1).degree - x.degree != 1 or delta(x, 3).degree - x.degree != 3:
        bad.append("delta")
    for d in range(9):
        if string_bracket_degrees(2, 5, d, 1)["bracket_offset"] != 2 - d:
            bad.append(("string-bracket", d))
    if string_bracket_degrees(2, 5, 7, 3)["c"] != -4:
        bad.append("c-offset")
    return not bad, f"mu, delta and string-bracket degrees, failures {bad[:5]}"


def check_5():
    start = time.perf_counter()
    cross = cross_swap_audit(6)
    sec_bad = 0
    for dimP, a, dimQ, b, d in product(range(9), repeat=5):
        if swap_exponent_intersection(dimP, a, dimQ, b, d) != ((dimP - a - d) * (dimQ - b - d)) % 2:
            sec_bad += 1
    audit = commutativity_audit(8)
    report = audit.to_dict()
    found = {tuple(f["params"][k] for k in ("dimP", "a", "dimQ", "b", "d")) for f in report["discrepancies"]}
    want = {t for t in product(range(9), repeat=5) if (t[0] * t[3] + t[2] * t[1]) % 2}
    stable = audit.to_json() == commutativity_audit(8).to_json()
    elapsed = time.perf_counter() - start
    ok = (cross.passed and cross.checked == 7 ** 4 and sec_bad == 0 and audit.passed
          and found == want and stable and elapsed < 10)
    return ok, (f"cross swap {cross.verdict} on {cross.checked}, intersection swap {sec_bad} bad, "
                f"discrepancy set {'matches' if found == want else 'differs'} ({len(found)}), "
                f"stable={stable}, {elapsed:.1f}s")


def _delta_matrix_squared_zero(alg):
    names = alg.names
    idx = {n: i for i, n in enumerate(names)}
    m = [[Fraction(0)] * len(names) for _ in names]
    for src, vec in alg.delta.items():
        for tgt, c in vec.items():
            m[idx[tgt]][idx[src]] = Fraction(c)
    sq = [[sum(m[i][k] * m[k][j] for k in range(len(names))) for j in range(len(names))]
          for i in range(len(names))]
    return all(v == 0 for row in sq for v in row)


def check_6():
    algs = corpus.load_all("algebras")
    notes = []
    dz = algs["delta_zero"]
    dz_ok = check_bv(dz).passed and check_gerstenhaber(dz).passed
    bv_fixtures = [n for n, a in algs.items() if check_bv(a).passed]
    sq_ok = all(_delta_matrix_squared_zero(algs[n]) for n in bv_fixtures)
    if _delta_matrix_squared_zero(algs["bad_delta"]):
        notes.append("bad_delta squares to zero")
    ext = algs["exterior"]

    def passing(alg):
        items = check_bv(alg).items + check_gerstenhaber(alg).items
        return {it.axiom for it in items if it.passed and not it.informational}

    base = passing(ext)
    constants = ext.structure_constants()
    missed = [c[:3] for c in constants if not base - passing(ext.with_constant(c[0], c[1], c[2], -c[3]))]
    ok = dz_ok and sq_ok and not missed and not notes and len(bv_fixtures) >= 3
    return ok, (f"delta_zero {'passes' if dz_ok else 'fails'}, delta^2=0 on {bv_fixtures}, "
                f"{len(constants) - len(missed)}/{len(constants)} mutations caught")


def check_7():
    start = time.perf_counter()
    texts = [corpus.text(k, n) for k in corpus.KINDS for n in corpus.names(k)]
    rt_bad = sum(parse(serialize(parse(t))) != parse(t) for t in texts)
    graphs = list(enumerate_fatgraphs(4))
    rt_bad += sum(parse(serialize(g)) != g for g in graphs)

    rng = random.Random(0)
    seeds = [t.encode() for t in texts]
    fd, path = tempfile.mkstemp(suffix=".sd")
    os.close(fd)
    crashes, codes = [], {}
    try:
        for i in range(FUZZ_RUNS):
            if i % 2:
                data = rng.randbytes(rng.randint(0, 96))
            else:
                buf = bytearray(rng.choice(seeds))
                for _ in range(rng.randint(1, 4)):
                    buf[rng.randrange(len(buf))] = rng.randrange(256)
                data = bytes(buf)
            with open(path, "wb") as fh:
                fh.write(data)
            try:
                code = run(["validate", path], io.StringIO(), io.StringIO())
            except BaseException as exc:  # noqa: BLE001
                crashes.append((data, repr(exc)))
                continue
            codes[code] = codes.get(code, 0) + 1
            if code not in (0, 1):
                crashes.append((data, f"exit {code}"))
    finally:
        os.unlink(path)
    elapsed = time.perf_counter() - start
    ok = rt_bad == 0 and not crashes and elapsed < 60
    return ok, (f"round trip on {len(texts)} corpus files and {len(graphs)} graphs, {rt_bad} bad; "
                f"{FUZZ_RUNS} fuzz runs, exits {dict(sorted(codes.items()))}, "
                f"{len(crashes)} crashes, {elapsed:.1f}s")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7]


@pytest.mark.parametrize("n", range(1, 8))
def test_criterion(n, announce):
    ok, detail = CHECKS[n - 1]()
    announce(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, check in enumerate(CHECKS, 1):
        ok, detail = check()
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        results.append(ok)
    sys.exit(0 if all(results) else 1)
