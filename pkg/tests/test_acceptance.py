"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""
import time

import pytest

from conftest import ACCEPTANCE
from sseqbench.chart import BiDegree
from sseqbench.families import families_verify, ingest
from sseqbench.ko import ko_chart
from sseqbench.moore import CofiberLadder, LiftScript, replay_lift_argument
from sseqbench.resolution import minimal_resolution
from sseqbench.spectral_maps import (
    LevelThreeRing,
    build_fiber_chart,
    delete_differential_check,
    ko_psi_minus_one,
    parse_target,
    qp_leading_term,
    two_adic_split,
)
from sseqbench.steenrod import algebra_by_name, subalgebra_A
from sseqbench.toda import Word, check_relation_chain, force_nonzero_from_empty


def record(n, checks, note=""):
    """checks: list of (ok, description); the first failing one becomes the note."""
    bad = [d for ok, d in checks if not ok]
    ok = not bad
    ACCEPTANCE[n] = (ok, bad[0] if bad else note)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {ACCEPTANCE[n][1]}")
    assert ok, bad


def table(res, stems, filts):
    return [[res.dim(stem, s) for stem in range(stems + 1)] for s in range(filts + 1)]


def test_criterion_1_ko_pipeline():
    t0 = time.perf_counter()
    ko = ko_chart()
    f = ko_psi_minus_one(ko, 3)
    fib = build_fiber_chart(f)
    cell = fib.chart.cell(BiDegree(3, 1)).describe()
    rec = delete_differential_check(parse_target(ko, "eta^3@3,3"), 3, f)
    dt = time.perf_counter() - t0
    record(1, [
        (cell == "Z/8", f"fiber cell (3,1) is {cell}, expected Z/8"),
        (rec.certified and rec.window_empty, f"eta^3 deletion: {rec.status}"),
        ("tau^2 c != 0" in rec.text(), "certificate does not state tau^2 c != 0"),
        (dt < 1.0, f"runtime {dt:.2f}s >= 1s"),
    ], f"fiber (3,1) = Z/8; tau^2 lift of eta^3 nonzero; {dt:.3f}s")


def test_criterion_2_ext_oracle(oracle):
    subalgebra_A.cache_clear()  # time the algebra construction too
    t0 = time.perf_counter()
    a0 = minimal_resolution(algebra_by_name("A0"), 12, 8)
    a1 = minimal_resolution(algebra_by_name("A1"), 24, 12)
    dt = time.perf_counter() - t0
    frozen = oracle("oracle_A1.json")["dims"]
    a0_oracle = [[1] + [0] * 12 for _ in range(9)]
    periodic = all(
        a1.dim(s + 8, f + 4) == a1.dim(s, f) for s in range(1, 17) for f in range(0, 9)
    )
    record(2, [
        (table(a0, 12, 8) == a0_oracle, "A(0) differs from the h0-tower"),
        (table(a1, 12, 8) == [r[:13] for r in frozen[:9]], "A(1) differs from the bar-complex oracle"),
        (periodic, "A(1) is not (8,4)-periodic through stem 24"),
        (dt < 5.0, f"runtime {dt:.2f}s >= 5s"),
    ], f"A(0), A(1) match through (12, 8); (8,4)-periodic to stem 24; {dt:.2f}s")


def test_criterion_3_a2(oracle):
    subalgebra_A.cache_clear()
    t0 = time.perf_counter()
    res = minimal_resolution(algebra_by_name("A2"), 30, 16)
    dt = time.perf_counter() - t0
    bar = oracle("oracle_A2.json")
    adem = oracle("oracle_A2_adem.json")
    record(3, [
        (res.check_d_squared() == [] and res.check_minimal() == [], "resolution is not a minimal complex"),
        (table(res, 15, bar["max_filtration"]) == bar["dims"], "A(2) differs from the bar-complex oracle"),
        (table(res, 15, 16) == adem["dims"], "A(2) differs from the admissible-basis oracle"),
        (dt < 600, f"runtime {dt:.0f}s >= 10 min"),
    ], f"A(2) to (30, 16) in {dt:.1f}s; stems <= 15 match the bar complex (s <= {bar['max_filtration']}) "
       f"and the admissible-basis oracle (s <= 16)")


def test_criterion_4_detection_audit(fx):
    t0 = time.perf_counter()
    checks = []
    rows = [r for r in fx.detection if r.in_table]
    checks.append((len(rows) == 14, f"{len(rows)} detection rows, expected 14"))
    for row in rows:
        x = parse_target(fx.qp.source, row.target_spec())
        rec = delete_differential_check(x, row.page, fx.qp)
        src = x.bidegree.shift(1, -row.page)
        checks.append((rec.detected_permanent, f"row {row.id}: {rec.status} {rec.reason}"))
        checks.append((rec.source == src and src.filtration >= 0, f"row {row.id}: page arithmetic"))
    for row in fx.detection:
        rep = families_verify(fx.without_differential(row.id))
        checks.append((sorted(rep.failing()) == sorted(row.families), f"mutating row {row.id} breaks {rep.failing()}"))
    dt = time.perf_counter() - t0
    checks.append((dt < 10, f"runtime {dt:.1f}s >= 10s"))
    record(4, checks, f"14 certificates; every single-row mutation breaks exactly its families; {dt:.2f}s")


def test_criterion_5_family_count(fx):
    rep = families_verify(fx)
    expected = [1, 4, 1, 1, 5, 5, 1, 7, 3, 10, 2, 1, 1, 1, 11, 2, 8, 5, 13, 12, 2, 14]
    orders = {"23a": 8, "71a": 8, "47a": 4, "74a": 4, "119a": 4}
    record(5, [
        (rep.ok, f"audit failures: {rep.failing()}"),
        (rep.total == 110, f"total {rep.total}"),
        (rep.per_degree() == expected, f"per-degree {rep.per_degree()}"),
        (all(r.order == orders.get(r.label, 2) for r in fx.records), "group orders differ"),
    ], "total 110, per-degree counts and orders match the family catalog")


def test_criterion_6_toda_chains(fx):
    names = ["23b", "47b", "48", "71b", "72", "73", "95", "119b", "120", "143", "144", "145", "167", "169"]
    checks = []
    for n in names:
        res = check_relation_chain(fx.chains[n], fx.db)
        checks.append((res.ok, f"chain {n}: {res.failure}"))
    base = families_verify(fx).total
    cut = families_verify(fx.without_relation("kappa_sq"))
    checks.append((cut.total - base == 1, f"removing kappa_sq changes the count by {cut.total - base}"))
    checks.append((cut.failing() == ["48"], f"removing kappa_sq breaks {cut.failing()}"))
    record(6, checks, "14 chains verify; dropping kappa^2 = eps kbar adds exactly one family (stem 48)")


def test_criterion_7_forcing(fx):
    fr = force_nonzero_from_empty(fx.brackets["26"], fx.db)
    record(7, [
        ([str(e) for e in fx.brackets["26"].entries] == ["kbar", "tau^4 nu^2", "2"], "bracket entries differ"),
        (fr.status == "proved", fr.reason),
        (fr.nonzero == Word.parse("tau^4 nu^2 kbar"), f"forced {fr.nonzero}"),
        (fx.db.is_zero("2 nu^2") is not None, "2 nu^2 = 0 is not in the database"),
    ], "<kbar, tau^4 nu^2, 2> empty and 2 nu^2 = 0 force tau^4 nu^2 kbar != 0")


def test_criterion_8_polynomials(oracle):
    frozen = oracle("qp_oracle.json")["leading"]
    t0 = time.perf_counter()
    ring = LevelThreeRing()
    terms = [qp_leading_term(k) for k in range(1, 65)]
    dt = time.perf_counter() - t0
    checks = [
        (ring.delta_identity(), "Delta != a1^3 a3^3 - 27 a3^4"),
        (ring.delta.terms == {(3, 3): 1, (0, 4): -27}, f"Delta expands to {ring.delta}"),
        (ring.c_identity(), "1728 Delta != c4^3 - c6^2"),
        (dt < 1.0, f"runtime {dt:.2f}s >= 1s"),
    ]
    for k, lt in enumerate(terms, 1):
        r, s = two_adic_split(k)
        want = [3 * 2 ** (r + 1), 2 ** (r + 1) * (4 * s + 1)]
        checks.append(([lt.a1_exp, lt.a3_exp] == want, f"k={k}: {lt} vs formula"))
        checks.append(([lt.a1_exp, lt.a3_exp] == frozen[str(k)], f"k={k}: {lt} vs discriminant oracle"))
        checks.append((not lt.monomial.is_zero(), f"k={k}: zero leading term"))
    record(8, checks, f"Delta identity exact; 64 leading terms match formula and oracle; {dt * 1000:.1f}ms")


def test_criterion_9_moore_replays(fx):
    checks = []
    for name, verb in (("47", "correct-by-imJ"), ("54", "correct-by-imJ-bar"), ("71", "correct-by-imJ"), ("80", "correct-by-imJ")):
        script = fx.scripts[name]
        ladder = CofiberLadder(fx.sphere, script.i)
        res = replay_lift_argument(script, ladder)
        checks.append((res.ok, f"script {name}: {res.failure}"))
        for which in range(sum(1 for s in script.steps if s.verb == verb)):
            cut = replay_lift_argument(script.without_step(verb, which), ladder)
            checks.append((not cut.ok, f"script {name} still verifies without {verb} #{which}"))
    record(9, checks, "lifts in stems 47, 54, 71, 80 verify; each fails without its image-of-J correction")


def test_criterion_10_aggregate(fx):
    missing = [n for n in range(1, 10) if n not in ACCEPTANCE]
    if missing:
        pytest.skip(f"criteria {missing} did not run in this session")
    checks = [(ACCEPTANCE[n][0], f"criterion {n} failed") for n in range(1, 10)]
    again = ingest()
    checks.append((families_verify(again).text() == families_verify(fx).text(), "audit report is not reproducible"))
    checks.append((not again.warnings, f"fixture warnings: {again.warnings}"))
    unsourced = [r.id for r in fx.db.relations if not r.provenance.strip()]
    checks.append((not unsourced, f"relations without provenance: {unsourced}"))
    record(10, checks, "all machine-checkable steps pass with provenance; seeded mutations detected")
