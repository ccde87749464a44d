"""Acceptance criteria 1-14.

Each test records one PASS/FAIL line in ``REPORT``; the lines are printed in
the pytest terminal summary and by running this file directly.  Every check
is exact: a case passes only when all residuals are identically zero.
"""

import random
import time

import pytest

from superbrackets.conformance import mutation_report, run_case
from superbrackets.conventions import MUTATIONS
from superbrackets.expr import parse, to_source

from exprgen import random_expr
from test_cli import CASES as GOLDEN_CASES, GOLDEN, invoke, rendered

REPORT: dict[int, str] = {}


def record(n, title, ok, detail):
    REPORT[n] = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    print(REPORT[n])


def run_all(plan):
    """Run ``[(case_id, samples)]``; return (all passed, seconds, summary)."""
    t0 = time.perf_counter()
    reports = [run_case(cid, samples=n) for cid, n in plan]
    secs = time.perf_counter() - t0
    ok = all(r["status"] == "pass" for r in reports)
    bits = [f"{r['id']} {r['instances']}x {r['status']}" for r in reports]
    return ok, secs, reports, "; ".join(bits)


def criterion(n, title, plan, limit=None):
    ok, secs, reports, detail = run_all(plan)
    in_time = limit is None or secs < limit
    budget = f" ({secs:.2f}s" + (f" < {limit}s)" if limit else ")")
    record(n, title, ok and in_time, detail + budget)
    for r in reports:
        assert r["status"] == "pass", r["failure"]
    assert in_time, f"took {secs:.2f}s, limit {limit}s"


def test_01_graded_ring_laws():
    plan = [(c, 1000) for c in ("ring.associativity", "ring.unit", "ring.commutativity", "ring.odd-square")]
    criterion(1, "graded ring laws on 2|2, degree <= 4", plan, limit=10)


def test_02_even_poisson_axioms():
    plan = [(c, 500) for c in ("poisson.axioms", "poisson.leibniz", "poisson.initial")]
    criterion(2, "even Poisson axioms and initial conditions", plan, limit=30)


def test_03_odd_self_bracket():
    criterion(3, "(F,F) = 2 dF/dp_a dF/dx^a for odd F", [("poisson.odd-square", 100)])


def test_04_cartan():
    criterion(4, "Cartan formula and [i_X, i_Y] = 0", [("forms.cartan", 200)])


def test_05_schouten():
    plan = [(c, 200) for c in ("schouten.axioms", "schouten.derived", "schouten.symmetric")]
    criterion(5, "Schouten axioms via D and symmetric round trip", plan)


def test_06_higher_derived_brackets():
    plan = [("linfty.iff", None), ("linfty.random-iff", 100)]
    criterion(6, "generalized Jacobi up to arity 4 iff Q^2 = 0", plan)


def test_07_alpha():
    plan = [("alpha.intertwining", 100), ("alpha.routes", 100)]
    criterion(7, "alpha intertwines brackets; K_P equals (D, P)", plan, limit=60)


def test_08_classical_koszul():
    criterion(8, "classical Koszul limit, constant and x-dependent P", [("koszul.classical", None)])


def test_09_higher_koszul():
    ok, secs, reports, detail = run_all([("koszul.higher", 48), ("koszul.higher-vanishing", 40)])
    literal = run_case("koszul.higher-literal-epsilon", samples=48)
    note = f"; uncorrected sign exponent {literal['status']} ({literal['failing_instances']}/48 instances)"
    record(9, "higher Koszul specializations for l <= 4 on 2|1", ok, detail + note)
    for r in reports:
        assert r["status"] == "pass", r["failure"]


def test_09_uncorrected_exponent_fails_exactly_at_l_1_and_4():
    from superbrackets.conformance import epsilon_corrected, epsilon_literal

    for l in range(1, 5):
        for bits in range(2 ** l):
            ps = [(bits >> k) & 1 for k in range(l)]
            agree = (epsilon_corrected(l, ps) - epsilon_literal(l, ps)) % 2 == 0
            assert agree == (l in (2, 3))
    assert run_case("koszul.higher-literal-epsilon")["status"] == "expected-failure"


def test_10_lichnerowicz_and_raising():
    plan = [("lichnerowicz.routes", 100), ("lichnerowicz.square", 100), ("raise.diagram", 100)]
    criterion(10, "Lichnerowicz routes, d_P^2 = 0, raising-indices diagram", plan)


def test_11_gradient_shift():
    plan = [
        ("shift.preserves-bracket", 200),
        ("shift.master", None),
        ("shift.zero-section", 60),
        ("shift.decompose", 60),
        ("bialgebroid.weights", None),
    ]
    criterion(11, "gradient shift: bracket, master, zero section, decomposition, weights", plan, limit=60)


def test_12_mackenzie_xu():
    criterion(12, "MX relabeling preserves brackets", [("mx.even", 200), ("mx.odd", 200), ("mx.weights", 200)])


def test_13_mutation_sensitivity():
    rep = mutation_report(jobs=4)
    ok = set(rep) == set(MUTATIONS) and all(rep.values())
    detail = "; ".join(f"{k} breaks {len(v)} cases (e.g. {', '.join(v[:2])})" for k, v in rep.items())
    record(13, "each pinned sign convention is load-bearing", ok, detail)
    assert ok, rep


def test_14_cli_golden_and_parser_round_trip():
    mismatched = []
    for c in GOLDEN_CASES:
        expected = (GOLDEN / f"{c['name']}.out").read_text()
        if rendered(*invoke(c["args"])) != expected:
            mismatched.append(c["name"])
    rng = random.Random(0)
    broken = 0
    for _ in range(1000):
        src = to_source(random_expr(rng))
        if to_source(parse(src)) != src:
            broken += 1
    ok = len(GOLDEN_CASES) >= 10 and not mismatched and broken == 0
    detail = f"{len(GOLDEN_CASES) - len(mismatched)}/{len(GOLDEN_CASES)} golden files equal; {1000 - broken}/1000 round trips"
    record(14, "CLI golden files and parser round trip", ok, detail)
    assert not mismatched, mismatched
    assert broken == 0


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
