"""Acceptance criteria, each run at its full stated scope and time limit.

Every test prints exactly one PASS/FAIL line (visible with or without -s).
"""

import time
from fractions import Fraction

import pytest

from betti_tate import snf, strat_quiver
from betti_tate.gcft import verify_intertwine
from betti_tate.mirror import roundtrip_check, verify_compat, verify_ff
from betti_tate.nodal_graded import GeneratorId, ext_truncated, structure_generator, verify_generation_witness
from betti_tate.sampling import random_rep
from betti_tate.strat_quiver import (
    ProjectiveId,
    enumerate_words,
    hom_by_enumeration,
    hom_closed_form,
    hom_projectives,
    path_normal_form,
    quiver_presentation,
    reachable_normal_forms,
    rep_of_projective,
    verify_end_example,
)

from test_nodal_graded import ext_occ_occ_oracle

K_RANGE = range(-2, 3)
L_RANGE = range(0, 5)
GRID = [(k, l) for k in K_RANGE for l in L_RANGE]


def cold():
    for fn in (snf.smith_form, strat_quiver.hom_projectives, strat_quiver.reachable_normal_forms,
               strat_quiver.rep_of_projective):
        fn.cache_clear()


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield


_CAPSYS = None


def report(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = ""):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    line = f"criterion {number:2d} {status}  {title}  ({elapsed:.2f}s / limit {limit:g}s){'  ' + detail if detail else ''}"
    with _CAPSYS.disabled():
        print("\n" + line, flush=True)
    return status == "PASS"


def timed(fn):
    cold()
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


def test_criterion_01_quiver_relations():
    def body():
        bad = []
        for k, l in GRID:
            expected = {f"c{i + 1}(1-m{i})" for i in range(k, k + l)}
            expected |= {f"(1-m{j})c{j}" for j in range(k + 1, k + l)}
            if {str(r) for r in quiver_presentation(k, l).relations} != expected:
                bad.append((k, l))
        return not bad, f"{len(GRID)} windows, mismatches {bad}"
    ok, detail, t = timed(body)
    assert report(1, "quiver relations", ok, t, 1.0, detail)


def test_criterion_02_rewriting_confluence():
    def body():
        words = 0
        for k in K_RANGE:
            for l in range(0, 4):
                q = quiver_presentation(k, l)
                for v in q.vertices:
                    for w in enumerate_words(q, v, 8):
                        words += 1
                        forms = reachable_normal_forms(w)
                        if len(forms) != 1 or path_normal_form(w) not in forms:
                            return False, f"not confluent: {w}"
        return True, f"{words} words"
    ok, detail, t = timed(body)
    assert report(2, "rewriting confluence", ok, t, 30.0, detail)


def test_criterion_03_hom_tables():
    def body():
        n = 0
        for k in K_RANGE:
            for l in L_RANGE:
                q = quiver_presentation(k, l)
                for a in q.vertices:
                    for b in q.vertices:
                        H = hom_projectives(ProjectiveId(k, l, a), ProjectiveId(k, l, b))
                        if H.normal_form != hom_closed_form(k, l, a, b).normal_form:
                            return False, f"closed form differs at ({k},{l}) {a}->{b}"
                        if H.normal_form != hom_by_enumeration(q, a, b, 8).normal_form:
                            return False, f"enumeration differs at ({k},{l}) {a}->{b}"
                        n += 1
        return True, f"{n} entries"
    ok, detail, t = timed(body)
    assert report(3, "hom tables", ok, t, 10.0, detail)


def test_criterion_04_end_example():
    def body():
        rep = verify_end_example()
        hom = hom_projectives(ProjectiveId(0, 1, 0), ProjectiveId(0, 1, 1))
        ok = rep.passed and sum(rep.tables["dims"]) == 1 == hom.dim_q()
        return ok, f"dims {rep.tables['dims']}"
    ok, detail, t = timed(body)
    assert report(4, "end-algebra example", ok, t, 1.0, detail)


def test_criterion_05_full_faithfulness():
    def body():
        fails = [(k, l) for k, l in GRID if not verify_ff(k, l, 4).passed]
        return not fails, f"{len(GRID)} windows, depth 4, failing {fails}"
    ok, detail, t = timed(body)
    assert report(5, "full faithfulness", ok, t, 60.0, detail)


def test_criterion_06_compatibility():
    def body():
        fails = [(k, l) for k, l in GRID if not verify_compat(k, l).passed]
        return not fails, f"{len(GRID)} windows, failing {fails}"
    ok, detail, t = timed(body)
    assert report(6, "compatibility squares", ok, t, 30.0, detail)


def test_criterion_07_roundtrip():
    def body():
        fails, count = [], 0
        for k, l in GRID:
            for n in range(k, k + l + 1):
                count += 1
                if not roundtrip_check(rep_of_projective(ProjectiveId(k, l, n))).passed:
                    fails.append(f"P{n}@({k},{l})")
        for seed in range(50):
            count += 1
            if not roundtrip_check(random_rep(seed)).passed:
                fails.append(f"seed {seed}")
        return not fails, f"{count} objects, failing {fails}"
    ok, detail, t = timed(body)
    assert report(7, "round trip", ok, t, 60.0, detail)


def test_criterion_08_generation():
    def body():
        rep = verify_generation_witness(-1, 5)
        return rep.passed, "window [-1, 5]"
    ok, detail, t = timed(body)
    assert report(8, "generation witness", ok, t, 5.0, detail)


def test_criterion_09_ext_table():
    def body():
        occ = structure_generator(GeneratorId("Occ", 0))
        dims = tuple(e.dim_q() for e in ext_truncated(GeneratorId("Occ", 0), occ, 4))
        oracle = tuple(ext_occ_occ_oracle(4))
        return dims == oracle == (1, 0, 0, 0, 0), f"dims {dims}, oracle {oracle}"
    ok, detail, t = timed(body)
    assert report(9, "Ext(Occ(0), Occ(0))", ok, t, 5.0, detail)


def test_criterion_10_gcft():
    def body():
        cases = [(0, 1, 0), (0, 1, 1), (0, 2, 0), (0, 2, 1), (0, 2, 2)]
        fails, count = [], 0
        for k, l, v in cases:
            V = rep_of_projective(ProjectiveId(k, l, v))
            for a in (Fraction(2), Fraction(-1), Fraction(1)):
                for n in (-2, 0, 1):
                    count += 1
                    if not verify_intertwine(V, a, n).passed:
                        fails.append((k, l, v, str(a), n))
        return not fails and count == 45, f"{count} combinations, failing {fails}"
    ok, detail, t = timed(body)
    assert report(10, "GCFT intertwining", ok, t, 60.0, detail)
