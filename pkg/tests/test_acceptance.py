"""Acceptance criteria, one test per criterion, exact equality throughout.

Each test prints its own pass line so a -s run reads as a checklist.
"""

import time

from mazelab import verify
from mazelab.cli import main


def report(num, name, ok, detail=""):
    status = "PASS" if ok else f"FAIL {detail}"
    print(f"ACCEPTANCE {num:2d} {name}: {status}")
    assert ok, f"criterion {num} ({name}): {detail}"


def run_check(num, label, result, budget=None, elapsed=None):
    name, ok, detail = result
    if ok and budget is not None and elapsed is not None and elapsed > budget:
        ok = False
        detail = f"took {elapsed:.2f}s, budget {budget}s"
    report(num, label, ok, detail)


def test_01_table1_reproduction():
    t0 = time.time()
    result = verify.check_table1()
    run_check(1, "degree-2 maze table", result, budget=1.0,
              elapsed=time.time() - t0)


def test_02_table2_reproduction():
    t0 = time.time()
    result = verify.check_table2()
    run_check(2, "degree-2 multation table", result, budget=1.0,
              elapsed=time.time() - t0)


def test_03_multation_examples():
    run_check(3, "worked multation products", verify.check_multation_examples())


def test_04_maze_composition_example():
    run_check(4, "seven-term maze composition", verify.check_maze_example())


def test_05_binomial_expansion_instance():
    run_check(5, "two-passage binomial expansion",
              verify.check_axiom_iv_instance())


def test_06_counting_lemmas():
    t0 = time.time()
    result = verify.check_counting_lemmas(seed=0, trials=200)
    run_check(6, "signed covering sums", result, budget=10.0,
              elapsed=time.time() - t0)


def test_07_deviation_formula():
    run_check(7, "deviation formula",
              verify.check_deviation_formula_suite(seed=0, trials=50))


def test_08_ariadne_functoriality():
    run_check(8, "translation functoriality",
              verify.check_ariadne_functoriality(seed=0, trials=100))


def test_09_roundtrip_isomorphism():
    run_check(9, "translation round trip", verify.check_roundtrip_iso())


def test_10_splitting_and_scaling_identities():
    run_check(10, "splitting and scaling identities",
              verify.check_splitting_identities())


def test_11_phi_roundtrip():
    run_check(11, "presentation evaluation round trip",
              verify.check_phi_roundtrips(seed=0, trials=20))


def test_12_ariadne_thread():
    run_check(12, "forgetful-functor comparison", verify.check_thread())


def test_13_quadratic_classification():
    run_check(13, "degree-2 classification",
              verify.check_quadratic_classification())


def test_14_xi_bijection():
    run_check(14, "span basis bijection", verify.check_xi_bijection())


def test_15_verify_all_under_budget(capsys):
    t0 = time.time()
    code = main(["verify", "all", "--seed", "42"])
    elapsed = time.time() - t0
    out = capsys.readouterr().out
    with capsys.disabled():
        ok = code == 0 and elapsed < 60.0
        detail = f"exit {code}, {elapsed:.1f}s"
        report(15, "full verification suite", ok, detail if not ok else "")
    assert "FAIL" not in out
