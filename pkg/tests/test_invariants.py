from qfsieve.invariants import CheckResult, modulus_vectors, run_suite


def test_modulus_vectors_enumerates_products():
    vecs = list(modulus_vectors(2, 6))
    assert len(vecs) == len(set(vecs)) == sum(1 for a in range(1, 7) for b in range(1, 7) if a * b <= 6)
    assert all(len(v) == 3 for v in modulus_vectors(3, 10))


def test_check_result_lines():
    r = CheckResult("demo")
    assert not r.ok  # nothing checked is not a pass
    r.checked = 3
    assert r.line() == "[PASS] demo (3 cases)"
    r.fail((1, 2))
    assert r.line().startswith("[FAIL] demo (3 cases) first failures")


def test_quick_suite_on_g3(g3):
    results = run_suite(g3, quick=True)
    assert len(results) == 9
    assert all(r.ok for r in results), [r.line() for r in results if not r.ok]
