from nlvc import checks


def test_suite_passes():
    results = checks.run_all()
    assert len(results) == 7
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_failure_is_reported():
    bad = checks.CheckResult("x", 2.0, 1.0)
    assert not bad.passed and bad.line().startswith("FAIL")
    assert not checks.CheckResult("nan", float("nan"), 1.0).passed


def test_random_polynomials_reproducible():
    a = checks.random_polynomials(3, seed=4)
    b = checks.random_polynomials(3, seed=4)
    assert a == b and all(p.degree <= 5 for p in a)
