import pytest

from modsat import suite


@pytest.mark.parametrize("seed", [1, 11])
def test_verdicts_independent_of_seed(seed):
    cfg = suite.SuiteConfig(seed=seed, br_pairs=40)
    results = suite.run_properties(cfg)
    assert [r["id"] for r in results] == list(range(1, 13))
    assert all(r["passed"] for r in results), [r["name"] for r in results if not r["passed"]]


def test_only_filter_and_dumps_stable():
    cfg = suite.SuiteConfig(seed=2, only=[1, 6, 11])
    a = suite.dumps(suite.run_properties(cfg))
    b = suite.dumps(suite.run_properties(suite.SuiteConfig(seed=2, only=[11, 6, 1], threads=3)))
    assert a == b
    assert a.endswith("\n")


def test_corrupted_table_differs_only_in_d():
    from modsat.automorphism import FOLDING_TABLE

    bad = suite.corrupted_folding_table()
    diff = {k for k in set(bad) | set(FOLDING_TABLE) if bad.get(k) != FOLDING_TABLE.get(k)}
    assert diff and all(k[0] == "D" for k in diff)
