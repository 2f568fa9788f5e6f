import pytest

from common.context import Context
from torus_lab import graph
from torus_lab.state import CheckResult

FAST_CHECKS = {
    "hom-oracle",
    "rigidity",
    "g-vectors",
    "markov",
    "cluster-bijection",
    "farey",
    "snakes",
    "collisions",
}


@pytest.fixture(scope="module")
def fast_run() -> dict:
    return graph.invoke({"suite": "fast"}, context=Context(max_n=3, max_a=2))


def _checked(res: dict, name: str) -> int:
    [result] = [r for r in res["results"] if r.name == name]
    return int(result.detail.split()[0])


@pytest.mark.slow
def test_fast_suite_passes(fast_run: dict) -> None:
    """Test that the fast suite runs each cheap check once and every check passes."""
    results = fast_run["results"]
    assert all(isinstance(r, CheckResult) for r in results)
    assert {r.name for r in results} == FAST_CHECKS
    assert [r.name for r in results if not r.passed] == []
    assert fast_run["passed"]


@pytest.mark.slow
def test_collision_check_is_informational(fast_run: dict) -> None:
    [collisions] = [r for r in fast_run["results"] if r.name == "collisions"]
    assert collisions.passed


@pytest.mark.slow
def test_context_caps_the_suite_bounds(fast_run: dict) -> None:
    """Test that smaller context bounds shrink the enumerations of the checks."""
    res = graph.invoke({"suite": "fast"}, context=Context(max_n=1, max_a=1))

    assert res["passed"]
    assert _checked(res, "rigidity") < _checked(fast_run, "rigidity")
    assert _checked(res, "g-vectors") < _checked(fast_run, "g-vectors")
