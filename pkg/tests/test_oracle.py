import pytest

from lmgr.errors import GoalUnreachableError, OracleLimitError
from lmgr.landmarks import (
    LandmarkOracle,
    acyclic_plans,
    extract_exhaustive,
    extract_landmarks,
    oracle_landmarks,
)
from lmgr.planning import validate_plan

from .conftest import CORRIDOR_PROBLEM, NAV_DOMAIN, at, ground_text


def test_corridor(corridor):
    lms = oracle_landmarks(corridor)
    assert lms.extractor == 'oracle'
    assert lms.singletons() == at('c1', 'c2', 'c3', 'c4')
    assert set(lms) == set(extract_exhaustive(corridor))


def test_grid_disjunction(grid):
    oracle = LandmarkOracle(grid)
    assert oracle.n_states == 4
    assert oracle.states == {at(c) for c in 'abcd'}
    assert oracle.is_landmark(at('b', 'c'))
    assert not oracle.is_landmark(at('b'))
    assert not oracle.is_landmark(at('c'))
    assert oracle.is_landmark(at('a'))
    assert oracle.violations(extract_landmarks(grid, extractor='rhw')) == []


def test_acyclic_plans(corridor, grid):
    plans = list(acyclic_plans(corridor))
    assert len(plans) == 1
    assert [str(a) for a in plans[0]] == [
        '(move c1 c2)',
        '(move c2 c3)',
        '(move c3 c4)',
    ]
    assert len(list(acyclic_plans(grid))) == 2
    assert list(acyclic_plans(corridor, at('c1'))) == [[]]
    assert len(list(acyclic_plans(grid, max_plans=1))) == 1


def test_limits(corridor):
    with pytest.raises(OracleLimitError):
        LandmarkOracle(corridor, state_cap=2)
    with pytest.raises(ValueError):
        LandmarkOracle(corridor, state_cap=0)

    text = CORRIDOR_PROBLEM.replace('(adjacent c3 c4)', '')
    with pytest.raises(GoalUnreachableError):
        LandmarkOracle(ground_text(NAV_DOMAIN, text))


def test_tiny_instances_are_small(tiny_instances):
    assert len(tiny_instances) == 50
    for p in tiny_instances:
        assert len(p.facts) <= 12


@pytest.mark.parametrize('extractor', ['ex', 'rhw', 'hm'])
def test_extractor_soundness(tiny_instances, extractor):
    for p in tiny_instances:
        oracle = LandmarkOracle(p, state_cap=100_000)
        lms = extract_landmarks(p, extractor=extractor)
        assert oracle.violations(lms) == [], p.name

        # every acyclic plan visits every landmark
        for plan in acyclic_plans(p, max_plans=200):
            trace = validate_plan(p, plan).trace
            for lm in lms:
                assert any(lm.holds_in(s) for s in trace), (p.name, str(lm))


def test_exhaustive_within_oracle(tiny_instances):
    for p in tiny_instances:
        assert set(extract_exhaustive(p)) <= set(oracle_landmarks(p)), p.name
