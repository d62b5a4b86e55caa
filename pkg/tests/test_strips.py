import pytest

from lmgr.errors import InapplicableActionError
from lmgr.planning import (
    Action,
    Fact,
    GroundedProblem,
    applicable,
    apply,
    validate_plan,
)

from .conftest import at


def move(a, b):
    return Action('move', (a, b), at(a), at(b), at(a))


def test_fact_order_and_str():
    facts = [Fact('b', ('x',)), Fact('a', ('y',)), Fact('a', ('x',))]
    assert sorted(facts) == [
        Fact('a', ('x',)),
        Fact('a', ('y',)),
        Fact('b', ('x',)),
    ]
    assert str(Fact('at', ('c1',))) == '(at c1)'
    assert str(move('c1', 'c2')) == '(move c1 c2)'


def test_apply():
    s = at('c1')
    assert applicable(s, move('c1', 'c2'))
    assert not applicable(s, move('c2', 'c3'))
    assert apply(s, move('c1', 'c2')) == at('c2')

    with pytest.raises(InapplicableActionError, match=r'\(at c2\)'):
        apply(s, move('c2', 'c3'))


def test_add_wins_over_delete():
    f = Fact('p')
    a = Action('refresh', (), frozenset(), frozenset([f]), frozenset([f]))
    assert apply(frozenset([f]), a) == frozenset([f])
    assert apply(frozenset(), a) == frozenset([f])


def test_validate_corridor_plan(corridor):
    plan = [
        corridor.find_action('move', ('c1', 'c2')),
        corridor.find_action('move', ('c2', 'c3')),
        corridor.find_action('move', ('c3', 'c4')),
    ]
    report = validate_plan(corridor, plan)
    assert report.valid
    assert report.cost == 3
    assert len(report.trace) == 4
    assert report.trace[-1] == at('c4')
    assert report.failed_step is None


def test_validate_invalid_plans(corridor):
    short = [corridor.find_action('move', ('c1', 'c2'))]
    report = validate_plan(corridor, short)
    assert not report.valid
    assert report.failed_step is None

    broken = short + [corridor.find_action('move', ('c3', 'c4'))]
    report = validate_plan(corridor, broken)
    assert not report.valid
    assert report.failed_step == 1
    assert len(report.trace) == 2


def test_grounded_problem_indexes(corridor):
    assert corridor.facts == tuple(sorted(corridor.facts))
    keys = [a.key for a in corridor.actions]
    assert keys == sorted(keys)

    c3 = Fact('at', ('c3',))
    achievers = {a.args for a in corridor.achievers(c3)}
    assert achievers == {('c2', 'c3'), ('c4', 'c3')}
    fid = corridor.fact_id(c3)
    consumers = {corridor.actions[i].args for i in corridor.consumer_ids(fid)}
    assert consumers == {('c3', 'c2'), ('c3', 'c4')}
    assert corridor.find_action('move', ('c1', 'c3')) is None


def test_with_goal_and_init(corridor):
    p = corridor.with_goal(at('c2'))
    assert p.goal == at('c2')
    assert corridor.goal == at('c4')
    assert p.actions is corridor.actions

    q = corridor.with_init(at('c3'))
    assert q.init == at('c3')
    assert corridor.init == at('c1')

    with pytest.raises(ValueError, match='outside F'):
        corridor.with_goal([Fact('at', ('nowhere',))])


def test_problem_validation():
    f = Fact('p')
    with pytest.raises(ValueError, match='outside F'):
        GroundedProblem([f], [Fact('q')], [], [])
    bad = Action('a', (), frozenset(), frozenset([f]), frozenset(), -1)
    with pytest.raises(ValueError, match='negative cost'):
        GroundedProblem([f], [], [bad], [])
