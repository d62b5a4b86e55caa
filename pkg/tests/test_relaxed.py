import math

import numpy as np
import pytest

from lmgr.landmarks import LandmarkOracle
from lmgr.planning import (
    Fact,
    build_rpg,
    h_add,
    relaxed_closure,
    relaxed_reachable,
)

from .conftest import at, random_tiny_instance


def test_corridor_layers(corridor):
    rpg = build_rpg(corridor)
    assert rpg.fact_layers == (
        at('c1'),
        at('c1', 'c2'),
        at('c1', 'c2', 'c3'),
        at('c1', 'c2', 'c3', 'c4'),
    )
    assert rpg.first_level[next(iter(at('c4')))] == 3
    assert relaxed_reachable(rpg, at('c4'))
    assert {a.args for a in rpg.first_achievers[next(iter(at('c3')))]} == {
        ('c2', 'c3')
    }


def test_banned_actions(corridor):
    banned = [corridor.find_action('move', ('c2', 'c3'))]
    rpg = build_rpg(corridor, banned)
    assert rpg.facts == at('c1', 'c2')
    assert not relaxed_reachable(rpg, at('c4'))

    ids = {corridor.action_index(a) for a in banned}
    reached = relaxed_closure(corridor, ids)
    assert reached == set(corridor.state_ids(at('c1', 'c2')))


def test_closure_matches_rpg(grid):
    rpg = build_rpg(grid)
    reached = relaxed_closure(grid)
    assert {grid.facts[i] for i in reached} == rpg.facts


def test_closure_from_other_state(corridor):
    reached = relaxed_closure(corridor, init=at('c3'))
    assert reached == set(range(len(corridor.facts)))


def test_h_add(corridor, grid):
    assert h_add(corridor, at('c1')) == 3
    assert h_add(corridor, at('c3')) == 1
    assert h_add(corridor, at('c4')) == 0
    assert h_add(corridor, at('c1'), frozenset()) == 0
    # two goal facts are costed independently
    assert h_add(grid, at('a'), at('b', 'c')) == 2
    assert h_add(grid, at('a')) == 2


def test_h_add_unreachable(corridor):
    stranded = corridor.with_init(frozenset())
    assert math.isinf(h_add(stranded, frozenset()))


def test_banning_achievers_cuts_corridor(corridor):
    banned = corridor.achievers(Fact('at', ('c2',)))
    assert {a.args for a in banned} == {('c1', 'c2'), ('c3', 'c2')}
    rpg = build_rpg(corridor, banned)
    assert rpg.facts == at('c1')
    assert not relaxed_reachable(rpg, at('c4'))
    assert relaxed_reachable(build_rpg(corridor), at('c4'))


@pytest.fixture(scope='module', params=range(50), ids=lambda s: f'tiny{s}')
def tiny(request):
    p = random_tiny_instance(request.param)
    return request.param, p, LandmarkOracle(p).states


def test_banning_never_enlarges_reachable_set(tiny):
    seed, p, _ = tiny
    order = np.random.default_rng(seed).permutation(len(p.actions))
    previous = relaxed_closure(p)
    for k in range(1, len(order) + 1):
        banned = [int(i) for i in order[:k]]
        reached = relaxed_closure(p, banned)
        assert reached <= previous
        rpg = build_rpg(p, [p.actions[i] for i in banned])
        assert rpg.facts == {p.facts[i] for i in reached}
        previous = reached
    assert previous == set(p.state_ids(p.init))


def _sample_states(seed, p, states):
    ordered = sorted(states, key=sorted)
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(ordered), size=min(8, len(ordered)), replace=False)
    visited = [f for f in p.facts if f.predicate == 'visited']
    return [
        p.init,
        frozenset(),
        frozenset(visited),
        *(ordered[int(i)] for i in picked),
    ]


def test_h_add_zero_iff_goal_holds(tiny):
    seed, p, states = tiny
    goals = [p.goal, frozenset(), *(frozenset([f]) for f in p.facts)]
    for s in _sample_states(seed, p, states):
        for g in goals:
            assert (h_add(p, s, g) == 0) == (g <= s), (s, g)


def test_h_add_finite_iff_relaxed_reachable(tiny):
    seed, p, states = tiny
    goals = [p.goal, *(frozenset([f]) for f in p.facts)]
    for s in _sample_states(seed, p, states):
        rpg = build_rpg(p, init=s)
        for g in goals:
            finite = math.isfinite(h_add(p, s, g))
            assert finite == relaxed_reachable(rpg, g), (s, g)


def test_reachable_states_are_relaxed_reachable(tiny):
    _, p, states = tiny
    facts = build_rpg(p).facts
    assert p.init in states
    for s in states:
        assert s <= facts
