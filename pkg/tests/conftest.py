from __future__ import annotations

import numpy as np
import pytest

from lmgr.evaluation import load_problems, mutate_suite
from lmgr.pddl import (
    discover_bundles,
    ground,
    load_bundle,
    parse_domain,
    parse_problem,
    write_bundle,
)
from lmgr.planning import Fact, plan_observations

NAV_DOMAIN = """
(define (domain nav)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (adjacent ?a ?b - cell))
  (:action move
    :parameters (?from ?to - cell)
    :precondition (and (at ?from) (adjacent ?from ?to))
    :effect (and (at ?to) (not (at ?from)))))
"""

VISIT_DOMAIN = """
(define (domain visit)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (visited ?c - cell) (adjacent ?a ?b - cell))
  (:action move
    :parameters (?from ?to - cell)
    :precondition (and (at ?from) (adjacent ?from ?to))
    :effect (and (at ?to) (visited ?to) (not (at ?from)))))
"""

SMART_HOME_DOMAIN = """
; grid encoding of a flat: kitchen, hall and bathroom cells
(define (domain smart-home)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (is-at ?c - cell) (connected ?a ?b - cell))
  (:action walk
    :parameters (?from ?to - cell)
    :precondition (and (is-at ?from) (connected ?from ?to))
    :effect (and (is-at ?to) (not (is-at ?from)))))
"""

DELIVERY_DOMAIN = """
(define (domain delivery)
  (:requirements :strips :typing)
  (:types location package)
  (:predicates
    (truck-at ?l - location)
    (at ?p - package ?l - location)
    (in ?p - package)
    (road ?a ?b - location)
    (depot ?l - location)
    (dest ?p - package ?l - location))
  (:action drive
    :parameters (?from ?to - location)
    :precondition (and (truck-at ?from) (road ?from ?to))
    :effect (and (truck-at ?to) (not (truck-at ?from))))
  (:action load
    :parameters (?p - package ?l - location)
    :precondition (and (truck-at ?l) (at ?p ?l) (depot ?l))
    :effect (and (in ?p) (not (at ?p ?l))))
  (:action unload
    :parameters (?p - package ?l - location)
    :precondition (and (truck-at ?l) (in ?p) (dest ?p ?l))
    :effect (and (at ?p ?l) (not (in ?p)))))
"""

ROVER_DOMAIN = """
(define (domain rover)
  (:requirements :strips :typing)
  (:types waypoint)
  (:predicates
    (rover-at ?w - waypoint)
    (path ?a ?b - waypoint)
    (site ?w - waypoint)
    (have-sample ?w - waypoint))
  (:action navigate
    :parameters (?from ?to - waypoint)
    :precondition (and (rover-at ?from) (path ?from ?to))
    :effect (and (rover-at ?to) (not (rover-at ?from))))
  (:action take-sample
    :parameters (?w - waypoint)
    :precondition (and (rover-at ?w) (site ?w))
    :effect (and (have-sample ?w))))
"""


def graph_problem(
    name: str,
    domain: str,
    cells: list[str],
    edges: list[tuple[str, str]],
    init: list[str],
    goal: list[str],
    edge_predicate: str = 'adjacent',
    cell_type: str = 'cell',
) -> str:
    """PDDL problem over an undirected graph of cells."""
    facts = list(init)
    for a, b in edges:
        facts.append(f'({edge_predicate} {a} {b})')
        facts.append(f'({edge_predicate} {b} {a})')
    return (
        f'(define (problem {name})\n'
        f'  (:domain {domain})\n'
        f'  (:objects {" ".join(cells)} - {cell_type})\n'
        f'  (:init {" ".join(facts)})\n'
        f'  (:goal (and {" ".join(goal)})))\n'
    )


def chain(cells: list[str]) -> list[tuple[str, str]]:
    return list(zip(cells[:-1], cells[1:]))


CORRIDOR_PROBLEM = graph_problem(
    'corridor',
    'nav',
    ['c1', 'c2', 'c3', 'c4'],
    chain(['c1', 'c2', 'c3', 'c4']),
    ['(at c1)'],
    ['(at c4)'],
)

GRID_PROBLEM = graph_problem(
    'grid',
    'nav',
    ['a', 'b', 'c', 'd'],
    [('a', 'b'), ('a', 'c'), ('b', 'd'), ('c', 'd')],
    ['(at a)'],
    ['(at d)'],
)

SMART_HOME_PROBLEM = graph_problem(
    'flat',
    'smart-home',
    ['k2', 'h1', 'h2', 'h3', 'ba1', 'ba2', 'ba3', 'ba4'],
    [
        ('k2', 'h1'),
        ('k2', 'h2'),
        ('h1', 'h3'),
        ('h2', 'h3'),
        ('h3', 'ba1'),
        ('ba1', 'ba2'),
        ('ba1', 'ba4'),
        ('ba2', 'ba3'),
        ('ba4', 'ba3'),
    ],
    ['(is-at k2)'],
    ['(is-at ba3)'],
    edge_predicate='connected',
)

BRANCHING_TEMPLATE = graph_problem(
    'branching',
    'nav',
    ['c1', 'c2', 'c3a', 'c4a', 'c3b', 'c4b'],
    [
        ('c1', 'c2'),
        ('c2', 'c3a'),
        ('c3a', 'c4a'),
        ('c2', 'c3b'),
        ('c3b', 'c4b'),
    ],
    ['(at c1)'],
    ['<HYPOTHESIS>'],
)


def at(*cells: str) -> frozenset[Fact]:
    return frozenset(Fact('at', (c,)) for c in cells)


def ground_text(domain_text: str, problem_text: str, goals=()):
    d = parse_domain(domain_text)
    p = parse_problem(problem_text, d)
    return ground(d, p, goals)


@pytest.fixture(scope='session')
def corridor():
    return ground_text(NAV_DOMAIN, CORRIDOR_PROBLEM)


@pytest.fixture(scope='session')
def grid():
    return ground_text(NAV_DOMAIN, GRID_PROBLEM)


@pytest.fixture(scope='session')
def smart_home():
    return ground_text(SMART_HOME_DOMAIN, SMART_HOME_PROBLEM)


def write_branching_bundle(directory, true_goal=0, observations=None):
    """Two corridor goals branching after c2, observed towards c4a."""
    goals = [at('c4a'), at('c4b')]
    problem = ground_text(NAV_DOMAIN, BRANCHING_TEMPLATE, goals)
    if observations is None:
        observations = [('c1', 'c2'), ('c2', 'c3a'), ('c3a', 'c4a')]
    actions = [problem.find_action('move', args) for args in observations]
    return write_bundle(
        directory,
        NAV_DOMAIN,
        BRANCHING_TEMPLATE,
        goals,
        true_goal,
        actions,
    )


@pytest.fixture(scope='session')
def branching_dir(tmp_path_factory):
    return write_branching_bundle(tmp_path_factory.mktemp('branching'))


@pytest.fixture(scope='session')
def branching(branching_dir):
    return load_bundle(branching_dir)


def random_tiny_instance(seed: int):
    """A visit problem over a random connected graph of at most 6 cells."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 7))
    cells = [f'v{i}' for i in range(n)]
    edges = set()
    for i in range(1, n):
        edges.add((cells[int(rng.integers(i))], cells[i]))
    for _ in range(int(rng.integers(0, n))):
        i, j = sorted(rng.choice(n, size=2, replace=False))
        edges.add((cells[i], cells[j]))
    n_goal = int(rng.integers(1, 3))
    targets = rng.choice(np.arange(1, n), size=n_goal, replace=False)
    goal = [f'(visited {cells[i]})' for i in sorted(targets)]
    text = graph_problem(
        f'tiny-{seed}',
        'visit',
        cells,
        sorted(edges),
        [f'(at {cells[0]})'],
        goal,
    )
    return ground_text(VISIT_DOMAIN, text)


@pytest.fixture(scope='session')
def tiny_instances():
    return [random_tiny_instance(seed) for seed in range(50)]


# Generated suite: each candidate goal lies on its own spoke of a star,
# with goal cells at depth 10 to 12, so every plan has at least 10 steps.
# With a stem the agent starts at the far end of a corridor leading to the
# hub, whose cells are then landmarks shared by all candidate goals.

N_SPOKES = 4
SPOKE_DEPTH = 12
GOAL_DEPTHS = (10, 11, 12)
N_GOALS = 3


def star_cells(stem: int = 0) -> tuple[list[str], list[tuple[str, str]]]:
    corridor = [f'st{j}' for j in range(stem)]
    cells = [*corridor, 'hub']
    edges = chain([*corridor, 'hub'])
    for s in range(N_SPOKES):
        spoke = ['hub'] + [f'r{s}x{j}' for j in range(1, SPOKE_DEPTH + 1)]
        cells += spoke[1:]
        edges += chain(spoke)
    return cells, edges


def _edge_facts(predicate, edges):
    return [f'({predicate} {a} {b})' for a, b in edges] + [
        f'({predicate} {b} {a})' for a, b in edges
    ]


def generated_problem(domain: str, seed: int, stem: int = 0):
    """Domain text, template text and candidate goals of one problem."""
    rng = np.random.default_rng(seed)
    cells, edges = star_cells(stem)
    start = cells[0]
    spokes = rng.permutation(N_SPOKES)[:N_GOALS]
    depth_sets = [
        sorted(
            rng.choice(
                GOAL_DEPTHS, size=int(rng.integers(1, 4)), replace=False
            )
        )
        for _ in spokes
    ]
    goal_cells = [
        [f'r{s}x{d}' for d in depths]
        for s, depths in zip(spokes, depth_sets)
    ]
    sites = [
        f'r{s}x{d}' for s in range(N_SPOKES) for d in GOAL_DEPTHS
    ]

    if domain == 'visit':
        objects = f'{" ".join(cells)} - cell'
        init = [f'(at {start})', *_edge_facts('adjacent', edges)]
        goals = [
            frozenset(Fact('visited', (c,)) for c in gc) for gc in goal_cells
        ]
        domain_text = VISIT_DOMAIN
    elif domain == 'rover':
        objects = f'{" ".join(cells)} - waypoint'
        init = [f'(rover-at {start})', *_edge_facts('path', edges)]
        init += [f'(site {w})' for w in sites]
        goals = [
            frozenset(Fact('have-sample', (c,)) for c in gc)
            for gc in goal_cells
        ]
        domain_text = ROVER_DOMAIN
    else:
        packages = []
        init = [
            f'(truck-at {start})',
            '(depot hub)',
            *_edge_facts('road', edges),
        ]
        goals = []
        for i, (s, gc) in enumerate(zip(spokes, goal_cells)):
            goal = set()
            for k, c in enumerate(gc):
                p = f'p{i}k{k}'
                packages.append(p)
                init.append(f'(at {p} hub)')
                init += [f'(dest {p} r{s}x{d})' for d in GOAL_DEPTHS]
                goal.add(Fact('at', (p, c)))
            goals.append(frozenset(goal))
        objects = (
            f'{" ".join(cells)} - location {" ".join(packages)} - package'
        )
        domain_text = DELIVERY_DOMAIN

    template = (
        f'(define (problem {domain}-{seed})\n'
        f'  (:domain {domain})\n'
        f'  (:objects {objects})\n'
        f'  (:init {" ".join(init)})\n'
        f'  (:goal (and)))\n'
    )
    return domain_text, template, goals, int(rng.integers(N_GOALS))


def write_generated_sources(root, domains, n_problems, stem=0, seed=0):
    """Write generated problems observed towards their true goal."""
    for k, domain in enumerate(domains):
        for i in range(n_problems):
            problem_seed = seed + 100 * k + i
            domain_text, template, goals, true_goal = generated_problem(
                domain, problem_seed, stem
            )
            p = ground_text(domain_text, template, goals)
            plan = plan_observations(p, goals[true_goal], seed=problem_seed)
            write_bundle(
                root / domain / f'p{i:02d}',
                domain_text,
                template,
                goals,
                true_goal,
                plan,
            )
    return root


@pytest.fixture(scope='session')
def generated_sources(tmp_path_factory):
    """3 domains of 20 problems each."""
    root = tmp_path_factory.mktemp('sources')
    return write_generated_sources(root, ('visit', 'delivery', 'rover'), 20)


@pytest.fixture(scope='session')
def generated_suite(generated_sources, tmp_path_factory):
    out = tmp_path_factory.mktemp('suite')
    mutate_suite(generated_sources, out, seed=42)
    return out


@pytest.fixture(scope='session')
def suite_problems(generated_suite):
    return load_problems(discover_bundles(generated_suite))


@pytest.fixture(scope='session')
def shared_suite(tmp_path_factory):
    """Star problems behind a 3-cell stem, with one initial landmark each."""
    root = tmp_path_factory.mktemp('shared-sources')
    write_generated_sources(root, ('visit', 'rover'), 10, stem=3, seed=1000)
    out = tmp_path_factory.mktemp('shared-suite')
    mutate_suite(root, out, seed=7)
    return out


@pytest.fixture(scope='session')
def shared_problems(shared_suite):
    return load_problems(discover_bundles(shared_suite))
