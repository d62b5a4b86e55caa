import itertools
from fractions import Fraction

import pytest

from lmgr.evaluation import (
    EvaluationRow,
    OnlineProblem,
    evaluate,
    observation_prefix,
    precision,
    summary_table,
    write_plot_data,
)
from lmgr.evaluation.online import (
    DEFAULT_LAMBDAS,
    OVERALL_DOMAIN,
    as_fraction,
    prefix_precision,
)
from lmgr.evaluation.output import CSV_FIELDS, mean_over_lambda, rows_to_csv
from lmgr.landmarks import Category
from lmgr.pddl import RecognitionBundle, load_bundle
from lmgr.recognition import RecognitionConfig, goal_landmarks

from .conftest import write_branching_bundle

FILTER_ON = RecognitionConfig('ex', 'completion', False)
FILTER_OFF = RecognitionConfig('ex', 'completion', True)


@pytest.fixture(scope='module')
def online(branching):
    return OnlineProblem(branching)


@pytest.fixture(scope='module')
def missed(tmp_path_factory):
    # observed towards c4a while the true goal is c4b
    path = tmp_path_factory.mktemp('missed')
    return OnlineProblem(load_bundle(write_branching_bundle(path, 1)))


@pytest.fixture(scope='module')
def short(tmp_path_factory):
    path = tmp_path_factory.mktemp('short')
    bundle = write_branching_bundle(path, 1, [('c1', 'c2')])
    return OnlineProblem(load_bundle(bundle))


def test_as_fraction():
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction('3/10') == Fraction(3, 10)
    assert as_fraction(1) == 1
    assert DEFAULT_LAMBDAS[0] == Fraction(1, 10)
    assert DEFAULT_LAMBDAS[-1] == 1
    assert len(DEFAULT_LAMBDAS) == 10


def test_online_problem(online, branching):
    assert online.T == 3
    assert online.domain == 'nav'
    assert online.variant == 'original'
    assert 'T=3' in repr(online)
    empty = RecognitionBundle(
        'empty',
        branching.domain,
        branching.template,
        branching.problem,
        branching.goals,
        0,
        [],
    )
    with pytest.raises(ValueError, match='no observations'):
        OnlineProblem(empty)


@pytest.mark.parametrize(
    'lam, n',
    [
        (Fraction(1, 10), 0),
        (0.3, 0),
        ('1/3', 1),
        (0.5, 1),
        (Fraction(2, 3), 2),
        (0.9, 2),
        (1, 3),
    ],
)
def test_observation_prefix(online, lam, n):
    prefix = observation_prefix(online, lam)
    assert prefix == online.bundle.observations[:n]


def test_observation_prefix_range(online):
    with pytest.raises(ValueError, match='lambda'):
        observation_prefix(online, Fraction(3, 2))


def test_prefix_precision(online, missed, short):
    assert prefix_precision(online, FILTER_ON, 1) == 1
    assert prefix_precision(online, FILTER_ON, '1/10') == Fraction(1, 2)
    assert prefix_precision(online, FILTER_ON, 0.5) == Fraction(1, 2)
    assert prefix_precision(missed, FILTER_ON, 1) == 0
    assert prefix_precision(short, FILTER_ON, 1) == Fraction(1, 2)


def test_precision(online, missed, short):
    assert precision(1, [online], FILTER_ON) == 1
    assert precision(1, [online, missed], FILTER_ON) == Fraction(1, 2)
    assert precision(1, [short, missed], FILTER_ON) == Fraction(1, 4)
    with pytest.raises(ValueError):
        precision(1, [], FILTER_ON)


def test_evaluate_rows(online):
    rows = evaluate([online], [FILTER_ON, FILTER_OFF])
    assert len(rows) == 20
    assert all(isinstance(r, EvaluationRow) for r in rows)
    assert {r.lam for r in rows} == set(DEFAULT_LAMBDAS)
    assert all(r.domain == 'nav' and r.n_problems == 1 for r in rows)

    on = {r.lam: r.precision for r in rows if not r.include_init}
    assert on[Fraction(3, 10)] == Fraction(1, 2)
    assert on[Fraction(6, 10)] == Fraction(1, 2)
    assert on[Fraction(7, 10)] == 1
    assert on[Fraction(1)] == 1

    overall = evaluate([online], [FILTER_ON], include_overall=True)
    assert len(overall) == 20
    assert {r.domain for r in overall} == {'nav', OVERALL_DOMAIN}


def test_evaluate_is_order_free(online, missed, short):
    configs = [FILTER_ON, RecognitionConfig('rhw', 'uniqueness', True)]
    rows = evaluate([online, missed, short], configs)
    assert evaluate([short, online, missed], configs[::-1]) == rows
    assert evaluate([online, missed, short], configs, use_cache=False) == rows
    assert evaluate([online, missed, short], configs, jobs=2) == rows
    assert all(r.n_problems == 3 for r in rows)


def test_evaluate_errors(online):
    with pytest.raises(ValueError, match='no problems'):
        evaluate([], [FILTER_ON])
    with pytest.raises(ValueError, match='configurations'):
        evaluate([online], [])
    with pytest.raises(ValueError, match='lambda'):
        evaluate([online], [FILTER_ON], [2])


def test_csv(online):
    rows = evaluate([online], [FILTER_ON, FILTER_OFF], ['1/10', 1])
    text = rows_to_csv(rows)
    assert text == rows_to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ','.join(CSV_FIELDS)
    assert len(lines) == 5
    assert lines[1] == 'nav,original,ex,completion,false,0.100000,0.500000,1'
    assert lines[-1] == 'nav,original,ex,completion,true,1.000000,1.000000,1'


def test_plot_data(online, tmp_path):
    rows = evaluate([online], [FILTER_ON, FILTER_OFF], include_overall=True)
    written = write_plot_data(rows, tmp_path / 'plots')
    assert [p.name for p in written] == ['original_completion.dat']
    text = written[0].read_text()
    blocks = text.split('\n\n\n')
    assert len(blocks) == 2
    assert blocks[0].startswith('# domain all\n# lambda EX EX-init\n')
    assert '0.100000 0.500000 0.500000' in blocks[1]
    assert '1.000000 1.000000 1.000000' in blocks[1]


def test_mean_over_lambda(online):
    rows = evaluate([online], [FILTER_ON], include_overall=True)
    expected = (6 * Fraction(1, 2) + 4) / 10
    key = ('original', 'ex', 'completion', False)
    assert mean_over_lambda(rows) == {key: expected}
    assert mean_over_lambda(rows, OVERALL_DOMAIN) == {key: expected}
    assert mean_over_lambda(rows, 'other') == {}

    table = summary_table(rows)
    assert table.field_names == [
        'Variant',
        'Recognizer',
        'Heuristic',
        'Mean Precision',
    ]
    assert 'EX' in table.get_string()
    assert '0.700' in table.get_string()


def test_filtering_initial_state_landmarks_helps(suite_problems):
    """Dropping initial-state landmarks never hurts on the generated suite
    when the true goal is the longest or a random one."""
    configs = [
        RecognitionConfig(e, h, i)
        for e, h, i in itertools.product(
            ('ex', 'rhw'), ('completion', 'uniqueness'), (False, True)
        )
    ]
    rows = evaluate(suite_problems, configs, include_overall=True)
    means = mean_over_lambda(rows)
    per_lambda = {
        (r.variant, r.extractor, r.heuristic, r.include_init, r.lam): r
        for r in rows
        if r.domain == OVERALL_DOMAIN
    }
    for variant in ('D_L', 'D_R'):
        for extractor, heuristic in itertools.product(
            ('ex', 'rhw'), ('completion', 'uniqueness')
        ):
            on = means[variant, extractor, heuristic, False]
            off = means[variant, extractor, heuristic, True]
            assert on >= off, (variant, extractor, heuristic)
            for lam in DEFAULT_LAMBDAS:
                row_on = per_lambda[variant, extractor, heuristic, False, lam]
                row_off = per_lambda[variant, extractor, heuristic, True, lam]
                assert row_on.n_problems == 60
                assert row_on.precision >= row_off.precision - Fraction(
                    2, 100
                )


def test_filtering_helps_with_shared_landmarks(shared_problems):
    """The goals of the stem suite share NonTrivial landmarks, and dropping
    initial-state landmarks still never lowers precision."""
    assert len(shared_problems) == 60
    for problem in shared_problems:
        sets = goal_landmarks(problem.bundle, 'ex')
        shared = frozenset.intersection(
            *(
                frozenset(
                    lm for lm in lms if lm.category is Category.NON_TRIVIAL
                )
                for lms in sets
            )
        )
        assert shared
        n_init = {
            sum(lm.category is Category.INITIAL_STATE for lm in lms)
            for lms in sets
        }
        assert n_init == {1}

    configs = [
        RecognitionConfig(e, h, i)
        for e, h, i in itertools.product(
            ('ex', 'rhw'), ('completion', 'uniqueness'), (False, True)
        )
    ]
    rows = evaluate(shared_problems, configs, include_overall=True)
    means = mean_over_lambda(rows)
    per_lambda = {
        (r.variant, r.extractor, r.heuristic, r.include_init, r.lam): r
        for r in rows
        if r.domain == OVERALL_DOMAIN
    }
    for variant in ('D_L', 'D_R'):
        for extractor, heuristic in itertools.product(
            ('ex', 'rhw'), ('completion', 'uniqueness')
        ):
            on = means[variant, extractor, heuristic, False]
            off = means[variant, extractor, heuristic, True]
            assert on >= off, (variant, extractor, heuristic)
            for lam in DEFAULT_LAMBDAS:
                row_on = per_lambda[variant, extractor, heuristic, False, lam]
                row_off = per_lambda[variant, extractor, heuristic, True, lam]
                assert row_on.n_problems == 20
                assert row_on.precision >= row_off.precision, lam
