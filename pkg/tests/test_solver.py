"""Branch-and-bound solver against the enumeration oracle and its contracts."""

import random

import pytest

from maxhrt.core import Matching, build_rank_table, is_stable, validate_matching
from maxhrt.generator import GeneratorConfig, generate
from maxhrt.heuristics import warm_start
from maxhrt.ip_model import build_model
from maxhrt.oracle import OracleLimit, max_stable_size
from maxhrt.solver import (
    SolveOptions,
    SolveStatus,
    extract_matching,
    solve,
    upper_bound,
)

from conftest import M1_PAIRS


def _model(instance):
    return build_model(instance, build_rank_table(instance))


def small_instances(count, seed, max_residents=9):
    rng = random.Random(seed)
    for _ in range(count):
        n2 = rng.randint(2, 3)
        yield generate(
            GeneratorConfig(
                n1=rng.randint(2, max_residents),
                n2=n2,
                total_posts=rng.randint(1, max_residents),
                list_length=min(rng.randint(1, 3), n2),
                tie_density_residents=0.0,
                tie_density_hospitals=rng.choice([0.0, 0.4, 0.85, 1.0]),
                seed=rng.randrange(10**9),
            )
        )


def test_fig1_optimal_six(fig1, fig1_ranks):
    outcome = solve(_model(fig1))
    assert outcome.status is SolveStatus.OPTIMAL
    assert outcome.objective == 6
    assert outcome.proof_bound == 6
    assert is_stable(fig1, fig1_ranks, outcome.matching)
    assert validate_matching(fig1, outcome.matching) == []


def test_single_pair_forced(single_pair):
    outcome = solve(_model(single_pair))
    assert outcome.status is SolveStatus.OPTIMAL
    assert outcome.objective == 1
    assert outcome.matching == Matching({1: 1})


def test_matches_oracle_on_small_instances():
    limit = OracleLimit(max_pairs=40)
    for instance in small_instances(60, seed=5):
        outcome = solve(_model(instance), SolveOptions(seed=3))
        assert outcome.status is SolveStatus.OPTIMAL
        assert outcome.objective == max_stable_size(instance, limit)
        ranks = build_rank_table(instance)
        assert is_stable(instance, ranks, outcome.matching)


def test_objective_at_least_warm_start():
    for instance in small_instances(25, seed=8):
        warm = warm_start(instance, 17)
        outcome = solve(_model(instance), SolveOptions(warm_start=warm, seed=17))
        assert outcome.objective >= len(warm)
        assert outcome.objective <= instance.n1


def test_deterministic_given_seed(fig1):
    first = solve(_model(fig1), SolveOptions(seed=11))
    second = solve(_model(fig1), SolveOptions(seed=11))
    assert first.nodes == second.nodes
    assert first.objective == second.objective
    assert first.matching == second.matching


def test_seed_independent_objective():
    for instance in small_instances(15, seed=21):
        results = {solve(_model(instance), SolveOptions(seed=s)).objective for s in (0, 1, 2)}
        assert len(results) == 1


def test_timeout_returns_warm_start_or_better():
    instance = generate(
        GeneratorConfig(200, 14, 200, 5, 0.0, 0.85, seed=404)
    )
    model = _model(instance)
    warm = warm_start(instance, 0)
    outcome = solve(model, SolveOptions(time_limit=1e-6, warm_start=warm, seed=0))
    assert outcome.status is SolveStatus.FEASIBLE_TIMEOUT
    assert outcome.objective >= len(warm)
    assert outcome.proof_bound >= outcome.objective
    ranks = build_rank_table(instance)
    assert is_stable(instance, ranks, outcome.matching)


def test_rejects_unstable_warm_start(fig1):
    unstable = Matching({1: 2})  # (r1, h1) blocks
    with pytest.raises(ValueError, match="stable"):
        solve(_model(fig1), SolveOptions(warm_start=unstable))


def test_rejects_overlarge_lower_bound(fig1):
    with pytest.raises(ValueError, match="lower bound"):
        solve(_model(fig1), SolveOptions(lower_bound=7))


def test_lower_bound_accepted(fig1):
    outcome = solve(_model(fig1), SolveOptions(lower_bound=5))
    assert outcome.objective == 6


def test_rejects_bad_time_limit():
    with pytest.raises(ValueError):
        SolveOptions(time_limit=0)


def test_upper_bound_fig1(fig1):
    model = _model(fig1)
    assert upper_bound(model, {}) == 6
    # cutting both of r1's pairs caps the bound at 5
    fixing = {model.column_of[(1, 1)]: 0, model.column_of[(1, 2)]: 0}
    assert upper_bound(model, fixing) <= 5
    indicator = {
        col: value
        for col, value in enumerate(model.encode(Matching.from_pairs(M1_PAIRS)))
    }
    assert upper_bound(model, indicator) == 6


def test_upper_bound_admissible_on_smalls():
    limit = OracleLimit(max_pairs=40)
    for instance in small_instances(30, seed=12):
        model = _model(instance)
        assert upper_bound(model, {}) >= max_stable_size(instance, limit)


def test_upper_bound_rejects_bad_fixing(fig1):
    model = _model(fig1)
    with pytest.raises(ValueError, match="two hospitals"):
        upper_bound(model, {model.column_of[(1, 1)]: 1, model.column_of[(1, 2)]: 1})


def test_extract_matching_round_trip(fig1):
    model = _model(fig1)
    vector = model.encode(Matching.from_pairs(M1_PAIRS))
    matching = extract_matching(model, vector)
    assert matching == Matching.from_pairs(M1_PAIRS)
    assert model.encode(matching) == vector


def test_extract_rejects_zero_vector(single_pair):
    model = _model(single_pair)
    with pytest.raises(ValueError, match="constraints"):
        extract_matching(model, [0])


def test_extract_rejects_fractional(single_pair):
    model = _model(single_pair)
    with pytest.raises(ValueError, match="fractional"):
        extract_matching(model, [0.5])
