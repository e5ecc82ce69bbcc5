from collections import Counter
from fractions import Fraction

import pytest

from conftest import atlas_graphs, make_graph
from construct import (
    classify_regime,
    construct_defense_optimal,
    construct_from_partitionable,
    construct_perfect_matching_ne,
    defender_pure_vertex_balanced_ne,
    is_defender_pure_graph,
    pure_vertex_balanced_ne,
)
from exceptions import PreconditionError
from game import defense_ratio_lower_bound, expected_attackers, is_vertex_balanced, verify_ne, verify_pure_ne
from matching import edge_cover_number
from partition import find_delta_partitionable, has_perfect_matching
from schemas.game import MixedProfile
from schemas.matching import FractionalMatching
from schemas.partition import EdgePartition

HALF = Fraction(1, 2)
SMALL_CONNECTED = atlas_graphs(max_nodes=6)


def assert_optimal(profile):
    report = verify_ne(profile)
    n, delta = profile.graph.vertex_count, profile.delta
    assert report.is_ne
    assert report.defense_ratio == defense_ratio_lower_bound(n, delta)
    assert report.total_defender_utility == profile.alpha * report.min_hit
    return report


def test_classify_regime(tt6, star8):
    few = classify_regime(tt6, 2)
    assert (few.kind, few.beta_prime) == ("few", 3)
    boundary = classify_regime(tt6, 3)
    assert boundary.kind == "too-many" and boundary.overlaps_few
    assert classify_regime(star8, 5).kind == "many"
    assert classify_regime(star8, 6).kind == "too-many"


def test_is_defender_pure_graph(tt6, star8):
    assert is_defender_pure_graph(tt6, 3)
    assert not is_defender_pure_graph(tt6, 2)
    assert is_defender_pure_graph(star8, 6)


def test_construct_from_partitionable_tt6(tt6):
    f, p = find_delta_partitionable(tt6, 2)
    profile = construct_from_partitionable(tt6, f, p, 2)
    report = assert_optimal(profile)
    assert report.defense_ratio == Fraction(3, 2)
    assert report.min_hit == Fraction(2, 3)


def test_construct_from_partitionable_small(k2, c3):
    single = FractionalMatching(graph=k2, weights={(0, 1): 1})
    profile = construct_from_partitionable(k2, single, EdgePartition(partites=[[(0, 1)]]), 1)
    assert profile.attacker_strategies == ({0: HALF, 1: HALF},)
    assert assert_optimal(profile).defense_ratio == 1

    triangle = FractionalMatching(graph=c3, weights={e: HALF for e in c3.edges})
    profile = construct_from_partitionable(c3, triangle, EdgePartition(partites=[c3.edges]), 3)
    assert profile.defender_strategies == ({e: Fraction(1, 3) for e in c3.edges},)
    assert assert_optimal(profile).defense_ratio == Fraction(3, 2)


def test_construct_from_partitionable_rejects_bad_certificate(tt6):
    f = FractionalMatching(graph=tt6, weights={(0, 1): 1, (2, 3): 1, (4, 5): 1})
    with pytest.raises(PreconditionError):
        construct_from_partitionable(tt6, f, EdgePartition(partites=[[(0, 1), (2, 3)], [(4, 5)]]), 2)


def test_perfect_matching_construction(tt6, c4, c3):
    profile = construct_perfect_matching_ne(tt6, 1, 1)
    assert profile.defender_strategies == ({(0, 1): Fraction(1, 3), (2, 3): Fraction(1, 3), (4, 5): Fraction(1, 3)},)
    assert assert_optimal(profile).defense_ratio == 3
    assert construct_perfect_matching_ne(tt6, 1, 2) is None
    assert assert_optimal(construct_perfect_matching_ne(c4, 4, 2)).defense_ratio == 1
    with pytest.raises(PreconditionError):
        construct_perfect_matching_ne(c3, 1, 1)
    with pytest.raises(PreconditionError):
        construct_perfect_matching_ne(c4, 1, 3)


@pytest.mark.parametrize("name, alpha, delta, balance", [("K2", 2, 1, Fraction(1)), ("C3", 3, 2, Fraction(3, 4)), ("STAR8", 2, 6, Fraction(1, 6))])
def test_defender_pure_vertex_balanced(name, alpha, delta, balance):
    g = make_graph(name)
    profile = defender_pure_vertex_balanced_ne(g, alpha, delta)
    report = assert_optimal(profile)
    assert report.defense_ratio == 1 and report.min_hit == 1
    assert is_vertex_balanced(profile) == balance
    assert sum((expected_attackers(profile, v) for v in g.vertices), Fraction(0)) == alpha


def test_defender_pure_vertex_balanced_wraps_around(c3):
    profile = defender_pure_vertex_balanced_ne(c3, 5, 5)
    assert profile.delta == 5
    assert assert_optimal(profile).defense_ratio == 1


def test_vertex_balanced_requires_enough_defenders(c3):
    with pytest.raises(PreconditionError):
        defender_pure_vertex_balanced_ne(c3, 1, 1)


def test_pure_vertex_balanced(k2, c3):
    profile = pure_vertex_balanced_ne(k2, 2, 1)
    assert sorted(profile.attacker_choices) == [0, 1]
    assert verify_pure_ne(profile).is_ne

    profile = pure_vertex_balanced_ne(c3, 4, 2)
    counts = Counter(profile.attacker_choices)
    assert all(counts[v] == profile.defenders_on(v) for v in c3.vertices)
    assert verify_pure_ne(profile).is_ne

    with pytest.raises(PreconditionError):
        pure_vertex_balanced_ne(c3, 3, 2)


def test_dispatcher_fixtures(tt6, star8):
    assert assert_optimal(construct_defense_optimal(tt6, 2, 2)).defense_ratio == Fraction(3, 2)
    assert construct_defense_optimal(star8, 2, 5) is None
    assert assert_optimal(construct_defense_optimal(star8, 2, 6)).defense_ratio == 1


CONNECTED_7 = atlas_graphs(max_nodes=7)
MANY_REGIME = [
    (g, delta, beta_prime)
    for g, beta_prime in ((g, edge_cover_number(g)) for g in CONNECTED_7)
    for delta in range(1, g.vertex_count + 1)
    if g.vertex_count < 2 * delta < 2 * beta_prime
]


@pytest.mark.parametrize("g", CONNECTED_7)
def test_many_regime_has_no_defense_optimal_profile(g):
    beta_prime = edge_cover_number(g)
    for delta in range(1, g.vertex_count + 1):
        if g.vertex_count < 2 * delta < 2 * beta_prime:
            assert classify_regime(g, delta).kind == "many"
            assert construct_defense_optimal(g, 2, delta) is None


def _mix_toward(rng, strategy, items):
    eps = Fraction(1, rng.randint(2, 10))
    target = rng.choice(list(items))
    mixed = {item: (1 - eps) * p for item, p in strategy.items()}
    mixed[target] = mixed.get(target, Fraction(0)) + eps
    return mixed


def test_cut_vertex_balanced_profiles_are_never_defense_optimal(rng):
    for _ in range(200):
        g, delta, beta_prime = rng.choice(MANY_REGIME)
        full = defender_pure_vertex_balanced_ne(g, rng.randint(1, 4), beta_prime)
        attackers = list(full.attacker_strategies)
        defenders = list(full.defender_strategies[:delta])
        assert not verify_ne(MixedProfile(graph=g, attacker_strategies=attackers, defender_strategies=defenders)).is_defense_optimal

        attackers = [_mix_toward(rng, s, g.vertices) if rng.random() < 0.5 else s for s in attackers]
        defenders = [_mix_toward(rng, s, g.edges) if rng.random() < 0.5 else s for s in defenders]
        perturbed = MixedProfile(graph=g, attacker_strategies=attackers, defender_strategies=defenders)
        assert not verify_ne(perturbed).is_defense_optimal


def assert_pure_optimal(profile):
    report = verify_pure_ne(profile)
    assert report.is_ne and report.defense_ratio == 1
    assert report.total_defender_utility == len(profile.attacker_choices) * report.min_hit


@pytest.mark.parametrize("name", ["K2", "P3", "C3", "C4", "C6", "TT6", "STAR8"])
def test_builders_on_fixtures(name):
    g = make_graph(name)
    n, beta_prime = g.vertex_count, edge_cover_number(g)
    for delta in range(1, n + 1):
        found = find_delta_partitionable(g, delta)
        if found is not None:
            assert_optimal(construct_from_partitionable(g, *found, 2))
        if has_perfect_matching(g) and n % (2 * delta) == 0:
            assert_optimal(construct_perfect_matching_ne(g, 2, delta))
        if delta >= beta_prime:
            assert_optimal(defender_pure_vertex_balanced_ne(g, 2, delta))
            assert_pure_optimal(pure_vertex_balanced_ne(g, 2 * delta, delta))


def test_builders_on_random_instances(rng):
    for _ in range(100):
        g = rng.choice(SMALL_CONNECTED)
        n, beta_prime = g.vertex_count, edge_cover_number(g)
        alpha = rng.randint(1, 6)

        delta = rng.choice([d for d in range(1, n // 2 + 1) if n % d == 0])
        found = find_delta_partitionable(g, delta)
        if found is not None:
            assert_optimal(construct_from_partitionable(g, *found, alpha))

        if has_perfect_matching(g):
            delta = rng.choice([d for d in range(1, n // 2 + 1) if n % (2 * d) == 0])
            assert_optimal(construct_perfect_matching_ne(g, alpha, delta))

        delta = beta_prime + rng.randint(0, 3)
        assert_optimal(defender_pure_vertex_balanced_ne(g, alpha, delta))
        assert_pure_optimal(pure_vertex_balanced_ne(g, 2 * delta * rng.randint(1, 3), delta))


def test_construction_reduces_even_cycle_certificate(c4):
    f = FractionalMatching(graph=c4, weights={e: HALF for e in c4.edges})
    profile = construct_from_partitionable(c4, f, EdgePartition(partites=[c4.edges]), 2)
    assert profile.defender_strategies == ({(0, 3): HALF, (1, 2): HALF},)
    assert assert_optimal(profile).defense_ratio == 2


@pytest.mark.parametrize("g", SMALL_CONNECTED)
def test_dispatcher_over_small_graphs(g, rng):
    n, beta_prime = g.vertex_count, edge_cover_number(g)
    for delta in range(1, n + 1):
        alpha = rng.randint(1, 4)
        profile = construct_defense_optimal(g, alpha, delta)
        if n < 2 * delta < 2 * beta_prime:
            assert profile is None
            continue
        if delta < beta_prime:
            assert (profile is not None) == (find_delta_partitionable(g, delta) is not None)
        if profile is not None:
            assert_optimal(profile)
            if delta < beta_prime:
                assert n % delta == 0


@pytest.mark.parametrize("g", [g for g in SMALL_CONNECTED if has_perfect_matching(g)])
def test_perfect_matching_boundary_paths_agree(g):
    delta = g.vertex_count // 2
    assert classify_regime(g, delta).overlaps_few
    assert_optimal(construct_defense_optimal(g, 2, delta))
    assert_optimal(construct_perfect_matching_ne(g, 2, delta))
