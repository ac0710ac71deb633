"""Shared test helpers: tiny deterministic objectives and brute-force oracles
written independently of the library code paths they check."""
from __future__ import annotations

from itertools import chain, combinations

import numpy as np
import pytest

from cvargreedy import GroundSet, ScenarioSet, StochasticObjective


def powerset(elements):
    elements = list(elements)
    return chain.from_iterable(combinations(elements, r)
                               for r in range(len(elements) + 1))


def brute_force_max(fn, matroid):
    """Independent exhaustive maximizer: scan the whole powerset."""
    best_set, best_val = frozenset(), -float("inf")
    for combo in powerset(matroid.ground.elements):
        s = frozenset(combo)
        if not matroid.is_independent(s):
            continue
        v = fn(s)
        if v > best_val:
            best_set, best_val = s, v
    return best_set, best_val


class ModularDeterministic(StochasticObjective):
    """f(S, y) = sum of fixed weights; identical in every scenario."""

    def __init__(self, weights, matroid):
        self.weights = np.asarray(weights, dtype=float)
        self.ground = matroid.ground
        self.matroid = matroid
        self.gamma_hint = float(self.weights.sum())

    def sample_scenarios(self, count, seed):
        if count < 1:
            raise ValueError("sample count must be at least 1")
        return ScenarioSet(np.zeros((count, 1)), count, int(seed))

    def evaluate(self, subset, scenario):
        subset = self.ground.check_subset(subset)
        return float(sum(self.weights[e] for e in subset))

    def utilities(self, subset, scenarios):
        subset = self.ground.check_subset(subset)
        return np.full(len(scenarios), sum(self.weights[e] for e in subset))


class CoverageDeterministic(StochasticObjective):
    """Deterministic weighted coverage; the classic submodular test function."""

    def __init__(self, cover_sets, weights, matroid):
        self.cover_sets = [frozenset(s) for s in cover_sets]
        self.weights = dict(weights)
        self.ground = matroid.ground
        self.matroid = matroid
        self.gamma_hint = float(sum(self.weights.values()))

    def sample_scenarios(self, count, seed):
        if count < 1:
            raise ValueError("sample count must be at least 1")
        return ScenarioSet(np.zeros((count, 1)), count, int(seed))

    def value(self, subset):
        covered = set().union(*(self.cover_sets[e] for e in subset)) if subset else set()
        return float(sum(self.weights.get(c, 0.0) for c in covered))

    def evaluate(self, subset, scenario):
        return self.value(self.ground.check_subset(subset))

    def utilities(self, subset, scenarios):
        return np.full(len(scenarios), self.value(self.ground.check_subset(subset)))


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
