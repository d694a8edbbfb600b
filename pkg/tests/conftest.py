"""Shared helpers: random game factories and independent Shapley oracles."""

import itertools
import math

import numpy as np
import pytest

import ensemble_shapley as es


def random_game(rng, m=None, lo=2, hi=10):
    """A game with weights uniform in [0, 1/m] and a uniform cutoff."""
    if m is None:
        m = int(rng.integers(lo, hi + 1))
    weights = rng.uniform(0.0, 1.0 / m, size=m)
    cutoff = float(rng.uniform(0.0, 1.0))
    return es.build_game(weights, cutoff)


def random_won_game(rng, m=None, lo=2, hi=10):
    while True:
        game = random_game(rng, m=m, lo=lo, hi=hi)
        if game.outcome().won:
            return game


def permutation_shapley(game):
    """Reference oracle: average marginal gains over all m! join orders.

    Only usable for small m; deliberately shares no code with the
    library's subset-enumeration solver.
    """
    m = game.n_players
    weights = game.weights
    phi = np.zeros(m)
    for order in itertools.permutations(range(m)):
        total = 0.0
        value = 0
        for j in order:
            total += weights[j]
            new_value = int(total >= game.cutoff)
            phi[j] += new_value - value
            value = new_value
    return phi / math.factorial(m)


def characteristic_function(game):
    """The game's value on every coalition, indexed by member bitmask."""
    m = game.n_players
    values = np.zeros(1 << m)
    for mask in range(1, 1 << m):
        members = [j for j in range(m) if mask >> j & 1]
        values[mask] = game.coalition_value(members)
    return values


def shapley_of_characteristic(values, m):
    """Shapley values of an arbitrary characteristic function over bitmasks."""
    phi = np.zeros(m)
    for j in range(m):
        bit = 1 << j
        for mask in range(1 << m):
            if mask & bit:
                continue
            size = bin(mask).count("1")
            coef = (
                math.factorial(size)
                * math.factorial(m - size - 1)
                / math.factorial(m)
            )
            phi[j] += coef * (values[mask | bit] - values[mask])
    return phi


@pytest.fixture
def worked_game():
    """Three models at probabilities [0.9, 0.75, 0.3] on a label-1 point."""
    weights = es.score_point([0.9, 0.75, 0.3], 1)
    return es.build_game(weights, 0.5)


@pytest.fixture
def raw_config():
    return es.SolverConfig(normalize=False)
