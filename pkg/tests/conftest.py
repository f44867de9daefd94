import os

import hypothesis
import numpy as np
import pytest

from superhedge.models import Claim, OnePeriodMarket, PriorFamily, RandomVariable, ScenarioTree, TreeNode
from superhedge.services import (
    ArbitrageService,
    GeometryService,
    MeasureService,
    ModelLoader,
    MultiperiodService,
    PricingService,
)

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=100, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


def make_market(y, values, priors=None):
    """One-period market; a single uniform prior unless priors are given."""
    values = [v if isinstance(v, (list, tuple)) else [v] for v in values]
    y = y if isinstance(y, (list, tuple)) else [y]
    if priors is None:
        priors = [[1.0 / len(values)] * len(values)]
    return OnePeriodMarket(
        d=len(y),
        y=tuple(y),
        Y=RandomVariable(values=tuple(tuple(v) for v in values)),
        priors=PriorFamily.from_weights(priors),
    )


def make_tree(horizon, nodes):
    """
    Scenario tree from (id, depth, price, children, priors) tuples.
    """
    built = {}
    for node_id, depth, price, children, priors in nodes:
        built[node_id] = TreeNode(
            id=node_id,
            depth=depth,
            price=price,
            children=tuple(children),
            child_priors=PriorFamily.from_weights(priors) if priors else None,
        )
    return ScenarioTree(nodes=built, horizon=horizon)


def call(strike, asset=0):
    return lambda z: max(z[asset] - strike, 0.0)


def claim_on_support(market, payoff):
    support = MeasureService().quasi_support(market.priors, market.Y)
    return Claim.from_payoff(payoff, support.points)


@pytest.fixture
def geometry():
    return GeometryService()


@pytest.fixture
def measures():
    return MeasureService()


@pytest.fixture
def pricing():
    return PricingService()


@pytest.fixture
def arbitrage():
    return ArbitrageService()


@pytest.fixture
def multiperiod():
    return MultiperiodService()


@pytest.fixture
def loader():
    return ModelLoader()


@pytest.fixture
def binomial():
    return make_market(100, [80, 120], [[0.5, 0.5]])


@pytest.fixture
def binomial_call(binomial):
    return claim_on_support(binomial, call(100))


@pytest.fixture
def two_period_tree():
    """S0 = 100 with children 0.8 S and 1.2 S at every node."""
    half = [[0.5, 0.5]]
    return make_tree(2, [
        (0, 0, 100.0, [1, 2], half),
        (1, 1, 80.0, [3, 4], half),
        (2, 1, 120.0, [5, 6], half),
        (3, 2, 64.0, [], None),
        (4, 2, 96.0, [], None),
        (5, 2, 96.0, [], None),
        (6, 2, 144.0, [], None),
    ])


def random_priors(rng, atoms, zero_rate=0.2):
    """One to three prior rows with random zero patterns."""
    rows = []
    for _ in range(int(rng.integers(1, 4))):
        weights = rng.dirichlet(np.ones(atoms))
        weights[rng.random(atoms) < zero_rate] = 0.0
        if weights.sum() == 0.0:
            weights[rng.integers(atoms)] = 1.0
        rows.append(weights / weights.sum())
    return rows


def near_boundary_market(rng, mode=None):
    """
    Market with non-integer prices and y placed by mode:
    "vertex" a support point, "edge" a midpoint of two support points,
    "interior" a random convex combination. Vertex and edge prices get a
    perturbation of size 1e-8 to 1e-13.
    """
    mode = mode or ("vertex", "edge", "interior")[int(rng.integers(3))]
    d = int(rng.integers(1, 4))
    atoms = int(rng.integers(2, 9))
    values = rng.uniform(1.0, 200.0, size=(atoms, d))
    rows = random_priors(rng, atoms)
    charged = values[np.flatnonzero(np.array(rows).max(axis=0) > 1e-12)]
    if mode == "interior":
        y = rng.dirichlet(np.ones(len(charged))) @ charged
    else:
        picks = rng.choice(len(charged), size=1 if mode == "vertex" else 2)
        y = charged[picks].mean(axis=0)
        y = y + rng.choice([-1.0, 1.0], size=d) * 10.0 ** rng.uniform(-13.0, -8.0, size=d)
    return make_market(y.tolist(), values.tolist(), rows)
