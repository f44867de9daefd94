import numpy as np
import pytest

from conftest import make_tree
from superhedge.exceptions import InstantaneousProfitError, TreeStructureError, ValidationError
from superhedge.models import MarketClass, PriorFamily, ScenarioTree, TreeNode
from superhedge.services import ArbitrageService, GeometryService, MultiperiodService, PricingService, SimplexSolver

HALF = [[0.5, 0.5]]


def binomial_tree(up=120.0, down=80.0, priors=HALF):
    return make_tree(1, [
        (0, 0, 100.0, [1, 2], priors),
        (1, 1, down, [], None),
        (2, 1, up, [], None),
    ])


def call_payoff(tree, strike=100.0):
    return {n.id: max(n.price[0] - strike, 0.0) for n in tree.nodes.values() if n.is_leaf}


class TestValidateTree:
    def test_binomial_is_valid(self, multiperiod):
        multiperiod.validate_tree(binomial_tree())

    def test_ragged_depth(self, multiperiod):
        tree = make_tree(2, [
            (0, 0, 100.0, [1, 2], HALF),
            (1, 1, 80.0, [3, 4], HALF),
            (2, 1, 120.0, [], None),
            (3, 2, 70.0, [], None),
            (4, 2, 90.0, [], None),
        ])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "ragged_depth"
        assert exc.value.details["node_id"] == 2

    def test_prior_arity_mismatch(self, multiperiod):
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(binomial_tree(priors=[[0.2, 0.3, 0.5]]))
        assert exc.value.error_code == "prior_arity_mismatch"

    def test_internal_node_without_priors(self, multiperiod):
        tree = make_tree(1, [(0, 0, 100.0, [1], None), (1, 1, 100.0, [], None)])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "prior_arity_mismatch"

    def test_cycle(self, multiperiod):
        tree = make_tree(1, [(0, 0, 100.0, [1], [[1.0]]), (1, 1, 100.0, [0], [[1.0]])])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "cycle_detected"

    def test_self_loop(self, multiperiod):
        tree = make_tree(1, [(0, 0, 100.0, [1], [[1.0]]), (1, 1, 100.0, [1], [[1.0]])])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "cycle_detected"

    def test_negative_price(self, multiperiod):
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(binomial_tree(down=-1.0))
        assert exc.value.error_code == "negative_price"

    def test_unknown_child(self, multiperiod):
        tree = make_tree(1, [(0, 0, 100.0, [1, 7], HALF), (1, 1, 100.0, [], None)])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "unknown_node"

    def test_two_roots(self, multiperiod):
        tree = make_tree(0, [(0, 0, 100.0, [], None), (1, 0, 100.0, [], None)])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "multiple_roots"

    def test_depth_mismatch(self, multiperiod):
        tree = make_tree(1, [(0, 0, 100.0, [1, 2], HALF), (1, 1, 80.0, [], None), (2, 2, 120.0, [], None)])
        with pytest.raises(TreeStructureError) as exc:
            multiperiod.validate_tree(tree)
        assert exc.value.error_code == "depth_mismatch"


class TestReachability:
    def test_all_charged(self, multiperiod, two_period_tree):
        assert multiperiod.reachable_nodes(two_period_tree) == frozenset(range(7))

    def test_polar_subtree_is_excluded(self, multiperiod):
        tree = make_tree(2, [
            (0, 0, 100.0, [1, 2], [[1.0, 0.0]]),
            (1, 1, 100.0, [3], [[1.0]]),
            (2, 1, 100.0, [4], [[1.0]]),
            (3, 2, 100.0, [], None),
            (4, 2, 100.0, [], None),
        ])
        assert multiperiod.reachable_nodes(tree) == frozenset({0, 1, 3})

    def test_union_over_priors(self, multiperiod):
        tree = binomial_tree(priors=[[1.0, 0.0], [0.0, 1.0]])
        assert multiperiod.reachable_nodes(tree) == frozenset({0, 1, 2})


class TestOneStepMarket:
    def test_root_market(self, multiperiod):
        market = multiperiod.one_step_market(binomial_tree(), 0)
        assert market.y == (100.0,)
        assert market.Y.values == ((80.0,), (120.0,))

    def test_duplicate_child_prices(self, multiperiod):
        market = multiperiod.one_step_market(binomial_tree(up=110.0, down=110.0), 0)
        assert market.Y.atom_count == 2
        assert multiperiod.pricing.support(market).points == ((110.0,),)

    def test_polar_child_is_not_in_support(self, multiperiod):
        market = multiperiod.one_step_market(binomial_tree(priors=[[0.0, 1.0]]), 0)
        assert multiperiod.pricing.support(market).points == ((120.0,),)

    def test_leaf(self, multiperiod):
        with pytest.raises(ValidationError) as exc:
            multiperiod.one_step_market(binomial_tree(), 1)
        assert exc.value.error_code == "leaf_node"

    def test_unknown_node(self, multiperiod):
        with pytest.raises(TreeStructureError):
            multiperiod.one_step_market(binomial_tree(), 9)


class TestGlobalChecks:
    def test_bracketing_tree(self, multiperiod, two_period_tree):
        report = multiperiod.global_aip(two_period_tree)
        assert report.global_aip and report.global_na
        assert report.failing_nodes == ()
        assert multiperiod.global_na(two_period_tree) == (True, ())

    def test_failing_node_is_listed(self, multiperiod):
        tree = make_tree(2, [
            (0, 0, 100.0, [1, 2], HALF),
            (1, 1, 80.0, [3, 4], HALF),
            (2, 1, 120.0, [5, 6], HALF),
            (3, 2, 90.0, [], None),
            (4, 2, 100.0, [], None),
            (5, 2, 100.0, [], None),
            (6, 2, 140.0, [], None),
        ])
        report = multiperiod.global_aip(tree)
        assert not report.global_aip
        assert report.ip_nodes == (1,)
        assert report.failing_nodes[0].verdict is MarketClass.IP

    def test_polar_violation_is_ignored(self, multiperiod):
        tree = make_tree(2, [
            (0, 0, 100.0, [1, 2, 7], [[0.5, 0.5, 0.0]]),
            (1, 1, 80.0, [3, 4], HALF),
            (2, 1, 120.0, [5, 6], HALF),
            (3, 2, 70.0, [], None),
            (4, 2, 90.0, [], None),
            (5, 2, 110.0, [], None),
            (6, 2, 130.0, [], None),
            (7, 1, 100.0, [8], [[1.0]]),
            (8, 2, 150.0, [], None),
        ])
        assert multiperiod.global_aip(tree).global_aip
        assert 7 not in multiperiod.reachable_nodes(tree)

    def test_vertex_node_fails_na_only(self, multiperiod):
        tree = make_tree(2, [
            (0, 0, 100.0, [1, 2], HALF),
            (1, 1, 80.0, [3, 4], HALF),
            (2, 1, 120.0, [5, 6], HALF),
            (3, 2, 80.0, [], None),
            (4, 2, 100.0, [], None),
            (5, 2, 100.0, [], None),
            (6, 2, 140.0, [], None),
        ])
        report = multiperiod.global_aip(tree)
        assert report.global_aip and not report.global_na
        assert multiperiod.global_na(tree) == (False, (1,))
        assert multiperiod.compare_na_aip(tree) == (False, (1,))

    def test_parallel_reports_are_identical(self, two_period_tree):
        serial = MultiperiodService().global_aip(two_period_tree)
        parallel = MultiperiodService(parallel=True, max_workers=4).global_aip(two_period_tree)
        assert serial == parallel


class TestBackwardSuperhedge:
    def test_one_period_binomial(self, multiperiod):
        tree = binomial_tree()
        hedges = multiperiod.backward_superhedge(tree, call_payoff(tree))
        assert hedges[0].value == pytest.approx(10.0, abs=1e-9)
        assert hedges[0].theta[0] == pytest.approx(0.5, abs=1e-9)

    def test_two_period_call(self, multiperiod, two_period_tree):
        hedges = multiperiod.backward_superhedge(two_period_tree, call_payoff(two_period_tree))
        assert [hedges[n].value for n in (3, 4, 5, 6)] == [0.0, 0.0, 0.0, 44.0]
        assert hedges[1].value == pytest.approx(0.0, abs=1e-9)
        assert hedges[2].value == pytest.approx(22.0, abs=1e-9)
        assert hedges[0].value == pytest.approx(11.0, abs=1e-9)
        assert list(hedges) == list(range(7))

    def test_parallel_matches_serial(self, two_period_tree):
        payoff = call_payoff(two_period_tree)
        serial = MultiperiodService().backward_superhedge(two_period_tree, payoff)
        parallel = MultiperiodService(parallel=True).backward_superhedge(two_period_tree, payoff)
        assert serial == parallel

    def test_constant_tree(self, multiperiod):
        tree = make_tree(1, [
            (0, 0, 50.0, [1, 2, 3], [[0.5, 0.5, 0.0]]),
            (1, 1, 50.0, [], None),
            (2, 1, 50.0, [], None),
            (3, 1, 50.0, [], None),
        ])
        hedges = multiperiod.backward_superhedge(tree, {1: 4.0, 2: 9.0})
        assert hedges[0].value == 9.0
        assert not hedges[3].reachable and hedges[3].value is None

    def test_global_ip(self, multiperiod):
        tree = binomial_tree(up=130.0, down=110.0)
        with pytest.raises(InstantaneousProfitError) as exc:
            multiperiod.backward_superhedge(tree, call_payoff(tree))
        assert exc.value.error_code == "global_ip_detected"
        assert exc.value.details["node_id"] == 0
        assert exc.value.exit_code == 3

    def test_missing_leaf_payoff(self, multiperiod):
        with pytest.raises(ValidationError) as exc:
            multiperiod.backward_superhedge(binomial_tree(), {1: 0.0})
        assert exc.value.error_code == "missing_value"

    @pytest.mark.parametrize("seed", range(20))
    def test_monotone_and_cash_invariant(self, multiperiod, two_period_tree, seed):
        rng = np.random.default_rng(seed)
        payoff = {n: float(rng.normal(scale=10.0)) for n in (3, 4, 5, 6)}
        bumped = {n: v + float(rng.uniform(0.0, 5.0)) for n, v in payoff.items()}
        shifted = {n: v + 7.0 for n, v in payoff.items()}

        root = multiperiod.backward_superhedge(two_period_tree, payoff)[0].value
        assert multiperiod.backward_superhedge(two_period_tree, bumped)[0].value >= root - 1e-9
        assert multiperiod.backward_superhedge(two_period_tree, shifted)[0].value == pytest.approx(root + 7.0, abs=1e-8)

    @pytest.mark.parametrize("seed", range(20))
    def test_single_prior_recursion_is_concave_envelope(self, multiperiod, two_period_tree, seed):
        rng = np.random.default_rng(seed)
        payoff = {n: float(rng.normal(scale=10.0)) for n in (3, 4, 5, 6)}
        hedges = multiperiod.backward_superhedge(two_period_tree, payoff)

        geometry = multiperiod.pricing.geometry
        values = dict(payoff)
        for node_id in (1, 2, 0):
            node = two_period_tree.nodes[node_id]
            samples = [(two_period_tree.nodes[c].price, values[c]) for c in node.children]
            values[node_id] = geometry.concave_envelope_eval(samples, node.price)
            assert hedges[node_id].value == pytest.approx(values[node_id], abs=1e-8)


class TestBruteForce:
    def test_bracketing_tree(self, multiperiod, two_period_tree):
        assert not multiperiod.brute_force_global_ip(two_period_tree)

    def test_children_above_price(self, multiperiod):
        tree = binomial_tree(up=130.0, down=110.0)
        assert multiperiod.grid_ip_nodes(tree, radius=1.0, step=1.0) == (0,)

    def test_constant_tree(self, multiperiod):
        tree = make_tree(1, [(0, 0, 100.0, [1], [[1.0]]), (1, 1, 100.0, [], None)])
        assert not multiperiod.brute_force_global_ip(tree)

    def test_scale_exceeded(self, multiperiod):
        nodes = [(t, t, 100.0, [t + 1], [[1.0]]) for t in range(5)] + [(5, 5, 100.0, [], None)]
        with pytest.raises(ValidationError) as exc:
            multiperiod.brute_force_global_ip(make_tree(5, nodes))
        assert exc.value.error_code == "scale_exceeded"


def random_tree(rng):
    horizon = int(rng.integers(1, 4))
    nodes = {0: TreeNode(id=0, depth=0, price=100.0)}
    frontier, next_id = [0], 1
    for depth in range(1, horizon + 1):
        layer = []
        for parent_id in frontier:
            parent = nodes[parent_id]
            branching = int(rng.integers(1, 4))
            children = list(range(next_id, next_id + branching))
            next_id += branching
            for child in children:
                price = parent.price[0] + float(rng.integers(-20, 21))
                nodes[child] = TreeNode(id=child, depth=depth, price=price)
            rows = []
            for _ in range(int(rng.integers(1, 3))):
                weights = rng.dirichlet(np.ones(branching))
                weights[rng.random(branching) < 0.3] = 0.0
                if weights.sum() == 0.0:
                    weights[0] = 1.0
                rows.append((weights / weights.sum()).tolist())
            nodes[parent_id] = parent.model_copy(update={
                "children": tuple(children),
                "child_priors": PriorFamily.from_weights(rows),
            })
            layer.extend(children)
        frontier = layer
    return ScenarioTree(nodes=nodes, horizon=horizon)


@pytest.mark.parametrize("seed", range(100))
def test_local_global_agreement(multiperiod, seed):
    rng = np.random.default_rng(seed)
    tree = random_tree(rng)
    report = multiperiod.global_aip(tree)
    grid_nodes = multiperiod.grid_ip_nodes(tree, radius=1.0, step=1.0)

    if grid_nodes:
        assert not report.global_aip
    assert set(report.ip_nodes) <= set(grid_nodes)
    assert report.global_na <= report.global_aip

    # breaking no-arbitrage on polar paths never changes the verdict
    reachable = multiperiod.reachable_nodes(tree)
    polar = {n: tree.nodes[n].model_copy(update={"price": (500.0 + 50.0 * tree.nodes[n].depth,)})
             for n in tree.nodes if n not in reachable}
    if polar:
        planted = ScenarioTree(nodes={**tree.nodes, **polar}, horizon=tree.horizon)
        assert multiperiod.global_aip(planted) == report


def test_grid_threshold_follows_the_solver_tolerance():
    tree = binomial_tree(up=101.0, down=100.6)
    assert MultiperiodService().grid_ip_nodes(tree, radius=1.0, step=1.0) == ()
    loose = MultiperiodService(ArbitrageService(PricingService(GeometryService(SimplexSolver(tolerance=0.5)))))
    assert loose.grid_ip_nodes(tree, radius=1.0, step=1.0) == (0,)
