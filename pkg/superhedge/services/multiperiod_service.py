"""
Multiperiod service - Scenario trees, local-to-global AIP/NA and backward superhedging.
"""
import itertools
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Tuple

import numpy as np

from ..config import config
from ..exceptions import InstantaneousProfitError, SolverError, TreeStructureError, ValidationError
from ..models import (
    Claim,
    GlobalReport,
    MarketClass,
    NodeHedge,
    NodeVerdict,
    OnePeriodMarket,
    RandomVariable,
    ScenarioTree,
    TreeNode,
)
from .arbitrage_service import ArbitrageService

logger = logging.getLogger(__name__)


class MultiperiodService:
    """Handles scenario-tree validation, arbitrage checks and backward induction."""

    def __init__(self, arbitrage: ArbitrageService = None, parallel: bool = False, max_workers: int = None):
        self.arbitrage = arbitrage or ArbitrageService()
        self.pricing = self.arbitrage.pricing
        self.measures = self.arbitrage.measures
        self.parallel = parallel
        self.max_workers = max_workers

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------

    def validate_tree(self, tree: ScenarioTree) -> None:
        """
        Check the structural invariants of a scenario tree.

        Raises:
            TreeStructureError: On the first violated invariant
            ValidationError: If node prices disagree on the number of assets
        """
        nodes = tree.nodes
        if not nodes:
            raise TreeStructureError("The scenario tree has no nodes.")
        for key, node in nodes.items():
            if key != node.id:
                raise TreeStructureError(f"Node stored under id {key} carries id {node.id}.", node_id=key)

        parents: Dict[int, int] = {}
        for node in nodes.values():
            for child in node.children:
                if child not in nodes:
                    raise TreeStructureError(
                        f"Node {node.id} refers to unknown child {child}.", "unknown_node", node_id=node.id
                    )
                if child in parents or child == node.id:
                    raise TreeStructureError(error_code="cycle_detected", node_id=child)
                parents[child] = node.id

        roots = [node_id for node_id in nodes if node_id not in parents]
        if not roots:
            raise TreeStructureError(error_code="cycle_detected")
        if len(roots) > 1:
            raise TreeStructureError(f"Found roots {sorted(roots)}.", "multiple_roots")

        order = self._breadth_first(tree, roots[0])
        if len(order) != len(nodes):
            missing = sorted(set(nodes) - set(order))
            raise TreeStructureError(error_code="cycle_detected", node_id=missing[0])

        for node_id in order:
            node = nodes[node_id]
            expected = 0 if node_id == roots[0] else nodes[parents[node_id]].depth + 1
            if node.depth != expected:
                raise TreeStructureError(
                    f"Node {node_id} has depth {node.depth}, expected {expected}.", "depth_mismatch", node_id=node_id
                )
            if node.is_leaf and node.depth != tree.horizon:
                raise TreeStructureError(
                    f"Leaf {node_id} sits at depth {node.depth}, horizon is {tree.horizon}.",
                    "ragged_depth", node_id=node_id
                )
            if not node.is_leaf and (node.child_priors is None or node.child_priors.atom_count != len(node.children)):
                raise TreeStructureError(error_code="prior_arity_mismatch", node_id=node_id)

        dims = {len(node.price) for node in nodes.values()}
        if len(dims) != 1:
            raise ValidationError("Node prices must share one dimension.", "dimension_mismatch")
        for node_id in order:
            if any(v < 0.0 for v in nodes[node_id].price):
                raise TreeStructureError(error_code="negative_price", node_id=node_id)

    def root_id(self, tree: ScenarioTree) -> int:
        children = {c for node in tree.nodes.values() for c in node.children}
        roots = sorted(node_id for node_id in tree.nodes if node_id not in children)
        if len(roots) != 1:
            raise TreeStructureError(error_code="multiple_roots" if roots else "cycle_detected")
        return roots[0]

    def reachable_nodes(self, tree: ScenarioTree) -> FrozenSet[int]:
        """
        Non-polar nodes: the root, and every child whose edge is charged by a parent prior.
        """
        root = self.root_id(tree)
        reachable = {root}
        queue = deque([root])
        while queue:
            node = tree.nodes[queue.popleft()]
            if node.is_leaf:
                continue
            for k in self.measures.relevant_atoms(node.child_priors):
                child = node.children[k]
                reachable.add(child)
                queue.append(child)
        return frozenset(reachable)

    def one_step_market(self, tree: ScenarioTree, node_id: int) -> OnePeriodMarket:
        """
        One-period market of a node: y = S_t, one atom per child, priors over the children.

        Raises:
            TreeStructureError: If the node does not exist
            ValidationError: If the node is a leaf
        """
        node = self._node(tree, node_id)
        if node.is_leaf:
            raise ValidationError(f"Node {node_id} is a leaf.", "leaf_node", node_id=node_id)
        return OnePeriodMarket(
            d=len(node.price),
            y=node.price,
            Y=RandomVariable(values=tuple(tree.nodes[c].price for c in node.children)),
            priors=node.child_priors,
        )

    # ------------------------------------------------------------------
    # arbitrage
    # ------------------------------------------------------------------

    def global_aip(self, tree: ScenarioTree) -> GlobalReport:
        """
        Global AIP holds iff the one-step AIP holds at every reachable node.

        Returns:
            GlobalReport listing every reachable internal node where a one-step check fails,
            ordered by depth then id
        """
        self.validate_tree(tree)
        internal = self._ordered(tree, [n for n in self.reachable_nodes(tree) if not tree.nodes[n].is_leaf])
        verdicts = self._map(lambda n: self.arbitrage.classify(self.one_step_market(tree, n)), internal)
        failing = tuple(
            NodeVerdict(node_id=n, verdict=v) for n, v in zip(internal, verdicts) if v is not MarketClass.NA
        )
        report = GlobalReport(
            global_aip=not any(v.verdict is MarketClass.IP for v in failing),
            global_na=not failing,
            failing_nodes=failing,
        )
        logger.info(f"Global AIP {report.global_aip}, global NA {report.global_na}, failing {len(failing)} nodes")
        return report

    def global_na(self, tree: ScenarioTree) -> Tuple[bool, Tuple[int, ...]]:
        """Quasi-sure NA at every reachable node, with the failing node ids."""
        report = self.global_aip(tree)
        return report.global_na, tuple(v.node_id for v in report.failing_nodes)

    def compare_na_aip(self, tree: ScenarioTree) -> Tuple[bool, Tuple[int, ...]]:
        """
        Whether global AIP and NA coincide, with the nodes where 0 is in the hull
        of the increments but not in its relative interior.
        """
        report = self.global_aip(tree)
        distinguishing = tuple(v.node_id for v in report.failing_nodes if v.verdict is MarketClass.AIP_ONLY)
        return report.global_aip == report.global_na, distinguishing

    # ------------------------------------------------------------------
    # backward induction
    # ------------------------------------------------------------------

    def backward_superhedge(self, tree: ScenarioTree, terminal_payoff: Mapping[int, float]) -> Dict[int, NodeHedge]:
        """
        Compose one-step superhedging prices from the leaves to the root.

        Args:
            tree: Scenario tree
            terminal_payoff: Payoff per leaf id; unreachable leaves may be omitted

        Returns:
            NodeHedge per node id, in id order

        Raises:
            InstantaneousProfitError: At the first node (by depth, then id) admitting an IP
            ValidationError: If a reachable leaf has no payoff
        """
        report = self.global_aip(tree)
        if not report.global_aip:
            raise InstantaneousProfitError(error_code="global_ip_detected", node_id=report.ip_nodes[0])

        reachable = self.reachable_nodes(tree)
        hedges: Dict[int, NodeHedge] = {}
        for node in tree.nodes.values():
            if node.id not in reachable:
                hedges[node.id] = NodeHedge(node_id=node.id, depth=node.depth, reachable=False)
            elif node.is_leaf:
                if node.id not in terminal_payoff:
                    raise ValidationError(f"No terminal payoff for leaf {node.id}.", "missing_value", node_id=node.id)
                hedges[node.id] = NodeHedge(
                    node_id=node.id, depth=node.depth, reachable=True, value=float(terminal_payoff[node.id])
                )

        for depth in range(tree.horizon - 1, -1, -1):
            layer = self._ordered(
                tree,
                [n for n in reachable if tree.nodes[n].depth == depth and not tree.nodes[n].is_leaf],
            )
            for hedge in self._map(lambda n: self._hedge_node(tree, n, hedges), layer):
                hedges[hedge.node_id] = hedge
        return dict(sorted(hedges.items()))

    def _hedge_node(self, tree: ScenarioTree, node_id: int, hedges: Mapping[int, NodeHedge]) -> NodeHedge:
        node = tree.nodes[node_id]
        # polar children carry no constraint
        claim = Claim.from_atoms(
            hedges[c].value if hedges[c].reachable else 0.0 for c in node.children
        )
        result = self.pricing.superhedge_price(self.one_step_market(tree, node_id), claim)
        if not result.is_finite:
            raise SolverError(f"Node {node_id} passed AIP but priced at -inf.", node_id=node_id)
        return NodeHedge(
            node_id=node_id, depth=node.depth, reachable=True, value=result.price, theta=result.theta_hat
        )

    # ------------------------------------------------------------------
    # brute-force oracle
    # ------------------------------------------------------------------

    def grid_ip_nodes(self, tree: ScenarioTree, radius: float = None, step: float = None) -> Tuple[int, ...]:
        """
        Reachable nodes from which some grid strategy earns at least one grid step surely.

        V(leaf) = 0 and V(node) = max over grid theta of min over reachable children of
        theta . dS + V(child); an IP from the node exists on the grid iff V(node) >= step.

        Raises:
            ValidationError: If the tree or grid exceeds the oracle scale
        """
        radius = config.BRUTE_FORCE_RADIUS if radius is None else radius
        step = config.BRUTE_FORCE_STEP if step is None else step
        self.validate_tree(tree)
        grid = self._strategy_grid(tree, radius, step)

        reachable = self.reachable_nodes(tree)
        values: Dict[int, float] = {}
        for node_id in sorted(reachable, key=lambda n: (-tree.nodes[n].depth, n)):
            node = tree.nodes[node_id]
            if node.is_leaf:
                values[node_id] = 0.0
                continue
            children = [c for c in node.children if c in reachable]
            increments = np.array([tree.nodes[c].price for c in children]) - np.array(node.price)
            wealth = grid @ increments.T + np.array([values[c] for c in children])
            values[node_id] = float(wealth.min(axis=1).max())

        threshold = step - self.arbitrage.geometry.tolerance * max(1.0, step)
        found = [n for n in reachable if not tree.nodes[n].is_leaf and values[n] >= threshold]
        logger.debug(f"Grid oracle found instantaneous profits at {sorted(found)}")
        return self._ordered(tree, found)

    def brute_force_global_ip(self, tree: ScenarioTree, radius: float = None, step: float = None) -> bool:
        """True iff the grid search finds a global instantaneous profit."""
        return bool(self.grid_ip_nodes(tree, radius, step))

    def _strategy_grid(self, tree: ScenarioTree, radius: float, step: float) -> np.ndarray:
        if step <= 0.0 or radius < 0.0:
            raise ValidationError("The grid needs a positive step and a nonnegative radius.", "scale_exceeded")
        branching = max((len(node.children) for node in tree.nodes.values()), default=0)
        if tree.horizon > config.BRUTE_FORCE_MAX_DEPTH or branching > config.BRUTE_FORCE_MAX_BRANCHING:
            raise ValidationError(
                f"Depth {tree.horizon} / branching {branching} exceed the oracle scale.", "scale_exceeded"
            )
        count = int(np.floor(radius / step + 1e-9))
        axis = step * np.arange(-count, count + 1)
        if len(axis) ** tree.dim > config.BRUTE_FORCE_MAX_GRID:
            raise ValidationError(f"{len(axis)}^{tree.dim} grid strategies exceed the oracle scale.", "scale_exceeded")
        return np.array(list(itertools.product(axis, repeat=tree.dim)))

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    def _node(self, tree: ScenarioTree, node_id: int) -> TreeNode:
        if node_id not in tree.nodes:
            raise TreeStructureError(f"Node {node_id} does not exist.", "unknown_node", node_id=node_id)
        return tree.nodes[node_id]

    @staticmethod
    def _breadth_first(tree: ScenarioTree, root: int) -> List[int]:
        order, seen, queue = [], {root}, deque([root])
        while queue:
            node_id = queue.popleft()
            order.append(node_id)
            for child in tree.nodes[node_id].children:
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
        return order

    @staticmethod
    def _ordered(tree: ScenarioTree, node_ids: Iterable[int]) -> Tuple[int, ...]:
        return tuple(sorted(node_ids, key=lambda n: (tree.nodes[n].depth, n)))

    def _map(self, fn: Callable, items: Tuple) -> List:
        """Apply fn per node, on a thread pool when parallel; results keep input order."""
        if not self.parallel or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(fn, items))
