"""
hedge - Backward superhedging on a scenario tree.
"""
import logging

from ..config import config
from ..exceptions import InstantaneousProfitError, ParseError
from ..schemas import ModelFile, TreeModelFile
from .context import CommandContext
from .report import emit, fmt_float, fmt_point

logger = logging.getLogger(__name__)


def run(model: ModelFile, context: CommandContext) -> int:
    if not isinstance(model, TreeModelFile):
        raise ParseError("The hedge command needs a tree model.", "schema_violation")
    service = context.multiperiod
    tree = context.loader.build_tree(model)
    payoff = context.loader.terminal_payoff(model, tree, context.payoff)
    try:
        hedges = service.backward_superhedge(tree, payoff)
    except InstantaneousProfitError as exc:
        logger.warning(exc.message)
        emit(f"{config.BANNER_GLOBAL_IP} at node {exc.details['node_id']}")
        return config.EXIT_INSTANTANEOUS_PROFIT

    for depth in range(tree.horizon, -1, -1):
        for hedge in hedges.values():
            if hedge.depth != depth:
                continue
            if not hedge.reachable:
                emit(f"t={depth} node {hedge.node_id}: unconstrained")
            elif hedge.theta is None:
                emit(f"t={depth} node {hedge.node_id}: value = {fmt_float(hedge.value)}")
            else:
                emit(
                    f"t={depth} node {hedge.node_id}: value = {fmt_float(hedge.value)}, "
                    f"theta = {fmt_point(hedge.theta)}"
                )
    emit(f"root cost = {fmt_float(hedges[service.root_id(tree)].value)}")
    return config.EXIT_OK
