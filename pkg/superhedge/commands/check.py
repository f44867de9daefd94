"""
check - Market classification for one-period models and scenario trees.
"""
import logging

from ..config import config
from ..exceptions import SolverError
from ..models import MarketClass
from ..schemas import ModelFile, OnePeriodModelFile
from .context import CommandContext
from .report import emit, fmt_bool, fmt_float, fmt_ints, fmt_point, fmt_points

logger = logging.getLogger(__name__)

EXIT_CODES = {
    MarketClass.NA: config.EXIT_OK,
    MarketClass.AIP_ONLY: config.EXIT_AIP_ONLY,
    MarketClass.IP: config.EXIT_INSTANTANEOUS_PROFIT,
}


def run(model: ModelFile, context: CommandContext) -> int:
    if isinstance(model, OnePeriodModelFile):
        return _check_market(model, context)
    return _check_tree(model, context)


def _check_market(model: OnePeriodModelFile, context: CommandContext) -> int:
    market = context.loader.build_market(model)
    report = context.arbitrage.report(market)
    verdict = report.market_class
    logger.info(f"One-period market classified as {verdict.value}")
    emit(f"supp ΔY = {fmt_points(report.support)}")
    if verdict is MarketClass.NA:
        emit("NA holds (hence AIP)", f"weights = {fmt_point(report.na_certificate)}")
    elif verdict is MarketClass.AIP_ONLY:
        emit(
            f"AIP holds; NA fails at vertex certificate h = {fmt_point(report.na_violation)}",
            f"weights = {fmt_point(report.aip_certificate)}",
        )
    else:
        certificate = report.ip_certificate
        emit(
            f"{config.BANNER_IP}: AIP fails with theta = {fmt_point(certificate.theta)}, "
            f"epsilon = {fmt_float(certificate.epsilon)}"
        )
    return EXIT_CODES[verdict]


def _check_tree(model, context: CommandContext) -> int:
    service = context.multiperiod
    tree = context.loader.build_tree(model)
    report = service.global_aip(tree)
    logger.info(f"Tree check: {len(report.failing_nodes)} failing nodes")
    emit(
        f"global AIP = {fmt_bool(report.global_aip)}",
        f"global NA = {fmt_bool(report.global_na)}",
        f"failing nodes = {fmt_ints(v.node_id for v in report.failing_nodes)}",
    )
    for verdict in report.failing_nodes:
        emit(f"node {verdict.node_id}: {verdict.verdict.value}")

    if context.run_oracle:
        grid_nodes = service.grid_ip_nodes(tree)
        emit(f"grid IP nodes = {fmt_ints(grid_nodes)}")
        if grid_nodes and report.global_aip:
            raise SolverError("The grid oracle found an IP in a tree passing global AIP.")

    if not report.global_aip:
        return config.EXIT_INSTANTANEOUS_PROFIT
    return config.EXIT_OK if report.global_na else config.EXIT_AIP_ONLY
