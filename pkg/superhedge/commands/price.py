"""
price - Superhedging price by the minimax LP and by the biconjugate route.
"""
import logging

from ..config import config
from ..exceptions import ParseError, SolverError
from ..schemas import ModelFile, OnePeriodModelFile
from .context import CommandContext
from .report import emit, fmt_bool, fmt_float, fmt_point

logger = logging.getLogger(__name__)


def run(model: ModelFile, context: CommandContext) -> int:
    if not isinstance(model, OnePeriodModelFile):
        raise ParseError("The price command needs a one_period model; use hedge for trees.", "schema_violation")
    loader, pricing = context.loader, context.pricing
    market = loader.build_market(model)
    claim = loader.build_claim(model, market, context.payoff)
    result = pricing.superhedge_price(market, claim)
    logger.info(f"Priced claim: {result.status.value}")

    if not result.is_finite:
        certificate = context.arbitrage.check_aip(market).ip_certificate
        emit(
            config.BANNER_IP,
            "price = -inf",
            f"closedness = {result.closedness.value}",
            f"theta = {fmt_point(certificate.theta)}",
            f"epsilon = {fmt_float(certificate.epsilon)}",
        )
        return config.EXIT_INSTANTANEOUS_PROFIT

    emit(
        f"price = {fmt_float(result.price)}",
        f"theta = {fmt_point(result.theta_hat)}",
        f"hedge unique = {fmt_bool(result.hedge_unique)}",
        f"closedness = {result.closedness.value}",
        f"certificate slack = {fmt_point(result.certificate_slack)}",
    )
    if claim.payoff_on_support is not None:
        biconjugate = pricing.price_via_biconjugate(market, claim)
        emit(
            f"biconjugate price = {fmt_float(biconjugate)}",
            f"route discrepancy = {fmt_float(abs(result.price - biconjugate))}",
        )
    else:
        emit("biconjugate price = n/a")

    if context.run_oracle:
        minimum, theta = context.oracle.superhedge_minimum(market, claim)
        gap = result.price - minimum
        emit(
            f"oracle minimum = {fmt_float(minimum)}",
            f"oracle theta = {fmt_point(theta)}",
            f"oracle discrepancy = {fmt_float(abs(gap))}",
        )
        if gap > config.ORACLE_BREACH_TOLERANCE:
            raise SolverError(
                f"LP price {result.price!r} exceeds the grid minimum {minimum!r}.", price=result.price
            )
    return config.EXIT_OK
