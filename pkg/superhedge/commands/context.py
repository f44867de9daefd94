"""
Service wiring for one command invocation.
"""
import argparse
import logging
from dataclasses import dataclass
from typing import Optional

from ..schemas import PayoffSpec
from ..services import (
    ArbitrageService,
    GeometryService,
    GridOracle,
    MeasureService,
    ModelLoader,
    MultiperiodService,
    PricingService,
    SimplexSolver,
)

logger = logging.getLogger(__name__)


@dataclass
class CommandContext:
    loader: ModelLoader
    pricing: PricingService
    arbitrage: ArbitrageService
    multiperiod: MultiperiodService
    oracle: GridOracle
    payoff: Optional[PayoffSpec] = None
    run_oracle: bool = False


def build_context(args: argparse.Namespace) -> CommandContext:
    """
    Construct the services for one run; --tolerance is injected into the simplex kernel.
    """
    solver = SimplexSolver(tolerance=args.tolerance)
    geometry = GeometryService(solver)
    measures = MeasureService(dedup_tolerance=geometry.dedup_tolerance)
    pricing = PricingService(geometry, measures)
    arbitrage = ArbitrageService(pricing)
    if args.tolerance is not None:
        logger.info(f"LP tolerance overridden to {args.tolerance!r}")
    return CommandContext(
        loader=ModelLoader(measures, normalize=args.normalize),
        pricing=pricing,
        arbitrage=arbitrage,
        multiperiod=MultiperiodService(arbitrage, parallel=args.parallel),
        oracle=GridOracle(pricing),
        payoff=ModelLoader.parse_payoff_option(args.payoff) if getattr(args, "payoff", None) else None,
        run_oracle=args.oracle,
    )
