"""
support - Quasi-sure supports and polar atoms of a one-period model.
"""
from ..config import config
from ..exceptions import ParseError
from ..schemas import ModelFile, OnePeriodModelFile
from ..services.geometry_service import to_points
from .context import CommandContext
from .report import emit, fmt_ints, fmt_points


def run(model: ModelFile, context: CommandContext) -> int:
    if not isinstance(model, OnePeriodModelFile):
        raise ParseError("The support command needs a one_period model.", "schema_violation")
    market = context.loader.build_market(model)
    pricing = context.pricing
    support = pricing.support(market)
    increments = to_points(pricing.increment_support(market))
    polar = pricing.measures.polar_atoms(market.priors)
    emit(
        f"supp Y = {fmt_points(support.points)}; "
        f"supp ΔY = {fmt_points(increments)}; "
        f"polar atoms: {fmt_ints(polar)}"
    )
    return config.EXIT_OK
