"""
Services package - Numerical kernels and business logic layer.
"""
from .simplex import SimplexSolver, SimplexStatus, SimplexOutcome
from .geometry_service import GeometryService, unique_points
from .measure_service import MeasureService, evaluate_at
from .pricing_service import PricingService
from .arbitrage_service import ArbitrageService
from .multiperiod_service import MultiperiodService
from .oracle_service import GridOracle
from .model_loader import ModelLoader

__all__ = [
    "SimplexSolver",
    "SimplexStatus",
    "SimplexOutcome",
    "GeometryService",
    "unique_points",
    "MeasureService",
    "evaluate_at",
    "PricingService",
    "ArbitrageService",
    "MultiperiodService",
    "GridOracle",
    "ModelLoader",
]
