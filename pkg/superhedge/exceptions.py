"""
Custom exceptions with human-readable messages and process exit codes.
"""
from typing import Dict, Any, Optional

from .config import config


class AppError(Exception):
    """Base application error with enhanced error details."""
    def __init__(
        self,
        message: str,
        exit_code: int = config.EXIT_INTERNAL_ERROR,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        self.details = details or {}
        super().__init__(message)


class ValidationError(AppError):
    """Invalid numerical input with specific error codes."""
    def __init__(self, message: str = None, error_code: str = "validation_failed", **details: Any):
        messages = {
            "empty_rows": "The minimax program needs at least one row.",
            "dimension_mismatch": "Points do not share a common dimension.",
            "empty_family": "At least one random variable is required.",
            "missing_value": "A function value is missing for a support point.",
            "claim_mismatch": "The claim does not match the market atoms or support.",
            "invalid_market": "The market violates its price or support constraints.",
            "invalid_measure": "Prior weights must be nonnegative and sum to one.",
            "leaf_node": "Leaf nodes carry no one-step market.",
            "dimension_error": "This rule only applies to one risky asset.",
            "scale_exceeded": "The tree is too large for the brute-force oracle.",
            "validation_failed": "The input contains invalid data."
        }
        final_message = message or messages.get(error_code, messages["validation_failed"])
        super().__init__(final_message, config.EXIT_PARSE_ERROR, error_code, details)


class TreeStructureError(AppError):
    """Scenario tree violates its structural invariants."""
    def __init__(self, message: str = None, error_code: str = "invalid_tree", node_id: int = None):
        messages = {
            "cycle_detected": "The scenario tree contains a cycle or a disconnected part.",
            "ragged_depth": "All leaves must sit at the tree horizon.",
            "prior_arity_mismatch": "Child priors must have one weight per child.",
            "negative_price": "Prices must be nonnegative.",
            "unknown_node": "A child id does not refer to a node of the tree.",
            "multiple_roots": "The scenario tree must have exactly one root.",
            "depth_mismatch": "Node depths must increase by one along every edge.",
            "invalid_tree": "The scenario tree is invalid."
        }
        final_message = message or messages.get(error_code, messages["invalid_tree"])
        details = {"node_id": node_id} if node_id is not None else {}
        super().__init__(final_message, config.EXIT_PARSE_ERROR, error_code, details)


class ParseError(AppError):
    """Model file could not be read or parsed."""
    def __init__(self, message: str = None, error_code: str = "parse_error", **details: Any):
        messages = {
            "invalid_json": "The model file is not valid JSON.",
            "non_finite": "Model numbers must be finite (NaN and Infinity are rejected).",
            "schema_violation": "The model file does not follow the model schema.",
            "unreadable": "The model file could not be read.",
            "parse_error": "The model file could not be parsed."
        }
        final_message = message or messages.get(error_code, messages["parse_error"])
        super().__init__(final_message, config.EXIT_PARSE_ERROR, error_code, details)


class InstantaneousProfitError(AppError):
    """An instantaneous profit makes the requested computation meaningless."""
    def __init__(self, message: str = None, error_code: str = "instantaneous_profit", node_id: int = None):
        messages = {
            "global_ip_detected": f"Global AIP fails: instantaneous profit at node {node_id}.",
            "instantaneous_profit": "The market admits an instantaneous profit."
        }
        final_message = message or messages.get(error_code, messages["instantaneous_profit"])
        details = {"node_id": node_id} if node_id is not None else {}
        super().__init__(final_message, config.EXIT_INSTANTANEOUS_PROFIT, error_code, details)


class SolverError(AppError):
    """Internal invariant breach of the numerical kernels."""
    def __init__(self, message: str = None, error_code: str = "invariant_breach", **details: Any):
        messages = {
            "iteration_limit": "The simplex method exceeded its pivot limit.",
            "invariant_breach": "An internal invariant was violated."
        }
        final_message = message or messages.get(error_code, messages["invariant_breach"])
        super().__init__(final_message, config.EXIT_INTERNAL_ERROR, error_code, details)
