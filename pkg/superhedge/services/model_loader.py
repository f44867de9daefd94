"""
Model loader - Reads JSON model files and builds markets, trees and claims.
"""
import json
import logging
import sys
from typing import Dict, Optional, Sequence

from pydantic import ValidationError as PydanticValidationError

from ..config import config
from ..exceptions import ParseError, TreeStructureError, ValidationError
from ..models import Claim, OnePeriodMarket, Point, PriorFamily, RandomVariable, ScenarioTree, TreeNode
from ..schemas import ModelFile, OnePeriodModelFile, PayoffSpec, TreeModelFile, model_file_adapter
from .measure_service import MeasureService, PointFunction, evaluate_at

logger = logging.getLogger(__name__)


def _reject_constant(name: str):
    raise ParseError(f"Non-finite number {name} in model file.", "non_finite", constant=name)


def _schema_error(exc: PydanticValidationError) -> ParseError:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return ParseError(
        f"Schema violation at {location or 'top level'}: {first['msg']}",
        "schema_violation", errors=exc.error_count()
    )


class ModelLoader:
    """Handles model file ingestion and the payoff option grammar."""

    def __init__(self, measures: MeasureService = None, normalize: bool = False):
        self.measures = measures or MeasureService()
        self.normalize = normalize

    # ------------------------------------------------------------------
    # files
    # ------------------------------------------------------------------

    def read(self, source: str) -> ModelFile:
        """
        Read a model from a path, or from standard input when source is "-".

        Raises:
            ParseError: If the file cannot be read or parsed
        """
        try:
            if source == "-":
                text = sys.stdin.read()
            else:
                with open(source, "r", encoding="utf-8") as handle:
                    text = handle.read()
        except OSError as exc:
            raise ParseError(f"Cannot read {source}: {exc.strerror}", "unreadable", source=source)
        return self.parse(text)

    def parse(self, text: str) -> ModelFile:
        """
        Parse model JSON; NaN and Infinity are rejected.

        Raises:
            ParseError: On invalid JSON, non-finite numbers or schema violations
        """
        try:
            data = json.loads(text, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"Invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                "invalid_json", line=exc.lineno, column=exc.colno
            )
        try:
            model = model_file_adapter.validate_python(data)
        except PydanticValidationError as exc:
            raise _schema_error(exc)
        self._check_weights(model)
        logger.info(f"Parsed {model.kind} model")
        return model

    def dump(self, model: ModelFile) -> str:
        """Serialize a parsed model; parsing the output yields an equal model."""
        return model_file_adapter.dump_json(model, by_alias=True, exclude_none=True).decode("utf-8")

    def _check_weights(self, model: ModelFile) -> None:
        if isinstance(model, OnePeriodModelFile):
            families = [model.priors]
        else:
            families = [node.child_priors for node in model.nodes if node.child_priors]
        for family in families:
            for row in family:
                if any(w < 0.0 for w in row):
                    raise ParseError("Prior weights must be nonnegative.", "schema_violation")
                if not self.normalize and any(w > config.WEIGHT_CEILING for w in row):
                    raise ParseError(
                        "Prior weights above 1 need --normalize.", "schema_violation"
                    )

    def _family(self, rows: Sequence[Sequence[float]]) -> PriorFamily:
        if self.normalize:
            normalized = []
            for row in rows:
                total = sum(row)
                if total <= 0.0:
                    raise ValidationError("Cannot normalize a prior with zero mass.", "invalid_measure")
                normalized.append([w / total for w in row])
            rows = normalized
        return PriorFamily.from_weights(rows)

    # ------------------------------------------------------------------
    # domain objects
    # ------------------------------------------------------------------

    def build_market(self, model: OnePeriodModelFile) -> OnePeriodMarket:
        """
        One-period market of a model file.

        Raises:
            ParseError: If the model does not describe a market
        """
        try:
            return OnePeriodMarket(
                d=model.d,
                y=tuple(model.y),
                Y=RandomVariable(values=tuple(tuple(atom.values) for atom in model.atoms)),
                priors=self._family(model.priors),
            )
        except PydanticValidationError as exc:
            raise _schema_error(exc)

    def build_tree(self, model: TreeModelFile) -> ScenarioTree:
        """
        Scenario tree of a model file; structural checks are left to the multiperiod service.

        Raises:
            TreeStructureError: If two nodes share an id
            ParseError: If a node does not describe a tree node
        """
        nodes: Dict[int, TreeNode] = {}
        for spec in model.nodes:
            if spec.id in nodes:
                raise TreeStructureError(f"Duplicate node id {spec.id}.", node_id=spec.id)
            try:
                nodes[spec.id] = TreeNode(
                    id=spec.id,
                    depth=spec.depth,
                    price=tuple(spec.price),
                    children=tuple(spec.children),
                    child_priors=self._family(spec.child_priors) if spec.child_priors else None,
                )
            except PydanticValidationError as exc:
                raise _schema_error(exc)
        return ScenarioTree(nodes=nodes, horizon=model.horizon)

    def build_claim(
        self,
        model: OnePeriodModelFile,
        market: OnePeriodMarket,
        payoff: Optional[PayoffSpec] = None,
    ) -> Claim:
        """
        Claim of a one-period model: the payoff option, then the file payoff,
        then the per-atom claim values.

        Raises:
            ValidationError: If no claim is given or per-atom values are incomplete
        """
        spec = payoff or model.payoff
        if spec is not None:
            g = self.payoff_function(spec, market.d)
            support = self.measures.quasi_support(market.priors, market.Y)
            return Claim.from_payoff(lambda z: evaluate_at(g, z, self.measures.dedup_tolerance), support.points)
        values = [atom.claim for atom in model.atoms]
        if all(v is None for v in values):
            raise ValidationError("The model has no payoff; pass --payoff.", "claim_mismatch")
        if any(v is None for v in values):
            raise ValidationError("Every atom needs a claim value.", "claim_mismatch")
        return Claim.from_atoms(values)

    def terminal_payoff(
        self,
        model: TreeModelFile,
        tree: ScenarioTree,
        payoff: Optional[PayoffSpec] = None,
    ) -> Dict[int, float]:
        """Payoff per leaf: the payoff option, then the file payoff, then terminal_payoff."""
        spec = payoff or model.payoff
        leaves = [node for node in tree.nodes.values() if node.is_leaf]
        if spec is not None:
            g = self.payoff_function(spec, tree.dim)
            return {node.id: evaluate_at(g, node.price, self.measures.dedup_tolerance) for node in leaves}
        if model.terminal_payoff is None:
            raise ValidationError("The model has no payoff; pass --payoff.", "claim_mismatch")
        return dict(model.terminal_payoff)

    # ------------------------------------------------------------------
    # payoffs
    # ------------------------------------------------------------------

    @staticmethod
    def parse_payoff_option(text: str) -> PayoffSpec:
        """
        Parse call:K[@i], put:K[@i] or linear:c1,c2,...

        Raises:
            ParseError: If the option does not follow the grammar
        """
        kind, _, body = text.partition(":")
        try:
            if kind in ("call", "put"):
                strike, _, asset = body.partition("@")
                return PayoffSpec(type=kind, strike=float(strike), asset=int(asset) if asset else 0)
            if kind == "linear":
                return PayoffSpec(type=kind, coeffs=[float(c) for c in body.split(",")])
        except (ValueError, PydanticValidationError) as exc:
            raise ParseError(f"Invalid payoff option '{text}': {exc}", "schema_violation")
        raise ParseError(
            f"Invalid payoff option '{text}'; expected call:K[@i], put:K[@i] or linear:c1,...",
            "schema_violation"
        )

    @staticmethod
    def payoff_function(spec: PayoffSpec, d: int) -> PointFunction:
        """
        g as a callable on points, or as a point table.

        Raises:
            ValidationError: If the payoff does not fit d assets
        """
        if spec.type in ("call", "put"):
            if spec.asset >= d:
                raise ValidationError(f"Asset index {spec.asset} with d = {d}.", "dimension_mismatch")
            i, strike = spec.asset, spec.strike
            if spec.type == "call":
                return lambda z: max(z[i] - strike, 0.0)
            return lambda z: max(strike - z[i], 0.0)
        if spec.type == "linear":
            if len(spec.coeffs) != d:
                raise ValidationError(f"{len(spec.coeffs)} coefficients with d = {d}.", "dimension_mismatch")
            coeffs = list(spec.coeffs)
            return lambda z: float(sum(c * v for c, v in zip(coeffs, z)))
        table: Dict[Point, float] = {}
        for entry in spec.table:
            if len(entry.point) != d:
                raise ValidationError(f"Table point {entry.point} with d = {d}.", "dimension_mismatch")
            table[tuple(entry.point)] = entry.value
        return table
