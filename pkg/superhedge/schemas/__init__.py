"""
Schemas package - Model file formats.
"""
from .payoff import PayoffSpec, TableEntry
from .model_file import (
    AtomSpec,
    ModelFile,
    NodeSpec,
    OnePeriodModelFile,
    TreeModelFile,
    model_file_adapter,
)

__all__ = [
    "PayoffSpec",
    "TableEntry",
    "AtomSpec",
    "ModelFile",
    "NodeSpec",
    "OnePeriodModelFile",
    "TreeModelFile",
    "model_file_adapter",
]
