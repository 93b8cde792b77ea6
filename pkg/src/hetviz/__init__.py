"""Interpretable mixed-data coding, lossless frequency layouts, hyperblock
mining, logical rules, and deterministic parallel-coordinates rendering."""

from .core import (
    ALLOWED,
    Attribute,
    AttributeHierarchy,
    Dataset,
    Decision,
    HetvizError,
    Level,
    MISSING,
    MeasurementType,
    Relation,
    Scale,
    check_operation,
    compare_differences,
    cyclic_difference,
    permitted_relations,
)

__version__ = "0.1.0"

__all__ = [
    "ALLOWED",
    "Attribute",
    "AttributeHierarchy",
    "Dataset",
    "Decision",
    "HetvizError",
    "Level",
    "MISSING",
    "MeasurementType",
    "Relation",
    "Scale",
    "check_operation",
    "compare_differences",
    "cyclic_difference",
    "permitted_relations",
    "__version__",
]
