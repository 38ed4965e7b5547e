"""Exception taxonomy for SymNet.

Every domain error carries a stable ``code`` so the CLI can emit
machine-readable failures. Errors about bad input values also derive from
``ValueError``.
"""

from typing import Any


class SymNetError(Exception):
    """Base class for all SymNet domain errors."""

    code: str = "symnet_error"

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready representation."""
        return {"error": self.code, "message": self.message, **self.context}


# Data loading and dataset model


class MissingFile(SymNetError, FileNotFoundError):
    code = "missing_file"


class ParseError(SymNetError, ValueError):
    code = "parse_error"


class InvariantViolation(SymNetError, ValueError):
    code = "invariant_violation"


class BadMagic(SymNetError, ValueError):
    code = "bad_magic"


class VersionMismatch(SymNetError, ValueError):
    code = "version_mismatch"


class DimensionMismatch(SymNetError, ValueError):
    code = "dimension_mismatch"


class NonFiniteValue(SymNetError, ValueError):
    code = "non_finite_value"


class RowCountMismatch(SymNetError, ValueError):
    code = "row_count_mismatch"


class DimMismatch(SymNetError, ValueError):
    code = "dim_mismatch"


class NoNegativeAvailable(SymNetError, LookupError):
    code = "no_negative_available"


# Net core


class ShapeMismatch(SymNetError, ValueError):
    code = "shape_mismatch"


class DegenerateBatch(SymNetError, ValueError):
    code = "degenerate_batch"


class UnregisteredParameter(SymNetError, KeyError):
    code = "unregistered_parameter"

    def __str__(self) -> str:
        return self.message


class NonFiniteGradient(SymNetError, ArithmeticError):
    code = "non_finite_gradient"


class KeyMismatch(SymNetError, KeyError):
    code = "key_mismatch"

    def __str__(self) -> str:
        return self.message


class ToleranceExceeded(SymNetError, AssertionError):
    code = "tolerance_exceeded"


# Objectives and inference


class IdenticalAttrIndices(SymNetError, ValueError):
    code = "identical_attr_indices"


class LabelOutOfRange(SymNetError, ValueError):
    code = "label_out_of_range"


class NonPositiveGamma(SymNetError, ValueError):
    code = "non_positive_gamma"


class EmptyCandidateSet(SymNetError, ValueError):
    code = "empty_candidate_set"


# Training and checkpoints


class ConfigError(SymNetError, ValueError):
    code = "config_error"


class UnknownProfile(SymNetError, ValueError):
    code = "unknown_profile"


class EmptyTrainSplit(SymNetError, ValueError):
    code = "empty_train_split"


class NonFiniteLoss(SymNetError, ArithmeticError):
    code = "non_finite_loss"


class MissingParameter(SymNetError, KeyError):
    code = "missing_parameter"

    def __str__(self) -> str:
        return self.message


# Evaluation


class EmptyGrid(SymNetError, ValueError):
    code = "empty_grid"


class UnknownSampleId(SymNetError, KeyError):
    code = "unknown_sample_id"

    def __str__(self) -> str:
        return self.message


class AttrOutOfRange(SymNetError, ValueError):
    code = "attr_out_of_range"


class ObjOutOfRange(SymNetError, ValueError):
    code = "obj_out_of_range"


# Synthetic data


class InfeasibleSplit(SymNetError, RuntimeError):
    code = "infeasible_split"
