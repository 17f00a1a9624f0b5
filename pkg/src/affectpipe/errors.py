"""Exception types raised across the pipeline.

Everything derives from ValueError so callers that only care about
"bad input" can catch one base; the concrete classes exist because the
CLI and tests distinguish failure surfaces.
"""


class InvalidEmotionCode(ValueError):
    """Emotion code outside 0..6."""


class FormatError(ValueError):
    """Malformed file content (CSV row width, XML schema, filename metadata)."""


class NumericError(ValueError):
    """Non-finite value where a finite one is required."""


class DegeneratePairError(ValueError):
    """Angle requested for a coincident point pair."""


class NoGeometryError(ValueError):
    """Geometric features requested for a modality without tracked points."""


class RegionError(ValueError):
    """Region of interest empty, out of bounds, or violating its invariants."""


class ParameterError(ValueError):
    """Out-of-range algorithm parameter (even window, low > high, ...)."""


class ShapeError(ValueError):
    """Array dimension mismatch between data and model."""


class DegenerateTrainingError(ValueError):
    """Training data contains fewer than two classes."""


class EmptySessionError(ValueError):
    """Session-level operation on a session with no frames."""


class NoDecisionError(ValueError):
    """Fusion input where every modality abstained."""


class FoldError(ValueError):
    """Cross-validation fold count incompatible with the corpus."""


class BenchError(ValueError):
    """Benchmark invoked with no work or too few repetitions."""


class MeasurementError(ValueError):
    """Negative or otherwise impossible timing measurement."""


class ConfigurationError(ValueError):
    """Run configuration incomplete (e.g. missing model for a modality)."""
