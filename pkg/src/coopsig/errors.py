"""Exception hierarchy shared across the package."""


class CoopsigError(Exception):
    """Base class for all coopsig errors."""


class InvalidSymbol(CoopsigError):
    """Symbol index outside the modulation's alphabet."""


class FrameUnderrun(CoopsigError):
    """Synthesized sequence too short to cover the requested frame."""


class UnsupportedFormat(CoopsigError):
    """Bad magic or unknown version in a binary container."""


class DatasetCorrupt(CoopsigError):
    """Dataset payload truncated or inconsistent with its header."""


class IoError(CoopsigError):
    """Destination not writable or source unreadable."""


class ShapeError(CoopsigError):
    """Tensor shape incompatible with the operation."""


class InvalidLabel(CoopsigError):
    """Class label outside [0, 12)."""


class InvalidNodeCount(CoopsigError):
    """Node count below 1."""


class NoFeatureLayer(CoopsigError):
    """Model has no designated feature layer."""


class ModelCorrupt(CoopsigError):
    """Model container inconsistent with its manifest."""


class ModelMissing(CoopsigError):
    """A fusion scheme requires a model that was not supplied."""


class EmptyVote(CoopsigError):
    """majority_vote called with no decisions."""


class InsufficientData(CoopsigError):
    """Not enough samples to fit the requested number of components."""


class GainUndefined(CoopsigError):
    """Accuracy threshold never crossed on one of the curves."""


class PrerequisiteMissing(CoopsigError):
    """A training job's input artifact does not exist."""
