"""Model zoo: builders, feature extraction, and serialization."""

from .features import extract_features
from .serialize import load_model, manifest_path, read_tensors, save_model, write_tensors
from .zoo import (
    FEATURE_DIM,
    Model,
    NetworkSpec,
    build_cnn1,
    build_cnn2,
    build_cnn3,
    length_trace,
    new_model,
    realize,
)

__all__ = [
    "FEATURE_DIM",
    "Model",
    "NetworkSpec",
    "build_cnn1",
    "build_cnn2",
    "build_cnn3",
    "extract_features",
    "length_trace",
    "load_model",
    "manifest_path",
    "new_model",
    "read_tensors",
    "realize",
    "save_model",
    "write_tensors",
]
