"""Cooperative fusion schemes, the PCA baseline, and overhead accounting."""

from .classify import Diagnostics, FusionScheme, ModelBundle, cooperative_classify
from .feature_io import (
    N_COMPONENTS,
    feature_sidecar,
    read_feature_meta,
    read_features,
    write_features,
)
from .overhead import OverheadReport, SchemeOverhead, overhead_per_sample
from .pca import (
    PcaModel,
    frame_vector,
    pca_fit,
    pca_project,
    pca_project_batch,
    pca_reconstruct,
)
from .stack import stack_signals, stack_signals_batch
from .vote import LocalDecision, majority_vote, vote_batch

__all__ = [
    "Diagnostics",
    "FusionScheme",
    "LocalDecision",
    "ModelBundle",
    "N_COMPONENTS",
    "OverheadReport",
    "PcaModel",
    "SchemeOverhead",
    "cooperative_classify",
    "feature_sidecar",
    "frame_vector",
    "majority_vote",
    "overhead_per_sample",
    "pca_fit",
    "pca_project",
    "pca_project_batch",
    "pca_reconstruct",
    "read_feature_meta",
    "read_features",
    "stack_signals",
    "stack_signals_batch",
    "vote_batch",
    "write_features",
]
