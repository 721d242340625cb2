"""PCA baseline feature extractor.

One global PCA is fitted on real-stacked frame vectors (I followed by Q,
1024 reals) pooled across nodes. The fit uses the SVD of the centered data
matrix; the test oracle is an independent dense covariance
eigendecomposition. Sign convention: the largest-magnitude entry of each
component is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientData
from ..sigsynth.channel import IQFrame
from .feature_io import N_COMPONENTS  # shared 32-dim feature size


@dataclass
class PcaModel:
    mean: np.ndarray  # (D,)
    components: np.ndarray  # (n_components, D), rows orthonormal
    explained_variance: np.ndarray  # (n_components,), nonincreasing

    def validate(self) -> None:
        gram = self.components @ self.components.T
        if not np.allclose(gram, np.eye(len(self.components)), atol=1e-6):
            raise ValueError("component rows are not orthonormal")
        if np.any(np.diff(self.explained_variance) > 1e-9):
            raise ValueError("explained variances must be nonincreasing")


def frame_vector(frame) -> np.ndarray:
    """I concatenated with Q as one real vector."""
    if isinstance(frame, IQFrame):
        return np.concatenate([frame.i, frame.q]).astype(np.float64)
    arr = np.asarray(frame, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[0] == 2:
        return arr.reshape(-1)
    return arr


def pca_fit(x: np.ndarray, n_components: int = N_COMPONENTS) -> PcaModel:
    """Top-variance components of the mean-centered data matrix (M, D).

    Raises:
        InsufficientData: if M <= n_components.
    """
    x = np.asarray(x, dtype=np.float64)
    m = len(x)
    if m <= n_components:
        raise InsufficientData(f"{m} vectors <= {n_components} components")
    mean = x.mean(axis=0)
    centered = x - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:n_components].copy()
    for row in components:
        if row[np.abs(row).argmax()] < 0:
            row *= -1.0
    variance = (s[:n_components] ** 2) / (m - 1)
    model = PcaModel(mean=mean, components=components, explained_variance=variance)
    model.validate()
    return model


def pca_project(model: PcaModel, frame) -> np.ndarray:
    """Centered projection of one frame (or raw vector) onto the components."""
    return (frame_vector(frame) - model.mean) @ model.components.T


def pca_project_batch(model: PcaModel, vectors: np.ndarray) -> np.ndarray:
    """(M, D) -> (M, n_components)."""
    return (np.asarray(vectors, dtype=np.float64) - model.mean) @ model.components.T


def pca_reconstruct(model: PcaModel, projection: np.ndarray, n_components: int | None = None) -> np.ndarray:
    comps = model.components if n_components is None else model.components[:n_components]
    proj = projection if n_components is None else projection[..., :n_components]
    return proj @ comps + model.mean
